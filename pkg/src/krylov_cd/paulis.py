"""Pauli-string algebra for spin chains, kept symbolic (no matrices).

A string is a tensor product of single-site operators from {I, X, Y, Z}
carrying an overall phase in {1, -1, i, -i}; products of strings close on
this set.  Sums of strings are stored as sparse maps from bare (phase +1)
strings to complex coefficients, so products, commutators and traces cost
O(#terms) instead of O(4**n_sites).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PHASES = (1 + 0j, -1 + 0j, 1j, -1j)
_LETTERS = frozenset("IXYZ")

# single-site products: (a, b) -> (c, p) with a.b = p*c
_SITE_PRODUCT = {
    ("I", "I"): ("I", 1), ("I", "X"): ("X", 1), ("I", "Y"): ("Y", 1), ("I", "Z"): ("Z", 1),
    ("X", "I"): ("X", 1), ("X", "X"): ("I", 1), ("X", "Y"): ("Z", 1j), ("X", "Z"): ("Y", -1j),
    ("Y", "I"): ("Y", 1), ("Y", "X"): ("Z", -1j), ("Y", "Y"): ("I", 1), ("Y", "Z"): ("X", 1j),
    ("Z", "I"): ("Z", 1), ("Z", "X"): ("Y", 1j), ("Z", "Y"): ("X", -1j), ("Z", "Z"): ("I", 1),
}

_SITE_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _word_product(a: str, b: str) -> tuple[str, complex, int]:
    """Site-wise product of two letter words.

    Returns (letters, phase, clashes) where clashes counts the sites on
    which the single-site factors anticommute; the pair of words commutes
    exactly when that count is even.
    """
    phase = 1 + 0j
    out = []
    clashes = 0
    for x, y in zip(a, b):
        c, p = _SITE_PRODUCT[x, y]
        out.append(c)
        if p != 1:
            phase *= p
            clashes += 1
    return "".join(out), phase, clashes


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Pauli operators with an overall phase."""

    letters: str
    phase: complex = 1 + 0j

    def __post_init__(self):
        if not set(self.letters) <= _LETTERS:
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        phase = complex(self.phase)
        if phase not in _PHASES:
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase!r}")
        object.__setattr__(self, "phase", phase)

    @property
    def site_count(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.site_count != other.site_count:
            raise ValueError("site count mismatch in Pauli product")
        letters, phase, _ = _word_product(self.letters, other.letters)
        return PauliString(letters, self.phase * other.phase * phase)

    def dagger(self) -> "PauliString":
        return PauliString(self.letters, self.phase.conjugate())

    def is_identity(self) -> bool:
        return set(self.letters) <= {"I"}

    def trace(self) -> complex:
        """Trace over the full 2**site_count Hilbert space."""
        if self.is_identity():
            return self.phase * 2 ** self.site_count
        return 0j

    def commutes_with(self, other: "PauliString") -> bool:
        _, _, clashes = _word_product(self.letters, other.letters)
        return clashes % 2 == 0

    def support_span(self) -> int:
        """Sites between the first and last non-identity letter, inclusive (0 for identity)."""
        return _support_span(self.letters)

    def to_matrix(self) -> np.ndarray:
        mat = np.array([[self.phase]], dtype=complex)
        for a in self.letters:
            mat = np.kron(mat, _SITE_MATRICES[a])
        return mat


def _support_span(letters: str) -> int:
    first = last = -1
    for i, a in enumerate(letters):
        if a != "I":
            if first < 0:
                first = i
            last = i
    return 0 if first < 0 else last - first + 1


class PauliOperator:
    """Sparse sum of Pauli strings.

    ``terms`` maps bare letter words (phase +1) to complex coefficients;
    string phases are folded into the coefficients, which keeps the
    representation canonical: an operator is Hermitian exactly when every
    coefficient is real, anti-Hermitian when every coefficient is purely
    imaginary.
    """

    __slots__ = ("site_count", "terms")

    # relative floor for coefficients left behind by cancellations
    _PRUNE = 1e-15

    def __init__(self, site_count: int, terms: dict[str, complex] | None = None):
        self.site_count = int(site_count)
        self.terms: dict[str, complex] = dict(terms) if terms else {}

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_strings(cls, site_count, entries) -> "PauliOperator":
        """Build from an iterable of (PauliString | letter word, coefficient)."""
        op = cls(site_count)
        for s, c in entries:
            if isinstance(s, PauliString):
                letters, c = s.letters, complex(c) * s.phase
            else:
                letters = s
            if len(letters) != site_count:
                raise ValueError("site count mismatch in Pauli term")
            op.terms[letters] = op.terms.get(letters, 0j) + complex(c)
        op._prune()
        return op

    @classmethod
    def from_site_map(cls, site_count, site_letters: dict[int, str], coefficient=1.0) -> "PauliOperator":
        """Single string with letters placed at the given sites (taken mod site_count)."""
        word = ["I"] * site_count
        for i, a in site_letters.items():
            j = i % site_count
            if word[j] != "I":
                raise ValueError(f"two letters assigned to site {j}")
            word[j] = a
        return cls(site_count, {"".join(word): complex(coefficient)})

    def copy(self) -> "PauliOperator":
        return PauliOperator(self.site_count, self.terms)

    # ---- bookkeeping ---------------------------------------------------

    def _prune(self):
        if not self.terms:
            return
        top = max(abs(c) for c in self.terms.values())
        if top == 0.0:
            self.terms.clear()
            return
        floor = self._PRUNE * top
        self.terms = {s: c for s, c in self.terms.items() if abs(c) > floor}

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_zero(self) -> bool:
        return not self.terms

    # ---- linear algebra -------------------------------------------------

    def _check_compatible(self, other: "PauliOperator"):
        if not isinstance(other, PauliOperator):
            raise TypeError(f"expected PauliOperator, got {type(other).__name__}")
        if self.site_count != other.site_count:
            raise ValueError(
                f"site count mismatch: {self.site_count} vs {other.site_count}")

    def __add__(self, other: "PauliOperator") -> "PauliOperator":
        self._check_compatible(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0j) + c
        res = PauliOperator(self.site_count, out)
        res._prune()
        return res

    def __sub__(self, other: "PauliOperator") -> "PauliOperator":
        self._check_compatible(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0j) - c
        res = PauliOperator(self.site_count, out)
        res._prune()
        return res

    def __mul__(self, scalar) -> "PauliOperator":
        scalar = complex(scalar)
        return PauliOperator(self.site_count, {s: c * scalar for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "PauliOperator":
        return self * (-1.0)

    def dagger(self) -> "PauliOperator":
        return PauliOperator(self.site_count, {s: c.conjugate() for s, c in self.terms.items()})

    def __matmul__(self, other: "PauliOperator") -> "PauliOperator":
        """Full operator product."""
        self._check_compatible(other)
        out: dict[str, complex] = {}
        for sa, ca in self.terms.items():
            for sb, cb in other.terms.items():
                letters, phase, _ = _word_product(sa, sb)
                out[letters] = out.get(letters, 0j) + ca * cb * phase
        res = PauliOperator(self.site_count, out)
        res._prune()
        return res

    def commutator(self, other: "PauliOperator") -> "PauliOperator":
        """[self, other]; pairs of commuting strings are skipped outright."""
        self._check_compatible(other)
        out: dict[str, complex] = {}
        for sa, ca in self.terms.items():
            for sb, cb in other.terms.items():
                letters, phase, clashes = _word_product(sa, sb)
                if clashes % 2 == 0:
                    continue
                # anticommuting strings: [A, B] = 2 A B
                out[letters] = out.get(letters, 0j) + 2.0 * ca * cb * phase
        res = PauliOperator(self.site_count, out)
        res._prune()
        return res

    def overlap(self, other: "PauliOperator") -> complex:
        """Tr[self^dag other] / 2**site_count, by string matching."""
        self._check_compatible(other)
        if len(self.terms) > len(other.terms):
            return sum(c.conjugate() * other.terms[s]
                       for s, c in self.terms.items() if s in other.terms) + 0j
        return sum(self.terms[s].conjugate() * c
                   for s, c in other.terms.items() if s in self.terms) + 0j

    def trace(self) -> complex:
        word = "I" * self.site_count
        return self.terms.get(word, 0j) * 2 ** self.site_count

    # ---- structure ------------------------------------------------------

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        top = self.max_abs_coefficient()
        if top == 0.0:
            return True
        return max(abs(c.imag) for c in self.terms.values()) <= tol * top

    def is_anti_hermitian(self, tol: float = 1e-10) -> bool:
        top = self.max_abs_coefficient()
        if top == 0.0:
            return True
        return max(abs(c.real) for c in self.terms.values()) <= tol * top

    def coefficient_norms_by_span(self) -> dict[int, float]:
        """Sum of |coefficient|^2 grouped by string support span."""
        out: dict[int, float] = {}
        for s, c in self.terms.items():
            p = _support_span(s)
            out[p] = out.get(p, 0.0) + abs(c) ** 2
        return out

    def to_matrix(self, cap: int = 2 ** 14) -> np.ndarray:
        dim = 2 ** self.site_count
        if dim > cap:
            raise ValueError(
                f"dense conversion of a {self.site_count}-site operator needs dimension "
                f"{dim} > cap {cap}")
        mat = np.zeros((dim, dim), dtype=complex)
        for s, c in self.terms.items():
            mat += c * PauliString(s).to_matrix()
        return mat

    def __repr__(self):
        head = ", ".join(f"{c:.3g}*{s}" for s, c in list(self.terms.items())[:4])
        more = "" if len(self.terms) <= 4 else f", ... ({len(self.terms)} terms)"
        return f"PauliOperator({self.site_count} sites: {head}{more})"
