"""Operator backends, measures, inner products, and Liouvillian matrices.

Three interchangeable operator representations are supported:

* :class:`~krylov_cd.paulis.PauliOperator` -- sparse Pauli-string sums for
  spin chains; all uniform-measure traces are evaluated by string matching,
  never through matrices.
* :class:`DenseOperator` -- explicit complex matrices; the only backend on
  which Gibbs-weighted inner products are evaluated directly.
* :class:`StructuredOperator` -- a coordinate vector over a declared
  orthonormal operator basis; used by models whose commutator algebra
  closes on a small operator family.

The inner product of two operators is

    (X, Y) = Tr[rho (X^dag Y + Y X^dag)] / 2

with a positive-definite weight ``rho`` that commutes with the Hamiltonian.
A uniform weight makes it proportional to the Hilbert-Schmidt pairing; the
Gibbs weight exp(-beta H)/Z must first be bound to the Hamiltonian at the
current parameter point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .paulis import PauliOperator

DENSE_CAP = 2 ** 14


class DenseOperator:
    """Dense-matrix operator backend."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        mat = np.asarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {mat.shape}")
        self.matrix = mat

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def _check_compatible(self, other):
        if not isinstance(other, DenseOperator):
            raise TypeError(f"expected DenseOperator, got {type(other).__name__}")
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check_compatible(other)
        return DenseOperator(self.matrix + other.matrix)

    def __sub__(self, other):
        self._check_compatible(other)
        return DenseOperator(self.matrix - other.matrix)

    def __mul__(self, scalar):
        return DenseOperator(self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return DenseOperator(-self.matrix)

    def dagger(self):
        return DenseOperator(self.matrix.conj().T)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(np.abs(self.matrix).max(), 1e-300)
        return np.abs(self.matrix - self.matrix.conj().T).max() <= tol * scale

    def is_anti_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(np.abs(self.matrix).max(), 1e-300)
        return np.abs(self.matrix + self.matrix.conj().T).max() <= tol * scale

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def __repr__(self):
        return f"DenseOperator(dim={self.dim})"


class StructuredOperator:
    """Coordinate vector over a declared orthonormal operator basis."""

    __slots__ = ("coords", "basis")

    def __init__(self, coords, basis: "BasisDeclaration"):
        vec = np.asarray(coords, dtype=complex).reshape(-1)
        if len(vec) != len(basis):
            raise ValueError(f"coordinate length {len(vec)} != basis size {len(basis)}")
        self.coords = vec
        self.basis = basis

    def _check_compatible(self, other):
        if not isinstance(other, StructuredOperator):
            raise TypeError(f"expected StructuredOperator, got {type(other).__name__}")
        if self.basis is not other.basis:
            raise ValueError("structured operators belong to different basis declarations")

    def __add__(self, other):
        self._check_compatible(other)
        return StructuredOperator(self.coords + other.coords, self.basis)

    def __sub__(self, other):
        self._check_compatible(other)
        return StructuredOperator(self.coords - other.coords, self.basis)

    def __mul__(self, scalar):
        return StructuredOperator(self.coords * complex(scalar), self.basis)

    __rmul__ = __mul__

    def __neg__(self):
        return StructuredOperator(-self.coords, self.basis)

    def dagger(self):
        # basis elements are Hermitian, so conjugating coordinates suffices
        return StructuredOperator(self.coords.conj(), self.basis)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(np.abs(self.coords).max(initial=0.0), 1e-300)
        return np.abs(self.coords.imag).max(initial=0.0) <= tol * scale

    def is_anti_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(np.abs(self.coords).max(initial=0.0), 1e-300)
        return np.abs(self.coords.real).max(initial=0.0) <= tol * scale

    def is_zero(self) -> bool:
        return not self.coords.any()

    def realize(self):
        """Expand into the basis elements' concrete backend."""
        if self.basis.elements is None:
            raise ValueError("basis declaration is abstract; nothing to realize into")
        out = None
        for c, el in zip(self.coords, self.basis.elements):
            piece = el * c
            out = piece if out is None else out + piece
        return out

    def __repr__(self):
        return f"StructuredOperator(size={len(self.coords)})"


class Measure:
    """Positive-definite weight rho(H) entering the operator inner product.

    ``uniform(scale)`` is rho = scale * identity.  ``gibbs(beta)`` is the
    normalized exp(-beta H)/Z, evaluated by a dense eigendecomposition of
    the Hamiltonian at the current parameter point once :meth:`bind` is
    called.
    """

    __slots__ = ("kind", "scale", "beta", "_density")

    def __init__(self, kind, scale=None, beta=None, density=None):
        self.kind = kind
        self.scale = scale
        self.beta = beta
        self._density = density

    @classmethod
    def uniform(cls, scale: float) -> "Measure":
        if not scale > 0:
            raise ValueError(f"uniform measure scale must be positive, got {scale}")
        return cls("uniform", scale=float(scale))

    @classmethod
    def gibbs(cls, beta: float) -> "Measure":
        if beta < 0:
            raise ValueError(f"Gibbs measure requires beta >= 0, got {beta}")
        return cls("gibbs", beta=float(beta))

    @property
    def is_bound(self) -> bool:
        return self.kind == "uniform" or self._density is not None

    def bind(self, hamiltonian) -> "Measure":
        """Attach the Hamiltonian defining the Gibbs weight (no-op for uniform)."""
        if self.kind == "uniform":
            return self
        mat = hamiltonian.matrix if isinstance(hamiltonian, DenseOperator) else np.asarray(hamiltonian, dtype=complex)
        evals, vecs = np.linalg.eigh(mat)
        weights = np.exp(-self.beta * (evals - evals.min()))
        weights /= weights.sum()
        density = (vecs * weights) @ vecs.conj().T
        return Measure("gibbs", beta=self.beta, density=density)

    def density_matrix(self, dim: int | None = None) -> np.ndarray:
        if self.kind == "uniform":
            if dim is None:
                raise ValueError("uniform measure needs the dimension to form a density matrix")
            return self.scale * np.eye(dim, dtype=complex)
        if self._density is None:
            raise ValueError("Gibbs measure must be bound to a Hamiltonian first")
        return self._density

    def __repr__(self):
        if self.kind == "uniform":
            return f"Measure.uniform({self.scale})"
        return f"Measure.gibbs({self.beta}{', bound' if self.is_bound else ''})"


# ---------------------------------------------------------------------------
# inner products and the Liouvillian


def _pauli_uniform_product(x: PauliOperator, y: PauliOperator, scale: float) -> complex:
    return scale * 2 ** x.site_count * x.overlap(y)


def inner_product(x, y, measure: Measure) -> complex:
    """(X, Y) = Tr[rho (X^dag Y + Y X^dag)] / 2 under the given measure.

    Real for two Hermitian or two anti-Hermitian arguments; complex in
    general for mixed pairs.
    """
    if isinstance(x, PauliOperator) and isinstance(y, PauliOperator):
        x._check_compatible(y)
        if measure.kind == "uniform":
            return _pauli_uniform_product(x, y, measure.scale)
        # Gibbs weights need matrices
        return inner_product(DenseOperator(x.to_matrix()), DenseOperator(y.to_matrix()), measure)
    if isinstance(x, DenseOperator) and isinstance(y, DenseOperator):
        x._check_compatible(y)
        if measure.kind == "uniform":
            return measure.scale * np.vdot(x.matrix, y.matrix)
        rho = measure.density_matrix(x.dim)
        xd = x.matrix.conj().T
        return 0.5 * (np.trace(rho @ xd @ y.matrix) + np.trace(rho @ y.matrix @ xd))
    if isinstance(x, StructuredOperator) and isinstance(y, StructuredOperator):
        x._check_compatible(y)
        return np.vdot(x.coords, y.coords)
    raise TypeError(
        f"backend mismatch in inner product: {type(x).__name__} vs {type(y).__name__}")


def operator_norm(op, measure: Measure) -> float:
    val = inner_product(op, op, measure)
    if abs(val.imag) > 1e-10 * max(abs(val), 1e-300):
        raise ValueError(f"operator norm came out non-real: {val}")
    return float(np.sqrt(max(val.real, 0.0)))


def apply_liouvillian(hamiltonian, op, *, check: bool = True):
    """Commutator [H, O] in the operands' shared backend.

    Hermitian O maps to an anti-Hermitian result and vice versa.
    """
    if check and not hamiltonian.is_hermitian():
        raise ValueError("Liouvillian requires a Hermitian Hamiltonian")
    if isinstance(hamiltonian, PauliOperator) and isinstance(op, PauliOperator):
        return hamiltonian.commutator(op)
    if isinstance(hamiltonian, DenseOperator) and isinstance(op, DenseOperator):
        hamiltonian._check_compatible(op)
        h, o = hamiltonian.matrix, op.matrix
        return DenseOperator(h @ o - o @ h)
    if isinstance(op, StructuredOperator):
        raise TypeError(
            "structured operators evolve through the Liouvillian matrix; "
            "build it with build_liouvillian_matrix and use the matrix route")
    raise TypeError(
        f"backend mismatch: {type(hamiltonian).__name__} vs {type(op).__name__}")


def to_dense(op, cap: int = DENSE_CAP) -> np.ndarray:
    """Faithful matrix representation of any backend."""
    if isinstance(op, np.ndarray):
        return np.asarray(op, dtype=complex)
    if isinstance(op, DenseOperator):
        if op.dim > cap:
            raise ValueError(f"dimension {op.dim} exceeds cap {cap}")
        return op.matrix
    if isinstance(op, PauliOperator):
        return op.to_matrix(cap)
    if isinstance(op, StructuredOperator):
        concrete = op.realize()
        return to_dense(concrete, cap)
    raise TypeError(f"cannot convert {type(op).__name__} to a dense matrix")


def zero_like(op):
    if isinstance(op, PauliOperator):
        return PauliOperator(op.site_count)
    if isinstance(op, DenseOperator):
        return DenseOperator(np.zeros((op.dim, op.dim), dtype=complex))
    if isinstance(op, StructuredOperator):
        return StructuredOperator(np.zeros(len(op.coords), dtype=complex), op.basis)
    raise TypeError(f"unsupported operator type {type(op).__name__}")


# ---------------------------------------------------------------------------
# basis declarations and the matrix representation of the Liouvillian


class BasisDeclaration:
    """Ordered list of orthonormal Hermitian basis operators.

    Elements may carry parity tags: ``"even"`` for operators appearing in
    the Hermitian sector of commutator chains, ``"odd"`` for those whose
    i-multiples appear in the anti-Hermitian sector.  With a full tagging
    the Liouvillian couples the sectors only and its matrix takes the
    off-diagonal block form [[0, M], [M^dag, 0]].

    ``elements`` may be None for an abstract declaration whose
    orthonormality is guaranteed by construction (e.g. a closed commutator
    algebra with analytically normalized members); such declarations only
    support coordinate arithmetic.
    """

    def __init__(self, elements=None, parity=None, body_sizes=None, labels=None, size=None):
        if elements is None and size is None:
            raise ValueError("need either concrete elements or an explicit size")
        self.elements = list(elements) if elements is not None else None
        self._size = len(self.elements) if self.elements is not None else int(size)
        if parity is not None:
            parity = list(parity)
            if len(parity) != self._size:
                raise ValueError("parity tags must match the number of elements")
            bad = set(parity) - {"even", "odd"}
            if bad:
                raise ValueError(f"invalid parity tags {bad}")
        self.parity = parity
        if body_sizes is not None:
            body_sizes = list(body_sizes)
            if len(body_sizes) != self._size:
                raise ValueError("body size tags must match the number of elements")
        self.body_sizes = body_sizes
        self.labels = list(labels) if labels is not None else None

    def __len__(self):
        return self._size

    @property
    def even_indices(self):
        if self.parity is None:
            return None
        return [i for i, p in enumerate(self.parity) if p == "even"]

    @property
    def odd_indices(self):
        if self.parity is None:
            return None
        return [i for i, p in enumerate(self.parity) if p == "odd"]

    def gram(self, measure: Measure) -> np.ndarray:
        if self.elements is None:
            raise ValueError("abstract basis declaration has no computable Gram matrix")
        n = len(self)
        g = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                g[i, j] = inner_product(self.elements[i], self.elements[j], measure)
                g[j, i] = g[i, j].conjugate()
        return g

    def max_orthonormality_defect(self, measure: Measure) -> float:
        g = self.gram(measure)
        return float(np.abs(g - np.eye(len(self))).max())

    def require_orthonormal(self, measure: Measure, tol: float = 1e-10):
        defect = self.max_orthonormality_defect(measure)
        if defect > tol:
            raise ValueError(
                f"basis is not orthonormal under the measure: defect {defect:.3e} > {tol:.0e}")

    def project(self, op, measure: Measure, *, require_in_span: float | None = None) -> np.ndarray:
        """Coordinates (X_mu, op); optionally verify op lies in the span."""
        if self.elements is None:
            raise ValueError("abstract basis declaration cannot project concrete operators")
        coords = np.array([inner_product(el, op, measure) for el in self.elements])
        if require_in_span is not None:
            total = inner_product(op, op, measure).real
            residual = np.sqrt(max(total - float(np.abs(coords) ** 2
                                                 @ np.ones(len(coords))), 0.0))
            if residual > require_in_span * max(np.sqrt(max(total, 0.0)), 1e-300):
                raise ValueError(
                    f"operator lies outside the declared span: residual {residual:.3e}")
        return coords


@dataclass
class LiouvillianMatrix:
    """Matrix of the commutator map on a declared basis: antisymmetric and Hermitian."""

    matrix: np.ndarray
    basis: BasisDeclaration
    m_block: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def build_liouvillian_matrix(hamiltonian, basis: BasisDeclaration, measure: Measure,
                             *, ortho_tol: float = 1e-10) -> LiouvillianMatrix:
    """Matrix L with L[mu, nu] = (X_mu, [H, X_nu]) on an orthonormal basis.

    The result satisfies L^dag = L and L^T = -L with an exactly zero
    diagonal; with parity-tagged bases the intra-sector entries vanish and
    the rectangular block M[mu, nu] = (X_even_mu, [H, X_odd_nu]) is
    extracted.
    """
    basis.require_orthonormal(measure, ortho_tol)
    n = len(basis)
    images = [apply_liouvillian(hamiltonian, x, check=False) for x in basis.elements]
    if not hamiltonian.is_hermitian():
        raise ValueError("Liouvillian matrix requires a Hermitian Hamiltonian")
    mat = np.zeros((n, n), dtype=complex)
    for nu, img in enumerate(images):
        for mu in range(n):
            mat[mu, nu] = inner_product(basis.elements[mu], img, measure)
    np.fill_diagonal(mat, 0.0)  # (X, [H, X]) vanishes identically
    scale = max(np.abs(mat).max(), 1e-300)
    asym = np.abs(mat + mat.T).max() / scale
    herm = np.abs(mat - mat.conj().T).max() / scale
    if asym > 1e-9 or herm > 1e-9:
        raise ValueError(
            f"Liouvillian matrix failed structure checks (antisymmetry defect {asym:.2e}, "
            f"hermiticity defect {herm:.2e}); is the basis Hermitian?")

    m_block = None
    if basis.parity is not None:
        ev, od = basis.even_indices, basis.odd_indices
        intra = 0.0
        if len(ev) > 1:
            intra = max(intra, np.abs(mat[np.ix_(ev, ev)]).max())
        if len(od) > 1:
            intra = max(intra, np.abs(mat[np.ix_(od, od)]).max())
        if intra > 1e-9 * scale:
            raise ValueError(
                f"parity-tagged basis has intra-sector Liouvillian entries ({intra:.2e}); "
                "the tagging does not match the Hamiltonian")
        m_block = mat[np.ix_(ev, od)]
    return LiouvillianMatrix(matrix=mat, basis=basis, m_block=m_block)


def liouvillian_from_m_block(m_block: np.ndarray) -> np.ndarray:
    """Assemble the full antisymmetric-Hermitian matrix [[0, M], [M^dag, 0]]."""
    m = np.asarray(m_block, dtype=complex)
    dx, dy = m.shape
    out = np.zeros((dx + dy, dx + dy), dtype=complex)
    out[:dx, dx:] = m
    out[dx:, :dx] = m.conj().T
    return out
