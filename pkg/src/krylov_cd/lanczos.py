"""Operator-space Lanczos chains.

Starting from the normalized Hamiltonian derivative, repeated application
of the commutator map [H, .] generates the minimal operator subspace in
which the counterdiabatic term lives.  The three-term recursion

    b_0 O_0 = dH,   b_1 O_1 = [H, O_0],   b_n O_n = [H, O_{n-1}] - b_{n-1} O_{n-2}

produces an orthonormal chain O_0 .. O_{d-1} with positive coefficients
b_n, alternating between Hermitian (even index) and anti-Hermitian (odd
index) elements.  Every new element is re-orthogonalized against the whole
chain twice so that the exact identities relied on downstream (orthonormality,
parity alternation, closed-form coefficient solves) hold to machine precision.

The same recursion runs either directly on operators or on coordinate
vectors against a precomputed Liouvillian matrix; both routes produce
identical coefficients when they describe the same system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .operators import (BasisDeclaration, LiouvillianMatrix, Measure, StructuredOperator,
                        apply_liouvillian, inner_product)

#: relative residual below which a terminating chain is considered a clean
#: zero of exact arithmetic rather than a near-threshold truncation
_CLEAN_ZERO = 1e-12


class ZeroDerivativeError(ValueError):
    """The Hamiltonian derivative vanishes: the counterdiabatic term is trivially zero."""


class LanczosBreakdownError(RuntimeError):
    """A squared normalization coefficient lost positivity (numerical breakdown)."""


@dataclass
class KrylovChain:
    """Lanczos output: coefficients b_0..b_{d-1} and the orthonormal chain.

    ``operators`` holds the chain elements; for matrix-route chains they are
    structured operators over the declaring basis and ``vectors`` stores the
    raw coordinate columns.  ``truncated`` flags chains that terminated at
    the relative threshold rather than at a clean numerical zero (or that
    hit an explicit step cap).
    """

    b: np.ndarray
    operators: list = field(repr=False)
    vectors: np.ndarray | None = field(default=None, repr=False)
    truncated: bool = False

    @property
    def dimension(self) -> int:
        return len(self.b)

    @property
    def d_A(self) -> int:
        return self.dimension // 2

    @property
    def b0(self) -> float:
        return float(self.b[0])

    def tridiagonal(self) -> np.ndarray:
        """Symmetric tridiagonal matrix with zero diagonal and off-diagonal b_1..b_{d-1}."""
        return tridiagonal_matrix(self.b)

    def gram(self, measure: Measure) -> np.ndarray:
        n = self.dimension
        g = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                g[i, j] = inner_product(self.operators[i], self.operators[j], measure)
                g[j, i] = g[i, j].conjugate()
        return g


def tridiagonal_matrix(b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    d = len(b)
    t = np.zeros((d, d))
    if d > 1:
        t += np.diag(b[1:], 1) + np.diag(b[1:], -1)
    return t


def krylov_dimension_parity(chain: KrylovChain) -> str:
    """'even' or 'odd'; even chains occur exactly when the instantaneous
    eigenvalues of the Hamiltonian do not move along the protocol."""
    return "even" if chain.dimension % 2 == 0 else "odd"


def _check_square_norm(value: complex, floor: float) -> float:
    if not np.isfinite(value.real) or abs(value.imag) > max(1e-10 * abs(value), floor):
        raise LanczosBreakdownError(f"squared norm came out non-real: {value}")
    if value.real < -floor:
        raise LanczosBreakdownError(
            f"squared normalization coefficient lost positivity: {value.real:.3e}")
    return float(np.sqrt(max(value.real, 0.0)))


def build_krylov_chain(hamiltonian, hamiltonian_dot, measure: Measure,
                       tol: float = 1e-9, max_dim: int | None = None) -> KrylovChain:
    """Run the operator-space recursion from dH until it terminates.

    Terminates at the first step whose residual norm is at most
    ``tol * b_0`` and flags the chain as truncated when that residual sits
    above the clean-zero floor (near-degenerate protocols can push genuine
    later elements below the threshold; terminating there keeps the
    construction deterministic).
    """
    if not hamiltonian.is_hermitian():
        raise ValueError("chain construction requires a Hermitian Hamiltonian")
    if not hamiltonian_dot.is_hermitian():
        raise ValueError("chain construction requires a Hermitian Hamiltonian derivative")

    b0_sq = inner_product(hamiltonian_dot, hamiltonian_dot, measure)
    b0 = _check_square_norm(b0_sq, 1e-300)
    if b0 == 0.0:
        raise ZeroDerivativeError(
            "the Hamiltonian derivative is zero; the counterdiabatic term vanishes identically")

    ops = [hamiltonian_dot * (1.0 / b0)]
    b = [b0]
    truncated = False
    while True:
        w = apply_liouvillian(hamiltonian, ops[-1], check=False)
        if len(ops) >= 2:
            w = w - b[-1] * ops[-2]
        # full re-orthogonalization, run twice
        for _ in range(2):
            for op in ops:
                w = w - inner_product(op, w, measure) * op
        norm_sq = inner_product(w, w, measure)
        r = _check_square_norm(norm_sq, (tol * b0) ** 2)
        if r <= tol * b0:
            truncated = r > _CLEAN_ZERO * b0
            break
        b.append(r)
        ops.append(w * (1.0 / r))
        if max_dim is not None and len(ops) >= max_dim:
            truncated = True
            break
    return KrylovChain(b=np.array(b), operators=ops, truncated=truncated)


def build_chain_from_matrix(liouvillian, theta0, tol: float = 1e-9, *,
                            b0: float = 1.0, max_dim: int | None = None,
                            basis: BasisDeclaration | None = None,
                            validate: bool = True) -> KrylovChain:
    """Run the recursion on coordinate vectors against a Liouvillian matrix.

    ``liouvillian`` may be a dense array, a sparse matrix, or a
    :class:`LiouvillianMatrix` (whose basis is then attached to the chain).
    ``theta0`` must be normalized; ``b0`` carries the norm of dH so the
    chain coefficients match the operator route exactly.
    """
    if isinstance(liouvillian, LiouvillianMatrix):
        if basis is None:
            basis = liouvillian.basis
        liouvillian = liouvillian.matrix
    sparse = sp.issparse(liouvillian)
    if not sparse:
        liouvillian = np.asarray(liouvillian, dtype=complex)
    theta0 = np.asarray(theta0, dtype=complex).reshape(-1)
    norm0 = np.linalg.norm(theta0)
    if abs(norm0 - 1.0) > 1e-10:
        raise ValueError(f"theta0 must be normalized, got norm {norm0}")
    if validate:
        sym = (liouvillian + liouvillian.T)
        herm = (liouvillian - liouvillian.conj().T)
        scale = max(abs(liouvillian).max() if not sparse else
                    (abs(liouvillian).max() if liouvillian.nnz else 0.0), 1e-300)
        sym_max = abs(sym).max() if not sparse else (abs(sym).max() if sym.nnz else 0.0)
        herm_max = abs(herm).max() if not sparse else (abs(herm).max() if herm.nnz else 0.0)
        if sym_max > 1e-9 * scale or herm_max > 1e-9 * scale:
            raise ValueError("matrix is not antisymmetric-Hermitian")

    vecs = [theta0]
    b = [float(b0)]
    truncated = False
    while True:
        w = liouvillian @ vecs[-1]
        if len(vecs) >= 2:
            w = w - b[-1] * vecs[-2]
        basis_mat = np.column_stack(vecs)
        for _ in range(2):
            w = w - basis_mat @ (basis_mat.conj().T @ w)
        r = float(np.linalg.norm(w))
        if r <= tol * b0:
            truncated = r > _CLEAN_ZERO * b0
            break
        b.append(r)
        vecs.append(w / r)
        if max_dim is not None and len(vecs) >= max_dim:
            truncated = True
            break

    vectors = np.column_stack(vecs)
    if basis is not None:
        operators = [StructuredOperator(v, basis) for v in vecs]
    else:
        abstract = BasisDeclaration(size=vectors.shape[0])
        operators = [StructuredOperator(v, abstract) for v in vecs]
    return KrylovChain(b=np.array(b), operators=operators, vectors=vectors,
                       truncated=truncated)
