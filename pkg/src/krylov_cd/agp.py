"""Counterdiabatic coefficients and operator assembly from a Lanczos chain.

The counterdiabatic term is carried entirely by the odd chain elements,

    A = i b_0 sum_{k=1..floor(d/2)} alpha_k O_{2k-1},

with coefficients fixed by the chain coefficients alone.  For even chain
length the defining equation is solved exactly by the two-term recurrence
alpha_1 = -1/b_1, alpha_{k+1} = -(b_{2k}/b_{2k+1}) alpha_k.  For odd chain
length the coefficients solve the symmetric positive-definite tridiagonal
system with diagonal b_{2k-1}^2 + b_{2k}^2, off-diagonal b_{2k} b_{2k+1},
and right-hand side (-b_1, 0, ..., 0); an equivalent route corrects the
even-length recurrence with the zero mode of the chain generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solveh_banded

from .lanczos import KrylovChain
from .operators import zero_like
from .wavefunction import generator_matrix, zero_mode_vector

__all__ = [
    "AgpExpansion", "DegenerateLevelsError", "solve_alpha", "solve_alpha_even",
    "solve_alpha_odd_tridiagonal", "solve_alpha_odd_zero_mode", "assemble_cd",
    "spectral_agp_oracle", "agp_norm",
]


class DegenerateLevelsError(RuntimeError):
    """The spectral construction hit a degenerate level pair with nonzero coupling."""


@dataclass
class AgpExpansion:
    """Coefficients alpha_1..alpha_{d_A} and the assembled Hermitian operator."""

    alpha: np.ndarray
    b0: float
    cd_operator: object
    chain: KrylovChain | None = field(default=None, repr=False)
    nc_coefficient: float | None = None

    @property
    def d_A(self) -> int:
        return len(self.alpha)

    def squared_norm(self) -> float:
        """(A, A) = b_0^2 sum_k alpha_k^2."""
        return float(self.b0 ** 2 * np.sum(self.alpha ** 2))


def _offdiag(b: np.ndarray) -> np.ndarray:
    return np.asarray(b, dtype=float)[1:]


def solve_alpha_even(b) -> np.ndarray:
    """Ratio recurrence for even chain length (zero residual route)."""
    b = np.asarray(b, dtype=float)
    d = len(b)
    if d % 2 != 0:
        raise ValueError(f"even-length solver called with d = {d}")
    d_a = d // 2
    alpha = np.empty(d_a)
    alpha[0] = -1.0 / b[1]
    for k in range(1, d_a):
        alpha[k] = -(b[2 * k] / b[2 * k + 1]) * alpha[k - 1]
    return alpha


def solve_alpha_odd_tridiagonal(b) -> np.ndarray:
    """Symmetric positive-definite tridiagonal solve for odd chain length, O(d_A)."""
    b = np.asarray(b, dtype=float)
    d = len(b)
    if d % 2 != 1:
        raise ValueError(f"odd-length solver called with d = {d}")
    d_a = d // 2
    if d_a == 0:
        return np.zeros(0)
    diag = np.array([b[2 * k - 1] ** 2 + b[2 * k] ** 2 for k in range(1, d_a + 1)])
    band = np.zeros((2, d_a))
    band[0] = diag
    if d_a > 1:
        band[1, :-1] = np.array([b[2 * k] * b[2 * k + 1] for k in range(1, d_a)])
    rhs = np.zeros(d_a)
    rhs[0] = -b[1]
    try:
        return solveh_banded(band, rhs, lower=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - positive b forbids this
        raise RuntimeError(f"tridiagonal coefficient system is singular: {exc}") from exc


def solve_alpha_odd_zero_mode(b):
    """Recurrence route for odd chain length, corrected by the generator zero mode.

    Returns (alpha, phi) with phi the normalized zero-mode vector whose even
    components are the products b_1 b_3 .. / b_2 b_4 .. .
    """
    b = np.asarray(b, dtype=float)
    d = len(b)
    if d % 2 != 1:
        raise ValueError(f"odd-length solver called with d = {d}")
    phi = zero_mode_vector(b)
    d_a = d // 2
    alpha = np.empty(d_a)
    if d_a == 0:
        return alpha, phi
    alpha[0] = (-1.0 + phi[0] ** 2) / b[1]
    for k in range(1, d_a):
        alpha[k] = (-(b[2 * k] * alpha[k - 1])
                    + (-1) ** k * phi[2 * k] * phi[0]) / b[2 * k + 1]
    return alpha, phi


def solve_alpha(b) -> np.ndarray:
    """Dispatch on chain-length parity (tridiagonal route for odd length)."""
    b = np.asarray(b, dtype=float)
    if len(b) % 2 == 0:
        return solve_alpha_even(b)
    return solve_alpha_odd_tridiagonal(b)


def assemble_cd(chain: KrylovChain, alpha=None) -> AgpExpansion:
    """Hermitian operator i b_0 sum_k alpha_k O_{2k-1} on the chain's backend."""
    if alpha is None:
        alpha = solve_alpha(chain.b)
    alpha = np.asarray(alpha, dtype=float)
    if len(alpha) != chain.d_A:
        raise ValueError(
            f"expected {chain.d_A} coefficients for a chain of length {chain.dimension}, "
            f"got {len(alpha)}")
    op = zero_like(chain.operators[0])
    b0 = chain.b0
    for k, a in enumerate(alpha, start=1):
        op = op + (1j * b0 * a) * chain.operators[2 * k - 1]
    return AgpExpansion(alpha=alpha, b0=b0, cd_operator=op, chain=chain)


def spectral_agp_oracle(hamiltonian, hamiltonian_dot, *,
                        degeneracy_tol: float = 1e-10, coupling_tol: float = 1e-8,
                        on_degenerate: str = "raise") -> np.ndarray:
    """Dense construction from the eigenbasis: A_mn = i <m|dH|n> / (e_n - e_m).

    The diagonal is zero (the eigenstate phases are fixed so that
    <n|d n> = 0).  Level pairs closer than ``degeneracy_tol`` times the
    spectral scale are treated as degenerate: couplings above
    ``coupling_tol * ||dH||`` make the construction ill-defined and raise,
    naming the pair; ``on_degenerate="zero"`` instead drops those elements,
    which yields the minimal-norm potential used for state tracking.
    """
    h = hamiltonian.matrix if hasattr(hamiltonian, "matrix") else np.asarray(hamiltonian, dtype=complex)
    dh = hamiltonian_dot.matrix if hasattr(hamiltonian_dot, "matrix") else np.asarray(hamiltonian_dot, dtype=complex)
    if np.abs(h - h.conj().T).max() > 1e-10 * max(np.abs(h).max(), 1e-300):
        raise ValueError("spectral construction requires a Hermitian Hamiltonian")
    evals, vecs = np.linalg.eigh(h)
    coupling = vecs.conj().T @ dh @ vecs
    h_scale = max(np.abs(evals).max(), 1e-300)
    dh_scale = max(np.linalg.norm(dh, 2), 1e-300)

    gaps = evals[None, :] - evals[:, None]
    degenerate = np.abs(gaps) < degeneracy_tol * h_scale
    blocked = degenerate & (np.abs(coupling) > coupling_tol * dh_scale)
    np.fill_diagonal(blocked, False)
    if blocked.any():
        if on_degenerate == "raise":
            m, n = np.argwhere(blocked)[0]
            raise DegenerateLevelsError(
                f"levels {m} and {n} are degenerate (energies {evals[m]:.6g}, {evals[n]:.6g}) "
                f"but coupled by dH ({abs(coupling[m, n]):.3e}); the potential is ill-defined")
        if on_degenerate != "zero":
            raise ValueError(f"unknown degeneracy policy {on_degenerate!r}")

    amp = np.zeros_like(coupling)
    ok = ~degenerate
    amp[ok] = 1j * coupling[ok] / gaps[ok]
    return vecs @ amp @ vecs.conj().T


def agp_norm(chain: KrylovChain, alpha, *, check_tol: float = 1e-9) -> float:
    """(A, A) = b_0^2 sum alpha_k^2, cross-checked against the mode-sum form.

    The alternative evaluates b_0^2 <0|(Q i B Q)^{-2}|0> with Q projecting
    off the explicitly constructed zero mode of the chain generator; the
    two must agree to ``check_tol`` relative.
    """
    alpha = np.asarray(alpha, dtype=float)
    direct = float(chain.b0 ** 2 * np.sum(alpha ** 2))
    gen = generator_matrix(chain.b)
    d = chain.dimension
    herm = 1j * gen
    if d % 2 == 1:
        phi = zero_mode_vector(chain.b).astype(complex)
        q = np.eye(d) - np.outer(phi, phi.conj())
        herm = q @ herm @ q
    evals, vecs = np.linalg.eigh(herm)
    cut = 1e-12 * max(np.abs(evals).max(), 1e-300)
    keep = np.abs(evals) > cut
    alt = float(chain.b0 ** 2 * np.sum(np.abs(vecs[0, keep]) ** 2 / evals[keep] ** 2))
    scale = max(direct, alt, 1e-300)
    if abs(direct - alt) > check_tol * scale:
        raise RuntimeError(
            f"norm identity violated: direct {direct:.12e} vs mode sum {alt:.12e}")
    return direct
