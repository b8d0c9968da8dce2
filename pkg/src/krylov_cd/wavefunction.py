"""Fictitious-time operator wave function on the chain.

Heisenberg-evolving the first chain element under exp(iHs) keeps the
dynamics inside the chain, with amplitudes phi_n(s) governed by

    d phi / ds = B phi,   B[n, n+1] = -b_{n+1},  B[n+1, n] = +b_{n+1},

and phi(0) = (1, 0, ..., 0).  i*B is Hermitian, its spectrum comes in
+/- pairs (the reflection diag(1, -1, 1, ...) maps one sign to the other),
and a zero mode exists exactly for odd chain length, with closed-form
components built from ratios of the chain coefficients.  The half-line
Laplace transform of the odd amplitudes recovers the counterdiabatic
coefficients, which gives an independent route to alpha_k.
"""

from __future__ import annotations

import numpy as np

from .lanczos import tridiagonal_matrix

#: eigenvalues of i*B below this fraction of the spectral radius count as the zero mode
_ZERO_MODE_CUT = 1e-12


def generator_matrix(b) -> np.ndarray:
    """Real d x d generator with superdiagonal -b_n and subdiagonal +b_n."""
    b = np.asarray(b, dtype=float)
    d = len(b)
    mat = np.zeros((d, d))
    if d > 1:
        off = b[1:]
        mat += np.diag(-off, 1) + np.diag(off, -1)
    return mat


def eigensystem(generator: np.ndarray):
    """Real eigenvalues and eigenvectors of i*B (Hermitian), ascending.

    The spectrum is symmetric about zero; a zero eigenvalue appears exactly
    when the dimension is odd.
    """
    herm = 1j * np.asarray(generator, dtype=complex)
    return np.linalg.eigh(herm)


def evolve_wavefunction(generator: np.ndarray, s) -> np.ndarray:
    """phi(s) from the mode decomposition (no time stepping); norm-preserving.

    ``s`` may be a scalar or an array; the result has the fictitious time on
    the last axis in the array case.
    """
    omega, modes = eigensystem(generator)
    start = modes.conj().T[:, 0]  # <omega_n | phi(0)>
    s_arr = np.asarray(s, dtype=float)
    phases = np.exp(-1j * np.outer(omega, s_arr.reshape(-1)))
    out = modes @ (phases * start[:, None])
    if np.abs(out.imag).max(initial=0.0) > 1e-9:
        raise RuntimeError("operator wave function came out non-real")
    out = out.real
    if s_arr.ndim == 0:
        return out[:, 0]
    return out.reshape(generator.shape[0], *s_arr.shape)


def zero_mode_vector(b) -> np.ndarray:
    """Normalized null vector of B for odd chain length.

    Odd components vanish; even components are the products
    (b_1 b_3 ... b_{2k-1}) / (b_2 b_4 ... b_{2k}).
    """
    b = np.asarray(b, dtype=float)
    d = len(b)
    if d % 2 == 0:
        raise ValueError("the generator has a zero mode only for odd dimension")
    vec = np.zeros(d)
    vec[0] = 1.0
    for k in range(1, (d - 1) // 2 + 1):
        vec[2 * k] = vec[2 * k - 2] * b[2 * k - 1] / b[2 * k]
    return vec / np.linalg.norm(vec)


def alpha_via_laplace(generator: np.ndarray) -> np.ndarray:
    """Counterdiabatic coefficients from the mode sum over positive frequencies.

    The regularized half-line transform of phi_{2k-1} evaluates mode by
    mode to (-1)^k alpha_k = sum_{omega_n > 0} (2 / (i omega_n))
    <2k-1|omega_n><omega_n|0>; the even components transform to zero.
    """
    d = generator.shape[0]
    d_a = d // 2
    if d_a == 0:
        return np.zeros(0)
    omega, modes = eigensystem(generator)
    cut = _ZERO_MODE_CUT * max(np.abs(omega).max(), 1e-300)
    pos = omega > cut
    weights = modes[:, pos] * (modes.conj()[0, pos] * 2.0 / (1j * omega[pos]))[None, :]
    sums = weights.sum(axis=1)
    alpha = np.empty(d_a)
    for k in range(1, d_a + 1):
        val = sums[2 * k - 1]
        if abs(val.imag) > 1e-9 * max(abs(val), 1.0):
            raise RuntimeError(f"Laplace mode sum came out non-real: {val}")
        alpha[k - 1] = (-1) ** k * val.real
    return alpha


def alpha_square_sum(b) -> float:
    """sum_k alpha_k^2 as <0|(Q T Q)^{-2}|0> with T the chain tridiagonal.

    Q projects off the explicitly constructed zero mode of T (odd
    dimension); for even dimension T is invertible and Q is the identity.
    """
    b = np.asarray(b, dtype=float)
    d = len(b)
    t = tridiagonal_matrix(b)
    if d % 2 == 1:
        phi = _tridiagonal_zero_mode(b)
        q = np.eye(d) - np.outer(phi, phi)
        t = q @ t @ q
    evals, vecs = np.linalg.eigh(t)
    cut = _ZERO_MODE_CUT * max(np.abs(evals).max(), 1e-300)
    keep = np.abs(evals) > cut
    first = vecs[0, keep]
    return float(np.sum(np.abs(first) ** 2 / evals[keep] ** 2))


def _tridiagonal_zero_mode(b) -> np.ndarray:
    # null vector of the symmetric tridiagonal: even components alternate in sign
    vec = zero_mode_vector(b)
    signs = np.ones(len(vec))
    signs[2::4] = -1.0
    out = vec * signs
    return out / np.linalg.norm(out)
