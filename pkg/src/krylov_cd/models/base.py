"""Model base class: a parametrized Hamiltonian family with exact derivatives."""

from __future__ import annotations

import numpy as np

from ..agp import AgpExpansion, assemble_cd, solve_alpha
from ..lanczos import KrylovChain, build_krylov_chain
from ..operators import DENSE_CAP, Measure, StructuredOperator, to_dense


class Model:
    """A Hamiltonian family H(t) with its analytic time derivative.

    Subclasses implement :meth:`hamiltonian` and :meth:`hamiltonian_dot` on
    their preferred backend and set ``measure``.  Point-parametrized models
    expose the family linearized around t = 0 so that derivative checks and
    chain construction work uniformly.
    """

    name = "model"
    measure: Measure

    def hamiltonian(self, t: float = 0.0):
        raise NotImplementedError

    def hamiltonian_dot(self, t: float = 0.0):
        raise NotImplementedError

    def dense_hamiltonian(self, t: float = 0.0, cap: int = DENSE_CAP) -> np.ndarray:
        return to_dense(self.hamiltonian(t), cap)

    def dense_hamiltonian_dot(self, t: float = 0.0, cap: int = DENSE_CAP) -> np.ndarray:
        return to_dense(self.hamiltonian_dot(t), cap)

    def bound_measure(self, t: float = 0.0) -> Measure:
        """The model measure, bound to H(t) when it is a Gibbs weight."""
        if self.measure.kind == "gibbs" and not self.measure.is_bound:
            return self.measure.bind(self.dense_hamiltonian(t))
        return self.measure

    def finite_difference_defect(self, t: float = 0.0, eps: float = 1e-5) -> float:
        """Relative deviation of the analytic derivative from a centered difference."""
        num = (self.dense_hamiltonian(t + eps) - self.dense_hamiltonian(t - eps)) / (2 * eps)
        ana = self.dense_hamiltonian_dot(t)
        scale = max(np.linalg.norm(ana), 1e-300)
        return float(np.linalg.norm(num - ana) / scale)

    def chain(self, t: float = 0.0, tol: float = 1e-9,
              max_dim: int | None = None) -> KrylovChain:
        return build_krylov_chain(self.hamiltonian(t), self.hamiltonian_dot(t),
                                  self.bound_measure(t), tol=tol, max_dim=max_dim)

    def cd_expansion(self, t: float = 0.0, tol: float = 1e-9) -> AgpExpansion:
        chain = self.chain(t, tol=tol)
        return assemble_cd(chain, solve_alpha(chain.b))


def norm_fraction(expansion: AgpExpansion, chain: KrylovChain | None = None,
                  body_classifier=None) -> np.ndarray:
    """Share of the squared counterdiabatic norm carried by p-body operators.

    Returns an array ``q`` indexed by the interaction support p (number of
    sites between the first and last non-trivial factor, inclusive) with
    sum(q) = 1.  Structured chains read p from the basis declaration's body
    tags; Pauli chains classify each string by its support span.  An
    explicit ``body_classifier(index) -> p`` overrides the declaration tags.
    """
    if chain is None:
        chain = expansion.chain
    if chain is None:
        raise ValueError("norm fractions need the chain the expansion was built from")
    alpha = np.asarray(expansion.alpha, dtype=float)
    if len(alpha) == 0:
        raise ValueError("empty expansion has no norm to decompose")

    per_term = []  # list of dict p -> squared fraction of theta_{2k-1}
    for k in range(1, len(alpha) + 1):
        op = chain.operators[2 * k - 1]
        if isinstance(op, StructuredOperator):
            coords = np.abs(op.coords) ** 2
            if body_classifier is not None:
                sizes = [body_classifier(i) for i in range(len(coords))]
            elif op.basis.body_sizes is not None:
                sizes = op.basis.body_sizes
            else:
                raise ValueError("structured chain has no body-size tags")
            acc: dict[int, float] = {}
            for p, w in zip(sizes, coords):
                acc[p] = acc.get(p, 0.0) + w
        else:
            acc = op.coefficient_norms_by_span()
        total = sum(acc.values())
        per_term.append({p: w / total for p, w in acc.items()})

    weights = alpha ** 2
    weights /= weights.sum()
    max_p = max(p for acc in per_term for p in acc)
    q = np.zeros(max_p + 1)
    for w, acc in zip(weights, per_term):
        for p, frac in acc.items():
            q[p] += w * frac
    return q
