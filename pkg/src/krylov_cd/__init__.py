"""Exact and truncated counterdiabatic driving terms built in Krylov operator space."""

__version__ = "0.1.0"

from .paulis import PauliOperator, PauliString
from .operators import (BasisDeclaration, DenseOperator, LiouvillianMatrix, Measure,
                        StructuredOperator, apply_liouvillian, build_liouvillian_matrix,
                        inner_product, liouvillian_from_m_block, operator_norm, to_dense)
from .lanczos import (KrylovChain, LanczosBreakdownError, ZeroDerivativeError,
                      build_chain_from_matrix, build_krylov_chain,
                      krylov_dimension_parity, tridiagonal_matrix)
from .agp import (AgpExpansion, DegenerateLevelsError, agp_norm, assemble_cd, solve_alpha,
                  solve_alpha_even, solve_alpha_odd_tridiagonal, solve_alpha_odd_zero_mode,
                  spectral_agp_oracle)
from .wavefunction import (alpha_square_sum, alpha_via_laplace, eigensystem,
                           evolve_wavefunction, generator_matrix, zero_mode_vector)

__all__ = [
    "PauliOperator", "PauliString",
    "BasisDeclaration", "DenseOperator", "LiouvillianMatrix", "Measure",
    "StructuredOperator", "apply_liouvillian", "build_liouvillian_matrix",
    "inner_product", "liouvillian_from_m_block", "operator_norm", "to_dense",
    "KrylovChain", "LanczosBreakdownError", "ZeroDerivativeError",
    "build_chain_from_matrix", "build_krylov_chain", "krylov_dimension_parity",
    "tridiagonal_matrix",
    "AgpExpansion", "DegenerateLevelsError", "agp_norm", "assemble_cd", "solve_alpha",
    "solve_alpha_even", "solve_alpha_odd_tridiagonal", "solve_alpha_odd_zero_mode",
    "spectral_agp_oracle",
    "alpha_square_sum", "alpha_via_laplace", "eigensystem", "evolve_wavefunction",
    "generator_matrix", "zero_mode_vector",
    "__version__",
]
