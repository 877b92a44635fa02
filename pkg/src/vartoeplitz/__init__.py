"""
Variable-Toeplitz matrix-sequences from variable-step BDF2 time grids.

Grids and step ratios live in :mod:`~vartoeplitz.grid`, symbols in
:mod:`~vartoeplitz.symbol`, matrices in :mod:`~vartoeplitz.matrix`, the Jacobi
solvers in :mod:`~vartoeplitz.eigsolve`, spectral-distribution checks in
:mod:`~vartoeplitz.distribution` and PSD block splittings in
:mod:`~vartoeplitz.decomposition`.
"""

from .decomposition import (AmGmCertificate, BlockDecomposition, FeasibilityResult,
                            VerificationReport, amgm_certificate, block_bounds, constant_split,
                            reconstruct, row_residuals, search_constant_splits, solve_feasibility,
                            verify)
from .distribution import (CountRecord, DistributionReport, ExtremeStudy, eigen_distribution_test,
                           extreme_convergence_study, negative_count_law, quantile_distance,
                           ratios_from_phi, resample_quantiles, singular_distribution_test)
from .eigsolve import (ConvergenceError, SpectralSample, fit_convergence_order, is_positive_definite,
                       jacobi_eigenvalues, min_max_eig, singular_values)
from .grid import (GridMap, GridSpec, SplitMix64, TimeGrid, grid_from_ratios, mapped_grid,
                   power_ratio_exact, random_ratio_grid, ratios_of, uniform_grid)
from .matrix import (LowerBand3Matrix, build_L, build_L_factored, build_momentary_matrix,
                     build_toeplitz, diag_sampling, residual_spectral_gap, stationary_toeplitz,
                     symmetrize)
from .symbol import (DELTA, ETA, Extrema, Phi, Quadratic, SymbolParams, cos_quadratic, eval_kappa,
                     eval_re_kappa, extrema_on_interval, fourier_coefficients, momentary_correction,
                     momentary_symbol, negative_level_measure, sample_symbol, stationary_quadratic)

__version__ = "0.1.0"
