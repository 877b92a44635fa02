"""Certifying S_n >= 0 by small PSD blocks, and why it cannot work at the default coefficients."""

import numpy as np

from vartoeplitz import (SymbolParams, amgm_certificate, build_L, jacobi_eigenvalues,
                         search_constant_splits, solve_feasibility, symmetrize)

r = np.ones(31)
mild = SymbolParams(0.5, 0.1)
res = solve_feasibility(r, mild)
print(f"delta = 0.5, eta = 0.1: {res.message}")
print(f"  a, c on interior rows: {res.decomposition.a[5]:.3f}, {res.decomposition.c[5]:.3f}")
print(f"  smallest block determinant margin {res.report.min_block_det_margin:.4f}")
print(f"  lambda_min(2S) = {jacobi_eigenvalues(2 * symmetrize(build_L(r, mild))).values[0]:.4f}\n")

p = SymbolParams()
cert = amgm_certificate(np.ones(15), p)
print(f"default coefficients: each interior row needs at least {cert.interior_rate:.3f} of a budget of 2")
print(f"  total bound {cert.lower_bound:.3f} vs budget {cert.budget:.0f}; splitting possible: {cert.feasible_possible}")
print(f"  constant splits passing verification (alpha step 1e-3): {len(search_constant_splits(np.ones(15), p))}")
print(f"  yet S itself is positive definite: lambda_min = "
      f"{jacobi_eigenvalues(symmetrize(build_L(np.ones(15), p))).values[0]:.4f}")
