"""A smooth non-uniform grid: the first-order correction captures the O(1/n) part of S_n."""

from vartoeplitz import (GridMap, SymbolParams, build_L, build_momentary_matrix, fit_convergence_order,
                         mapped_grid, ratios_of, residual_spectral_gap, stationary_toeplitz, symmetrize)

p = SymbolParams()
gm = GridMap.affine_quadratic()
ns = [32, 64, 128, 256]
g1, g2 = [], []
print("     n   ||S - T||_2     ||S - momentary||_2")
for n in ns:
    S = symmetrize(build_L(ratios_of(mapped_grid(gm, n)), p))
    g1.append(residual_spectral_gap(S, stationary_toeplitz(p, n - 1)))
    g2.append(residual_spectral_gap(S, build_momentary_matrix(gm, n, p)))
    print(f"  {n:4d}   {g1[-1]:.3e}       {g2[-1]:.3e}")
print(f"\nlog-log slopes: {-fit_convergence_order(ns, g1):.2f} and {-fit_convergence_order(ns, g2):.2f}")
