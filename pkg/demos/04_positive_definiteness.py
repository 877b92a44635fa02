"""Smallest eigenvalue of S_n on power grids: x^2 stays positive, x^3 does not."""

import numpy as np

from vartoeplitz import (GridMap, SymbolParams, build_L, extreme_convergence_study, jacobi_eigenvalues,
                         mapped_grid, random_ratio_grid, ratios_of, symmetrize)

p = SymbolParams()


def lam_min(r):
    return jacobi_eigenvalues(symmetrize(build_L(r, p))).values[0]


for name in ("power2", "power3"):
    print(f"{name}: r_2 = {ratios_of(mapped_grid(GridMap.from_name(name), 8))[0]:g}")
    for n in (4, 16, 64, 256):
        print(f"  n = {n:4d}   lambda_min = {lam_min(ratios_of(mapped_grid(GridMap.from_name(name), n))):+.6f}")

vals = [lam_min(ratios_of(random_ratio_grid(n, 1.0, 0.5, 1.9398, seed=n))) for n in (50, 100, 200)]
print("\nrandom ratios in [0.5, 1.9398]: lambda_min =", np.round(vals, 6))

st = extreme_convergence_study(p, [32, 64, 128, 256])
print(f"\nuniform grid: lambda_min -> {st.m:.5f} with order {st.order_min:.2f}, "
      f"lambda_max -> {st.M:.5f} with order {st.order_max:.2f}")
