"""Step ratios of a few time grids, and how they drift towards 1 on smooth maps."""

import numpy as np

from vartoeplitz import GridMap, mapped_grid, power_ratio_exact, random_ratio_grid, ratios_of

n = 12
for name in ("identity", "power2", "power3", "affine-quadratic"):
    r = ratios_of(mapped_grid(GridMap.from_name(name), n))
    print(f"{name:>17}: r_2..r_5 = {np.round(r[:4], 4)}   max r = {r.max():.4f}")

print("\nexact first ratios on power grids:",
      {p: str(power_ratio_exact(p, 2)) for p in (2, 3, 4)})

print("\naffine-quadratic map: n * max|r_i - 1| settles near 2")
for n in (16, 64, 256, 1024):
    dev = np.abs(ratios_of(mapped_grid(GridMap.affine_quadratic(), n)) - 1).max()
    print(f"  n = {n:5d}   n * max|r - 1| = {n * dev:.5f}")

g = random_ratio_grid(100, 1.0, 0.5, 1.9398, seed=42)
r = ratios_of(g)
print(f"\nrandom ratios in [0.5, 1.9398], seed 42: min {r.min():.4f}, max {r.max():.4f}, t_1 = {g.points[1]:.3e}")
