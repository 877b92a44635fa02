"""The equispaced symbol: extrema, the vertex outside [-1, 1], and when it turns negative."""

import math

import numpy as np

from vartoeplitz import SymbolParams, cos_quadratic, extrema_on_interval, negative_level_measure

p = SymbolParams()
print(f"delta = {p.delta}, eta = {p.eta}\n")

q = cos_quadratic(p, 1.0)
ext = extrema_on_interval(p, 1.0)
print(f"Re kappa(theta) = P(cos theta) with P(z) = {q.a:+.4f} z^2 {q.b:+.4f} z {q.c:+.4f}")
print(f"  minimum {ext.min:.5f} at theta = {ext.argmin:.3f}")
print(f"  maximum {ext.max:.5f} at theta = {ext.argmax:.3f}")
print(f"  vertex z_e = {q.vertex:.4f} lies outside [-1, 1]; P(z_e) = {q.vertex_value:.4f}\n")

print("constant ratio r: symbol minimum and the measure of its negative set on [0, pi]")
for r in (1.0, 1.5, 1.9398, 2.2, 2.5, 3.0):
    ext = extrema_on_interval(p, r)
    mu = negative_level_measure(p, r)
    print(f"  r = {r:6.4f}   min = {ext.min:+.5f} at theta = {ext.argmin:.3f}   mu/pi = {mu / math.pi:.4f}")

# locate the threshold ratio by bisection on the minimum
lo, hi = 1.0, 3.0
for _ in range(60):
    mid = 0.5 * (lo + hi)
    lo, hi = (mid, hi) if extrema_on_interval(p, mid).min > 0 else (lo, mid)
print(f"\nthe minimum crosses zero at r = {lo:.5f}")
