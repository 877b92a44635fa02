"""Eigenvalues and singular values against sorted symbol samples as n grows."""

from vartoeplitz import (Phi, SymbolParams, eigen_distribution_test, negative_count_law,
                         singular_distribution_test)

cases = [("x^2", Phi.builtin("square"), SymbolParams(1.0, -0.5)),
         ("1+cos(2x)", Phi.builtin("one_plus_cos2"), SymbolParams(1.0, 1.0))]
for label, phi, params in cases:
    print(f"phi = {label}, delta = {params.delta}, eta = {params.eta}")
    for kind, fn in (("eigenvalues", eigen_distribution_test), ("singular values", singular_distribution_test)):
        reps = fn(phi, params, [40, 80, 160])
        line = "  ".join(f"n={r.n}: {r.l1:.5f}" for r in reps)
        print(f"  {kind:>15} quantile L1   {line}")
    print()

recs, mu = negative_count_law(2.5, SymbolParams(), [64, 128, 256])
print("negative eigenvalues for constant ratio 2.5 (predicted n mu / pi):")
for r in recs:
    print(f"  n = {r.n:4d}   count = {r.count:4d}   predicted = {r.predicted:8.3f}")
