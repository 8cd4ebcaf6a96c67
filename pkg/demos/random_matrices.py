# coding: utf-8

# # Extreme singular values of square random matrices

import numpy as np

from anticonc import DistributionSpec
from anticonc.randmat import (distance_experiment, largest_singular_stats,
                              rectangular_smin_experiment, smallest_singular_tail)

G = DistributionSpec.gaussian()
R = DistributionSpec.rademacher()


# The smallest singular value lives at scale n^(-1/2), and its tail is linear in eps.

eps = [0.05, 0.1, 0.2, 0.4]
tail = smallest_singular_tail(100, G, eps, 1000, seed=3)
for e, f, (lo, hi) in zip(eps, tail.fractions, tail.wilson_bands):
    print(f"eps={e:.2f}  P(s_n sqrt(n) <= eps)={f:.3f}  [{lo:.3f}, {hi:.3f}]")


# The largest one sits near 2 sqrt(n) for both entry laws.

for name, law in (("gaussian", G), ("rademacher", R)):
    st = largest_singular_stats(200, law, 50, seed=4)
    print(name, "mean s_1/sqrt(n):", round(st["mean"], 4))


# The distance from the last column to the span of the others equals
# |<X*, X_n>| for the unit normal X*.

rep = distance_experiment(30, G, 500, seed=5)
print("largest relative discrepancy:", rep.relative_discrepancy()[~rep.degenerate].max())
print("P(dist < eps):", rep.ecdf([0.05, 0.1, 0.2]))


# Tall rectangular matrices are well conditioned: s_min/sqrt(n) stays near 1 - sqrt(k/n).

v = rectangular_smin_experiment(200, 20, G, 200, seed=6)
print("1% quantile", np.quantile(v, 0.01), "edge", 1 - np.sqrt(20 / 200))
