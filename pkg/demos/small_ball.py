# coding: utf-8

# # Small ball probabilities of sign sums

# The sum S = a_1 xi_1 + ... + a_n xi_n with random signs xi_k. For short
# vectors every outcome can be listed, so p_eps(a) is exact.

import numpy as np

from anticonc import DistributionSpec, clt_bound, exact_small_ball, monte_carlo_small_ball

R = DistributionSpec.rademacher()


# All-ones coefficients pile mass onto a lattice. The peak at eps = 1 decays like n^(-1/2):

ns = np.arange(8, 21, 2)
p = np.array([exact_small_ball(np.ones(n), 1.0, R).value for n in ns])
for n, v in zip(ns, p):
    print(f"n={n:2d}  p_1={v:.5f}  p_1*sqrt(n)={v * np.sqrt(n):.4f}")
print("log-log slope:", np.polyfit(np.log(ns), np.log(p), 1)[0])


# Spreading the coefficients out over n..2n makes the sums much less concentrated.

ns = np.arange(8, 19)
q = [exact_small_ball(np.arange(n, 2 * n + 1) / n, 1.0 / n, R).value for n in ns]
print("distinct coefficients, slope:", np.polyfit(np.log(ns), np.log(q), 1)[0])


# Sampling gives the same answer up to the DKW band.

a = np.array([1.0, 2.0, 3.0, 5.0, 8.0, 13.0])
exact = exact_small_ball(a, 0.5, R)
mc = monte_carlo_small_ball(a, 0.5, R, 200_000, seed=1)
print(f"exact {exact.value:.5f}, sampled {mc.value:.5f} +- {mc.error_band:.5f}")


# The CLT estimate is a soft upper bound; the third moment term dominates for small eps.

print("clt bound:", clt_bound(a, 0.5, R.third_moment_bound).value)
