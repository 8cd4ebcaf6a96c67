# coding: utf-8

# # How often is a random sign matrix singular?

from anticonc import DistributionSpec
from anticonc.randmat import exact_singularity_probability, monte_carlo_singularity

R = DistributionSpec.rademacher()


# Small sizes can be enumerated with exact integer determinants.

for n in (1, 2, 3):
    print(n, exact_singularity_probability(n))
print(4, exact_singularity_probability(4, allow_large=True))


# Beyond that we sample. The probability climbs briefly, then decays.

for n in (2, 5, 8, 10, 14):
    est = monte_carlo_singularity(n, R, 20_000, seed=n)
    print(f"n={n:2d}  {est.fraction:.4f}  [{est.band[0]:.4f}, {est.band[1]:.4f}]")
