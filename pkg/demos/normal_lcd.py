# coding: utf-8

# # Arithmetic structure of a random normal vector

# Take n-1 gaussian columns, find the unit normal X* and keep the coordinates
# of sqrt(n) X* whose size is between K1 and K2. The essential LCD of that
# spread part grows quickly with n.

from anticonc import DistributionSpec
from anticonc.randmat import normal_lcd_experiment

G = DistributionSpec.gaussian()

for n in (10, 20, 40):
    rep = normal_lcd_experiment(n, G, 0.5, 2.0, 0.2, 0.1, 100, seed=9, t_max=1e4,
                                delta=0.3, rho=0.35)
    print(f"n={n:2d}  median D={rep.median:9.3f}  beyond horizon={rep.not_found:3d}  "
          f"compressible={rep.compressible.mean():.3f}")
