# coding: utf-8

# # Essential LCD and the recurrence set

import numpy as np

from anticonc import essential_lcd, extract_progression, recurrence_set
from anticonc.lcd import density, gap_audit


# For a = (1, 2, 3) the first t > 0 that puts every t*a_k within 0.1 of a
# nonzero integer is just below 1.

a = [1.0, 2.0, 3.0]
D = essential_lcd(a, 0.1)
print("D =", D)

rep = extract_progression(a, 0.1)
print("progression step", rep.gap, "length", rep.length, "max residual", rep.residuals.max())


# Irrational ratios push D up. Allowing kappa exceptions pulls it back down.

b = [1.0, np.sqrt(2), np.sqrt(3), np.pi / 2]
for kappa in (0, 1, 2):
    print(f"kappa={kappa}: D = {essential_lcd(b, 0.05, kappa, 1e4)}")


# The recurrence set is a union of short intervals; its density over [-y, y]
# shrinks as the coefficients become less commensurate.

for vec in ([1.0, 1.0, 1.0], b):
    I = recurrence_set(vec, 0.05, 0, 20)
    print(len(I), "intervals, density", round(density(I, 20), 5))


# Left ends of the intervals are followed by a gap of length at least D_{2 alpha, 2 kappa}.

audit = gap_audit(np.ones(8), 0.05, 0, 5)
print("gap checks:", len(audit.checks), "all passed:", audit.passed)
