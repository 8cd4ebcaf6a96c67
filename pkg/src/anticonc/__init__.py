"""Anti-concentration and random-matrix invertibility laboratory."""
__version__ = "0.1.0"

from .distributions import DistributionSpec
from .errors import ArgumentError, CapabilityError, CapacityError, PreconditionError
from .lcd import (IntervalSet, LcdParams, density, essential_lcd, extract_progression, gap_audit,
                  lcd_density_bound_check, recurrence_set)
from .randmat import (Ensemble, distance_experiment, exact_singularity_probability,
                      largest_singular_stats, monte_carlo_singularity, normal_lcd_experiment,
                      random_normal, rectangular_smin_experiment, sample_matrix, singular_values,
                      smallest_singular_tail)
from .smallball import (characteristic_modulus, clt_bound, esseen_integral, exact_small_ball,
                        halasz_functional, halasz_max, level_set_measure, monte_carlo_small_ball,
                        regularity_check, restriction_check, theorem_bound)
from .vectors import (CoefficientVector, CompressibilityParams, classify_compressible,
                      distance_to_sparse, spread_part, spread_set, vector_norms)
