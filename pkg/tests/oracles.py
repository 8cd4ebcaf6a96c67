"""Independent brute-force oracles used by the tests.

None of these share code paths with the package: grid scans instead of
sweeps, subset search instead of sorting, exhaustive sign patterns instead
of merged atom tables.
"""
from collections import Counter
from fractions import Fraction
from itertools import combinations, product

import numpy as np


def _dist_nonzero_int(x):
    r = np.rint(x)
    return np.where(r == 0, 1.0 - np.abs(x), np.abs(x - r))


def grid_lcd(a, alpha, kappa, t_max, step=1e-5, chunk=200_000):
    a = np.abs(np.asarray(a, dtype=float))
    need = len(a) - int(np.floor(kappa))
    nsteps = int(round(t_max / step))
    for s in range(1, nsteps + 1, chunk):
        t = np.arange(s, min(s + chunk, nsteps + 1)) * step
        good = (_dist_nonzero_int(np.outer(t, a)) <= alpha).sum(axis=1)
        hit = np.flatnonzero(good >= need)
        if hit.size:
            return float(t[hit[0]])
    return None


def grid_recurrence_measure(a, alpha, kappa, y, step=1e-5, chunk=200_000):
    a = np.abs(np.asarray(a, dtype=float))
    need = len(a) - int(np.floor(kappa))
    npts = int(round(2 * y / step))
    total = 0
    for s in range(0, npts, chunk):
        t = -y + (np.arange(s, min(s + chunk, npts)) + 0.5) * step
        x = np.outer(t, a)
        good = (np.abs(x - np.rint(x)) <= alpha).sum(axis=1)
        total += int(np.count_nonzero(good >= need))
    return total * step


def brute_distance_to_sparse(x, s):
    x = np.asarray(x, dtype=float)
    n = x.size
    best = np.inf
    for keep in combinations(range(n), s):
        rest = np.delete(x, list(keep))
        best = min(best, float(np.linalg.norm(rest)))
    return best if s < n else 0.0


def brute_small_ball(a, eps, atoms=(-1, 1), probs=None):
    """Exact p_eps over exhaustive outcomes with Fraction arithmetic.

    ``a`` and ``eps`` must be rationals (ints / Fractions) for exactness.
    """
    probs = probs or [Fraction(1, len(atoms))] * len(atoms)
    law = Counter()
    for combo in product(range(len(atoms)), repeat=len(a)):
        s = sum(Fraction(ak) * atoms[j] for ak, j in zip(a, combo))
        w = Fraction(1)
        for j in combo:
            w *= probs[j]
        law[s] += w
    pts = sorted(law)
    eps = Fraction(eps)
    return max(sum(law[q] for q in pts if p <= q <= p + 2 * eps) for p in pts)


def float_det_singular(M):
    return int(round(np.linalg.det(np.asarray(M, dtype=float)))) == 0
