"""Essential least common denominator and recurrence sets.

Both objects are computed exactly (up to double rounding of window
endpoints) by a sweep over closed windows
``|t a_k - m| <= alpha``, i.e. ``t in [(m - alpha)/|a_k|, (m + alpha)/|a_k|]``.
The sweep keeps the number of coordinates whose window currently contains
``t``; openings are processed before closings at equal ``t`` so touching
windows count as overlapping.
"""
from dataclasses import dataclass, field
from math import ceil, floor

import numpy as np

from .errors import ArgumentError, PreconditionError
from .vectors import CoefficientVector

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class LcdParams:
    alpha: float
    kappa: float = 0.0
    t_max: float = 1e3

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ArgumentError("alpha must be in (0,1)")
        if self.kappa < 0:
            raise ArgumentError("kappa must be >= 0")
        if not self.t_max > 0:
            raise ArgumentError("t_max must be > 0")


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint closed intervals, sorted."""

    intervals: tuple = ()
    total_measure: float = field(default=0.0)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from arbitrary closed intervals, merging overlaps and touching ends."""
        pairs = sorted((float(lo), float(hi)) for lo, hi in pairs if hi >= lo)
        merged = []
        for lo, hi in pairs:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        return cls(tuple(merged), float(sum(hi - lo for lo, hi in merged)))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __contains__(self, t):
        if not self.intervals:
            return False
        los = [lo for lo, _ in self.intervals]
        i = np.searchsorted(los, t, side="right") - 1
        return i >= 0 and t <= self.intervals[i][1]

    def clip(self, lo, hi):
        return IntervalSet.from_pairs((max(a, lo), min(b, hi)) for a, b in self.intervals
                                      if b >= lo and a <= hi)

    def measure(self, lo=-np.inf, hi=np.inf):
        return float(sum(max(0.0, min(b, hi) - max(a, lo)) for a, b in self.intervals))


# window generation --------------------------------------------------------

def _windows(absa, alpha, horizon, include_zero):
    """Closed good-windows of every coordinate intersected with [0, horizon].

    Returns (lo, hi) arrays.  With ``include_zero`` the target set is all of
    Z (recurrence set), otherwise Z minus {0} (essential LCD).
    """
    los, his = [], []
    first = 0 if include_zero else 1
    for ak in absa:
        if ak == 0.0:
            # t * 0 = 0 is an integer, but never a nonzero one
            if include_zero:
                los.append(np.array([0.0]))
                his.append(np.array([horizon]))
            continue
        if alpha >= 0.5:
            # consecutive windows touch or overlap; one ray from the first window
            los.append(np.array([max(0.0, (first - alpha) / ak)]))
            his.append(np.array([horizon]))
            continue
        m = np.arange(first, floor(horizon * ak + alpha) + 1, dtype=float)
        los.append(np.maximum((m - alpha) / ak, 0.0))
        his.append(np.minimum((m + alpha) / ak, horizon))
    if not los:
        return np.empty(0), np.empty(0)
    lo, hi = np.concatenate(los), np.concatenate(his)
    keep = lo <= horizon
    return lo[keep], hi[keep]


def _sweep(lo, hi):
    """Sorted event times and the good-count right after each event."""
    times = np.concatenate([lo, hi])
    delta = np.concatenate([np.ones(lo.size, dtype=np.int64), -np.ones(hi.size, dtype=np.int64)])
    order = np.lexsort((-delta, times))
    return times[order], np.cumsum(delta[order])


def _threshold(n, kappa):
    return n - floor(kappa)


def essential_lcd(a, alpha, kappa=0.0, t_max=1e3):
    """Essential LCD D_{alpha,kappa}(a), or None if it exceeds ``t_max``.

    The infimum of t > 0 such that all but ``kappa`` coordinates of t*a lie
    within ``alpha`` of nonzero integers.  Returns 0.0 when the count
    requirement is vacuous (kappa >= n).
    """
    a = CoefficientVector.of(a)
    LcdParams(alpha, kappa, t_max)
    need = _threshold(len(a), kappa)
    if need <= 0:
        return 0.0
    absa = np.abs(a.values)
    amax = float(absa.max())
    if amax == 0.0:
        return None
    # grow the horizon geometrically so small D never pays for a large t_max
    horizon = min(t_max, max(4.0 / amax, 1.0))
    while True:
        lo, hi = _windows(absa, alpha, horizon, include_zero=False)
        if lo.size:
            times, count = _sweep(lo, hi)
            hit = np.flatnonzero(count >= need)
            if hit.size and times[hit[0]] <= horizon:
                return float(times[hit[0]])
        if horizon >= t_max:
            return None
        horizon = min(t_max, 2.0 * horizon)


def recurrence_set(a, alpha, kappa, y):
    """I_{alpha,kappa}(a) intersected with [-y, y] as an IntervalSet.

    I is the set of t for which all but ``kappa`` coordinates of t*a are
    within ``alpha`` of an integer (0 included), so I = -I and 0 is in I.
    """
    a = CoefficientVector.of(a)
    n = len(a)
    if not 0 < alpha < 1:
        raise ArgumentError("alpha must be in (0,1)")
    if not 0 <= kappa < n:
        raise ArgumentError("kappa must be in [0, n)")
    if not y > 0:
        raise ArgumentError("y must be > 0")
    need = _threshold(n, kappa)
    lo, hi = _windows(np.abs(a.values), alpha, float(y), include_zero=True)
    times, count = _sweep(lo, hi)
    above = count >= need
    prev = np.concatenate([[False], above[:-1]])
    starts = times[above & ~prev]
    ends = times[~above & prev]
    if above[-1]:
        ends = np.append(ends, y)
    half = list(zip(starts.tolist(), ends.tolist()))
    mirrored = [(-h, -l) for l, h in half]
    return IntervalSet.from_pairs(mirrored + half)


def density(I, y):
    """|I intersected with [-y, y]| / (2y)."""
    if not y > 0:
        raise ArgumentError("y must be > 0")
    return I.measure(-y, y) / (2.0 * y)


# lemmas on the recurrence set ---------------------------------------------

def _check_hypotheses(a, alpha, K):
    absa = np.abs(CoefficientVector.of(a).values)
    if absa.min() < 1.0:
        raise PreconditionError(f"need 1 <= |a_k|, got min |a_k| = {absa.min():.6g}")
    if absa.max() > K:
        raise PreconditionError(f"need |a_k| <= K = {K}, got max |a_k| = {absa.max():.6g}")
    if not 0 < alpha < 1.0 / (6.0 * K):
        raise PreconditionError(f"need 0 < alpha < 1/(6K) = {1.0 / (6.0 * K):.6g}, got {alpha}")


@dataclass
class GapCheck:
    t0: float
    shifted_in_set: bool
    t1: "float | None"
    lcd: "float | None"
    passed: bool


@dataclass
class GapAudit:
    alpha: float
    kappa: float
    y: float
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def gap_audit(a, alpha, kappa, y, K=None):
    """Check both parts of the gap lemma at every left endpoint in [0, y].

    For each maximal interval of the recurrence set with left end t0:
    t0 + 3 alpha is outside the set, and the next point t1 > t0 + 3 alpha
    of the set satisfies t1 - t0 >= D_{2 alpha, 2 kappa}(a).
    """
    a = CoefficientVector.of(a)
    K = a.linf if K is None else K
    _check_hypotheses(a, alpha, K)
    reach = y + 3 * alpha
    I = recurrence_set(a, alpha, kappa, reach)
    # beyond this horizon D cannot be the length of a gap seen inside [0, reach]
    horizon = 2 * reach + 1.0
    D = essential_lcd(a, 2 * alpha, 2 * kappa, horizon)
    checks = []
    for t0, _ in I.clip(0.0, y):
        probe = t0 + 3 * alpha
        inside = probe in I
        later = [lo for lo, hi in I if hi > probe]
        t1 = max(later[0], probe) if later else None
        if t1 is None:
            gap_ok = True
        elif D is None:
            gap_ok = False
        else:
            gap_ok = t1 - t0 >= D - BOUNDARY_TOL * max(1.0, D)
        checks.append(GapCheck(t0, inside, t1, D, (not inside) and gap_ok))
    return GapAudit(alpha, kappa, y, checks)


@dataclass
class DensityCheck:
    passed: bool
    lhs: float
    rhs: float
    lcd: "float | None"


def lcd_density_bound_check(a, alpha, kappa, y, K=None):
    """dens(I_{alpha,kappa}(a), y) <= 3 alpha (1/(2y) + 2/D_{2alpha,2kappa}(a))."""
    a = CoefficientVector.of(a)
    K = a.linf if K is None else K
    _check_hypotheses(a, alpha, K)
    lhs = density(recurrence_set(a, alpha, kappa, y), y)
    # if D exceeds 2y the set has no second cluster in [-y, y]; 1/D -> 0 is then valid.
    # D = 0 (2 kappa >= n) makes the bound vacuous.
    D = essential_lcd(a, 2 * alpha, 2 * kappa, 2 * y + 1.0)
    if D is None:
        inv = 0.0
    elif D == 0.0:
        inv = np.inf
    else:
        inv = 1.0 / D
    rhs = 3 * alpha * (1.0 / (2 * y) + 2.0 * inv)
    return DensityCheck(lhs <= rhs + 1e-12, lhs, rhs, D)


# inverse Littlewood-Offord --------------------------------------------------

@dataclass
class ProgressionReport:
    D: float
    gap: float
    length: int
    residuals: np.ndarray
    exceptions: tuple

    @property
    def progression(self):
        return np.arange(1, self.length + 1) * self.gap


def extract_progression(a, alpha, kappa=0.0, t_max=1e3):
    """Arithmetic progression {m/D : 1 <= m <= L} approximating |a_k|.

    All but at most ``kappa`` coordinates lie within alpha/D of it.  Raises
    LookupError when D is not found within ``t_max``.
    """
    a = CoefficientVector.of(a)
    D = essential_lcd(a, alpha, kappa, t_max)
    if D is None:
        raise LookupError(f"essential LCD not found within t_max={t_max}")
    if D == 0.0:
        raise LookupError("essential LCD is 0 (kappa >= n); no progression is defined")
    absa = np.abs(a.values)
    L = int(ceil(D * (absa.max() + alpha / D)))
    m = np.clip(np.rint(absa * D), 1, L)
    residuals = np.abs(absa - m / D)
    bad = np.flatnonzero(residuals > alpha / D * (1 + 1e-9))
    return ProgressionReport(D, 1.0 / D, L, residuals, tuple(int(k) for k in bad))
