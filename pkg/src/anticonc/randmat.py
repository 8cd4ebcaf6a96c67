"""Random matrix ensembles and invertibility experiments."""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm, sqrt

import numpy as np

from .distributions import DistributionSpec
from .errors import ArgumentError, CapacityError
from .lcd import essential_lcd
from .rng import substream, substream_seed
from .vectors import CompressibilityParams, is_compressible, spread_part


@dataclass(frozen=True)
class Ensemble:
    rows: int
    cols: int
    entry: DistributionSpec

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ArgumentError("matrix dimensions must be >= 1")


def sample_matrix(e, seed):
    """rows x cols matrix of i.i.d. entries, filled row-major from the seeded stream."""
    if e.entry.per_coordinate:
        raise ArgumentError("matrix entries need a single (scalar) shift")
    rng = substream(seed, "matrix", 0)
    return e.entry.from_uniform(rng.random((e.rows, e.cols)))


def trial_seed(seed, label, i):
    """Seed of trial ``i``; ``sample_matrix(..., trial_seed(...))`` regenerates it."""
    return substream_seed(seed, label, i)


def _trial_matrix(entry, rows, cols, seed, label, i):
    return sample_matrix(Ensemble(rows, cols, entry), trial_seed(seed, label, i))


# singular values ------------------------------------------------------------

@dataclass
class SingularSpectrum:
    values: np.ndarray
    residual: float

    @property
    def s_max(self):
        return float(self.values[0])

    @property
    def s_min(self):
        return float(self.values[-1])


def singular_values(A, tol=1e-10):
    """Full singular spectrum (LAPACK divide-and-conquer on the bidiagonal form).

    ``residual`` is max_i |A v_i - s_i u_i| / s_1, the backward error of the
    computed triplets; a value above ``tol`` raises.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ArgumentError("matrix has non-finite entries")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    resid = float(np.max(np.linalg.norm(A @ Vt.T - U * s, axis=0)) / scale) if s.size else 0.0
    if resid > tol:
        raise ArithmeticError(f"SVD backward error {resid:.3g} exceeds tol {tol:.3g}")
    return SingularSpectrum(s, resid)


def operator_norm_power(A, iters=500, seed=0, rtol=1e-13):
    """Largest singular value by power iteration on A^T A (cross-check)."""
    A = np.asarray(A, dtype=float)
    x = substream(seed, "power", 0).standard_normal(A.shape[1])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        y = A.T @ (A @ x)
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        x = y / nrm
        new = sqrt(nrm)
        if abs(new - est) <= rtol * new:
            break
        est = new
    return float(np.linalg.norm(A @ x))


def wilson_interval(k, N, z=1.959963984540054):
    """Wilson score interval for k successes in N trials."""
    if N == 0:
        return 0.0, 1.0
    p = k / N
    den = 1 + z * z / N
    mid = (p + z * z / (2 * N)) / den
    half = z * sqrt(p * (1 - p) / N + z * z / (4 * N * N)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


@dataclass
class TailEstimate:
    eps_grid: np.ndarray
    counts: np.ndarray
    trials: int
    wilson_bands: list
    s_min: np.ndarray = field(repr=False, default=None)

    @property
    def fractions(self):
        return self.counts / self.trials


def smallest_singular_tail(n, entry, eps_grid, trials, seed):
    """P(s_n(A) <= eps n^{-1/2}) over an eps grid for n x n random matrices."""
    if trials < 100:
        raise ArgumentError("need at least 100 trials")
    eps_grid = np.asarray(eps_grid, dtype=float)
    smin = np.array([np.linalg.svd(_trial_matrix(entry, n, n, seed, "matrix-tail", i),
                                   compute_uv=False)[-1] for i in range(trials)])
    scaled = np.sort(smin * sqrt(n))
    counts = np.searchsorted(scaled, eps_grid, side="right")
    bands = [wilson_interval(int(c), trials) for c in counts]
    return TailEstimate(eps_grid, counts, trials, bands, smin)


def largest_singular_stats(n, entry, trials, seed):
    """Distribution summary of s_1(A)/sqrt(n) for n x n random matrices."""
    if entry.fourth_moment_bound is None:
        raise ArgumentError("entry law needs a finite fourth moment")
    s1 = np.array([np.linalg.norm(_trial_matrix(entry, n, n, seed, "largest-sv", i), 2)
                   for i in range(trials)]) / sqrt(n)
    q = np.quantile(s1, [0.05, 0.25, 0.5, 0.75, 0.95])
    return {"mean": float(s1.mean()), "median": float(q[2]), "std": float(s1.std()),
            "quantiles": dict(zip(("q05", "q25", "q50", "q75", "q95"), q.tolist())),
            "samples": s1}


# exact singularity -----------------------------------------------------------

def bareiss_det(M):
    """Exact determinant of an integer matrix by fraction-free elimination."""
    M = [list(map(int, row)) for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pk - M[i][k] * M[k][j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def batch_det_int(M):
    """Exact determinants of a stack of integer matrices.

    Vectorized Bareiss in int64 when the Hadamard bound rules out overflow,
    otherwise per-matrix elimination on Python integers.
    """
    M = np.asarray(M)
    T, n, _ = M.shape
    m = int(np.abs(M).max()) if M.size else 0
    if m == 0:
        return np.zeros(T, dtype=object)
    if 2 * (m * m * n) ** n >= 2 ** 62:
        return np.array([bareiss_det(A.tolist()) for A in M], dtype=object)
    M = M.astype(np.int64).copy()
    idx = np.arange(T)
    sign = np.ones(T, dtype=np.int64)
    prev = np.ones(T, dtype=np.int64)
    dead = np.zeros(T, dtype=bool)
    for k in range(n - 1):
        nz = M[:, k:, k] != 0
        has = nz.any(axis=1)
        dead |= ~has
        p = np.argmax(nz, axis=1) + k
        moved = p != k
        if moved.any():
            rk, rp = M[idx, k].copy(), M[idx, p].copy()
            M[idx, k], M[idx, p] = rp, rk
            sign[moved] *= -1
        piv = np.where(has, M[:, k, k], 1)
        sub = M[:, k + 1:, k + 1:] * piv[:, None, None] - M[:, k + 1:, k:k + 1] * M[:, k:k + 1, k + 1:]
        M[:, k + 1:, k + 1:] = sub // prev[:, None, None]
        prev = piv
    det = sign * M[:, n - 1, n - 1]
    det[dead] = 0
    return det


def _integer_atoms(entry):
    atoms = entry.exact_atoms()
    if atoms is None:
        raise ArgumentError(f"{entry.family} entries are not exactly representable rationals")
    den = lcm(*(f.denominator for f in atoms))
    return [int(f * den) for f in atoms]


def exact_singularity_probability(n, entry=None, allow_large=False):
    """Exact P(det A = 0) for an n x n matrix with i.i.d. finite-support entries."""
    entry = entry or DistributionSpec.rademacher()
    atoms = _integer_atoms(entry)
    probs = [Fraction(float(p)).limit_denominator(10 ** 9) for p in entry.support()[1]]
    budget = 2 ** 16 if allow_large else 2 ** 9
    total = len(atoms) ** (n * n)
    if total > budget:
        raise CapacityError(f"{total} matrices exceed the enumeration budget {budget}"
                            + ("" if allow_large else "; pass allow_large=True for n=4"))
    combos = np.array(list(product(range(len(atoms)), repeat=n * n)), dtype=np.int64)
    mats = np.array(atoms, dtype=np.int64)[combos].reshape(-1, n, n)
    zero = batch_det_int(mats) == 0
    if len(set(probs)) == 1:
        return probs[0] ** (n * n) * int(np.count_nonzero(zero))
    out = Fraction(0)
    for row in combos[zero]:
        w = Fraction(1)
        for j in row:
            w *= probs[j]
        out += w
    return out


@dataclass
class SingularityEstimate:
    fraction: float
    singular: int
    trials: int
    band: tuple


def singularity_trials(n, entry, trials, seed, block=4096):
    """Exact determinants of ``trials`` sampled n x n matrices (scaled-integer atoms)."""
    atoms = np.array(_integer_atoms(entry), dtype=np.int64)
    pts = entry.support()[0]
    dets = []
    for start in range(0, trials, block):
        stop = min(trials, start + block)
        X = np.stack([_trial_matrix(entry, n, n, seed, "singularity", i) for i in range(start, stop)])
        # map sampled atom values back to their integer representatives
        k = np.searchsorted(pts, X) if np.all(np.diff(pts) > 0) else \
            np.argmin(np.abs(X[..., None] - pts), axis=-1)
        dets.append(batch_det_int(atoms[k]))
    return np.concatenate(dets) if dets else np.empty(0, dtype=np.int64)


def monte_carlo_singularity(n, entry, trials, seed):
    """Fraction of sampled matrices with determinant exactly zero."""
    hits = int(np.count_nonzero(singularity_trials(n, entry, trials, seed) == 0))
    return SingularityEstimate(hits / trials, hits, trials, wilson_interval(hits, trials))


# random normal and distances ---------------------------------------------------

def _fix_sign(x):
    i = int(np.argmax(np.abs(x)))
    return -x if x[i] < 0 else x


def random_normal(columns):
    """Unit vector orthogonal to the given n-1 columns of an n x (n-1) array.

    Returns (normal, degenerate) where ``degenerate`` flags a nullspace of
    dimension > 1.  The largest-magnitude coordinate is made positive.
    """
    X = np.asarray(columns, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n < 2 or k != n - 1:
        raise ArgumentError("need n >= 2 and exactly n-1 columns in R^n")
    _, s, Vt = np.linalg.svd(X.T, full_matrices=True)
    rank = int(np.count_nonzero(s > max(X.shape) * np.finfo(float).eps * (s[0] if s.size else 0)))
    normal = Vt[-1]
    normal = normal / np.linalg.norm(normal)
    return _fix_sign(normal), rank < n - 1


@dataclass
class DistanceReport:
    dist: np.ndarray
    inner: np.ndarray
    degenerate: np.ndarray

    def ecdf(self, eps_grid):
        d = np.sort(self.dist)
        return np.searchsorted(d, np.asarray(eps_grid, dtype=float), side="left") / d.size

    def relative_discrepancy(self):
        ok = ~self.degenerate
        return np.abs(self.dist[ok] - self.inner[ok]) / np.maximum(self.dist[ok], 1e-300)


def _dist_to_span(B, x):
    coef, *_ = np.linalg.lstsq(B, x, rcond=None)
    return float(np.linalg.norm(x - B @ coef))


def distance_experiment(n, entry, trials, seed):
    """dist(X_n, H_n) against |<X*, X_n>| for the columns of n x n random matrices."""
    dist, inner, degen = np.empty(trials), np.empty(trials), np.zeros(trials, dtype=bool)
    for i in range(trials):
        A = _trial_matrix(entry, n, n, seed, "distance", i)
        normal, degenerate = random_normal(A[:, :-1])
        degen[i] = degenerate
        inner[i] = abs(float(normal @ A[:, -1]))
        dist[i] = 0.0 if degenerate else _dist_to_span(A[:, :-1], A[:, -1])
    return DistanceReport(dist, inner, degen)


@dataclass
class NormalLcdReport:
    D: np.ndarray
    status: list
    t_max: float
    compressible: np.ndarray

    @property
    def not_found(self):
        return self.status.count("not_found")

    @property
    def not_defined(self):
        return self.status.count("not_defined")

    def quantiles(self, qs=(0.1, 0.25, 0.5, 0.75, 0.9)):
        return dict(zip(qs, np.quantile(self.D, qs).tolist()))

    @property
    def median(self):
        return float(np.median(self.D))


def normal_lcd_experiment(n, entry, K1, K2, alpha, beta, trials, seed, t_max=1e4,
                          delta=0.1, rho=0.1):
    """Essential LCD D_{alpha, beta n} of the spread part of the random normal.

    NotFound (D > t_max) is censored at t_max; an undefined spread part maps
    to D = 0.  Also records whether each normal is compressible.
    """
    if not 0 < beta < 0.5:
        raise ArgumentError("beta must be in (0, 1/2)")
    p = CompressibilityParams(delta, rho)
    D, status, comp = np.empty(trials), [], np.zeros(trials, dtype=bool)
    for i in range(trials):
        X = _trial_matrix(entry, n, n - 1, seed, "normal-lcd", i)
        normal, _ = random_normal(X)
        comp[i] = is_compressible(normal, p)
        hat = spread_part(normal, K1, K2)
        if hat is None:
            D[i] = 0.0
            status.append("not_defined")
            continue
        d = essential_lcd(hat.scaled_values, alpha, beta * n, t_max)
        if d is None:
            D[i] = t_max
            status.append("not_found")
        else:
            D[i] = d
            status.append("found")
    return NormalLcdReport(D, status, t_max, comp)


def rectangular_smin_experiment(n, k, entry, trials, seed):
    """s_min(G)/sqrt(n) for n x k random matrices with k < n."""
    if not 1 <= k < n:
        raise ArgumentError("need 1 <= k < n")
    return np.array([np.linalg.svd(_trial_matrix(entry, n, k, seed, "rectangular", i),
                                   compute_uv=False)[-1] for i in range(trials)]) / sqrt(n)
