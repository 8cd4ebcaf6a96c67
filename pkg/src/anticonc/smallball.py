"""Small-ball probabilities of random sums S = sum_k a_k xi_k and their bounds.

p_eps(a) = sup_v P(|S - v| <= eps) is computed exactly by enumeration for
finite-support laws and by Monte Carlo otherwise.  The bound evaluators
return the right-hand sides of the CLT estimate, the Esseen integral, the
Halasz level-set machinery and the main small-ball theorem.
"""
from dataclasses import dataclass, field
from math import ceil, exp, log, pi, sqrt

import numpy as np
from scipy.optimize import minimize_scalar

from .distributions import DistributionSpec
from .errors import ArgumentError, CapacityError, PreconditionError
from .lcd import essential_lcd
from .rng import substream
from .vectors import CoefficientVector

DEFAULT_BUDGET = 2 ** 26
# Berry-Esseen constant 0.56 doubled: the two-sided CLT estimate pays it twice.
DEFAULT_C1 = 1.12


@dataclass
class SmallBallEstimate:
    value: float
    method: str
    center: float
    error_band: float = 0.0
    sample_count: "int | None" = None


@dataclass
class BoundReport:
    bound_name: str
    value: float
    inputs: dict = field(default_factory=dict)
    comparison: "float | None" = None
    error_estimate: float = 0.0
    flags: tuple = ()

    def compare(self, p):
        """Attach p / bound and return self."""
        self.comparison = p / self.value if self.value > 0 else np.inf
        return self


def _coeffs(a):
    return CoefficientVector.of(a).values


def _best_window(sums, probs, eps, tol):
    """Max mass of a closed window [s, s + 2 eps] anchored at an atom."""
    order = np.argsort(sums, kind="stable")
    s, p = sums[order], probs[order]
    cum = np.concatenate([[0.0], np.cumsum(p)])
    j = np.searchsorted(s, s + 2.0 * eps + tol, side="right")
    mass = cum[j] - cum[:-1]
    i = int(np.argmax(mass))
    return float(min(mass[i], 1.0)), float(s[i] + eps)


def _atom_tol(a, dist):
    """Slack absorbing rounding in sums that should coincide exactly."""
    scale = sum(np.max(np.abs(dist.support(k)[0])) * abs(ak) for k, ak in enumerate(a))
    return 1e-12 * max(scale, 1.0)


def enumerate_sums(a, dist, budget=DEFAULT_BUDGET):
    """All atoms of S and their probabilities (equal atoms merged)."""
    a = _coeffs(a)
    sizes = [len(dist.support(k)[0]) for k in range(a.size)]
    total = float(np.prod(np.array(sizes, dtype=float)))
    if total > budget:
        raise CapacityError(f"{total:.3g} atoms exceed the enumeration budget {budget}; "
                            "use monte_carlo_small_ball instead")
    sums, probs = np.zeros(1), np.ones(1)
    for k, ak in enumerate(a):
        pts, pr = dist.support(k)
        sums = np.add.outer(sums, ak * pts).ravel()
        probs = np.multiply.outer(probs, pr).ravel()
        sums, inv = np.unique(sums, return_inverse=True)
        probs = np.bincount(inv.ravel(), weights=probs)
    return sums, probs


def exact_small_ball(a, eps, dist=None, budget=DEFAULT_BUDGET):
    """Exact p_eps(a) for a finite-support law by full enumeration."""
    dist = dist or DistributionSpec.rademacher()
    if eps < 0:
        raise ArgumentError("eps must be >= 0")
    a = _coeffs(a)
    sums, probs = enumerate_sums(a, dist, budget)
    value, center = _best_window(sums, probs, eps, _atom_tol(a, dist))
    return SmallBallEstimate(value, "exact", center)


def dkw_band(N, level=0.05):
    return sqrt(log(2.0 / level) / (2.0 * N))


def monte_carlo_small_ball(a, eps, dist, N, seed, chunk=1 << 16):
    """Monte Carlo estimate of p_eps(a) from N sampled sums.

    The max over window positions biases the estimate upward by at most the
    DKW band in the typical case; the band is reported as the error contract.
    """
    if N < 100:
        raise ArgumentError("need N >= 100 samples")
    a = _coeffs(a)
    rng = substream(seed, "smallball", 0)
    parts = []
    for start in range(0, N, chunk):
        m = min(chunk, N - start)
        xi = dist.from_uniform(rng.random((m, a.size)))
        parts.append(xi @ a)
    s = np.sort(np.concatenate(parts))
    j = np.searchsorted(s, s + 2.0 * eps, side="right")
    counts = j - np.arange(N)
    i = int(np.argmax(counts))
    return SmallBallEstimate(counts[i] / N, "monte_carlo", float(s[i] + eps), dkw_band(N), N)


def restriction_check(a, sigma, eps, dist=None, budget=DEFAULT_BUDGET):
    """p_eps(a) <= p_eps(P_sigma a); sigma holds 0-based indices."""
    a = _coeffs(a)
    sigma = np.asarray(sorted(set(int(k) for k in sigma)))
    if sigma.size == 0:
        raise ArgumentError("sigma must be non-empty")
    full = exact_small_ball(a, eps, dist, budget).value
    part = exact_small_ball(a[sigma], eps, dist, budget).value
    return full <= part + 1e-12, full, part


# bounds ---------------------------------------------------------------------

def clt_bound(a, eps, B, C1=DEFAULT_C1):
    """sqrt(2/pi) eps/|a|_2 + C1 B (|a|_3/|a|_2)^3."""
    a = CoefficientVector.of(a)
    if a.l2 == 0:
        raise ArgumentError("clt_bound needs a nonzero coefficient vector")
    value = sqrt(2.0 / pi) * eps / a.l2 + C1 * B * (a.l3 / a.l2) ** 3
    return BoundReport("clt", value, {"eps": eps, "B": B, "C1": C1})


def characteristic_modulus(a, dist, t):
    """|prod_k E exp(i a_k xi_k t)|, vectorized over t."""
    a = _coeffs(a)
    t = np.asarray(t, dtype=float)
    if dist.family == "rademacher":
        return np.prod(np.abs(np.cos(np.multiply.outer(t, a))), axis=-1)
    if dist.family == "gaussian":
        return np.exp(-0.5 * float(a @ a) * t * t)
    out = np.ones_like(t)
    for k, ak in enumerate(a):
        out = out * np.abs(dist.characteristic(ak * t, k))
    return out


def _simpson(y, h):
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def esseen_integral(a, eps, dist, quad_points=4096):
    """int_{-pi/2}^{pi/2} |phi_S(t/eps)| dt by composite Simpson.

    ``error_estimate`` is the change against half as many panels.  The
    absolute constant of Esseen's inequality is left to the caller.
    """
    if not eps > 0:
        raise ArgumentError("esseen_integral needs eps > 0")
    panels = max(2, int(quad_points) + int(quad_points) % 2)
    t = np.linspace(-pi / 2, pi / 2, panels + 1)
    y = characteristic_modulus(a, dist, t / eps)
    h = pi / panels
    fine = _simpson(y, h)
    coarse = _simpson(y[::2], 2 * h) if panels % 4 == 0 else fine
    return BoundReport("esseen", float(fine), {"eps": eps, "quad_points": panels},
                       error_estimate=float(abs(fine - coarse)))


def halasz_functional(a, t):
    """f(t) = sum_k sin^2(a_k t / 2), vectorized over t."""
    a = _coeffs(a)
    return np.sum(np.sin(0.5 * np.multiply.outer(np.asarray(t, dtype=float), a)) ** 2, axis=-1)


def _lipschitz(a, z, eps):
    # d/dt sin^2(a z t / 2 eps) = (a z / 2 eps) sin(a z t / eps)
    return float(np.sum(np.abs(a))) * z / (2.0 * eps)


def _scaled_f(a, z, eps, t, chunk=1 << 17):
    t = np.asarray(t, dtype=float)
    return np.concatenate([halasz_functional(a, z * t[i:i + chunk] / eps)
                           for i in range(0, t.size, chunk)]) if t.size else t


def _max_f(a, z, eps, r=pi / 2, max_points=4_000_001):
    """Grid maximum of f(z t / eps) on [-r, r] followed by local refinement."""
    L = _lipschitz(a, z, eps)
    npts = int(min(max_points, max(2001, ceil(2 * r * L / 1e-3) + 1)))
    t = np.linspace(-r, r, npts)
    g = _scaled_f(a, z, eps, t)
    h = t[1] - t[0]
    best = float(g.max())
    for i in np.argsort(g)[-5:]:
        lo, hi = max(-r, t[i] - h), min(r, t[i] + h)
        res = minimize_scalar(lambda s: -float(halasz_functional(a, z * s / eps)),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best, float(g.max())


def halasz_max(a, z, eps):
    """M = max_{|t| <= pi/2} f(z t / eps), with n/4 <= M <= n asserted."""
    a = _coeffs(a)
    if np.min(np.abs(a)) < 1.0:
        raise PreconditionError("halasz_max needs |a_k| >= 1 for all k")
    if z < 1.0:
        raise PreconditionError("halasz_max needs z >= 1")
    if not 0 < eps < pi / 4:
        raise PreconditionError("halasz_max needs 0 < eps < pi/4")
    M, _ = _max_f(a, z, eps)
    n = a.size
    assert n / 4.0 <= M <= n + 1e-12, f"M={M} outside [n/4, n]"
    return M


def level_set_measure(a, z, eps, m, r, grid_res=100_000):
    """|T(m, r)| = |{t : |t| <= r, f(z t / eps) <= m}| on a midpoint grid.

    The error bound counts cells whose midpoint value is within the
    Lipschitz variation of the level m; only those can be misclassified.
    """
    if m < 0 or not r > 0:
        raise ArgumentError("need m >= 0 and r > 0")
    a = _coeffs(a)
    h = 2.0 * r / grid_res
    mid = -r + h * (np.arange(grid_res) + 0.5)
    g = _scaled_f(a, z, eps, mid)
    slack = 0.5 * h * _lipschitz(a, z, eps)
    measure = h * np.count_nonzero(g <= m)
    err = h * np.count_nonzero(np.abs(g - m) <= slack)
    return float(measure), float(err)


@dataclass
class RegularityCheck:
    passed: bool
    lhs: float
    rhs: float
    slack: float


def regularity_check(a, z, eps, m, l, grid_res=100_000):
    """Halasz regularity |T(m, pi/2)| <= (2/l) |T(l^2 m, pi)|, given l^2 m <= M."""
    a = _coeffs(a)
    if int(l) != l or l < 1:
        raise PreconditionError("l must be a positive integer")
    M, _ = _max_f(a, z, eps)
    if l * l * m > M:
        raise PreconditionError(f"need l^2 m <= M = {M:.6g}, got {l * l * m:.6g}")
    lhs, e1 = level_set_measure(a, z, eps, m, pi / 2, grid_res)
    big, e2 = level_set_measure(a, z, eps, l * l * m, pi, 2 * grid_res)
    rhs = 2.0 / l * big
    slack = e1 + 2.0 / l * e2
    return RegularityCheck(lhs <= rhs + slack, lhs, rhs, slack)


def theorem_bound(a, eps, alpha, kappa, B, K, C=1.0, c=1.0, t_max=1e4):
    """C B K^3/sqrt(kappa) (eps + 1/D_{2alpha,2kappa}(a)) + C exp(-c alpha^2 kappa / B^2).

    When D exceeds ``t_max`` the 1/D term is dropped (the true value is
    smaller than 1/t_max) and the report carries the ``lcd_not_found`` flag.
    """
    a = CoefficientVector.of(a)
    absa = np.abs(a.values)
    n = len(a)
    if absa.min() < 1.0 or absa.max() > K:
        raise PreconditionError(f"need 1 <= |a_k| <= K = {K}")
    if not 0 < alpha < 1.0 / (6.0 * K):
        raise PreconditionError(f"need 0 < alpha < 1/(6K) = {1 / (6 * K):.6g}")
    if not 0 < kappa < n:
        raise PreconditionError("need 0 < kappa < n")
    D = essential_lcd(a, 2 * alpha, 2 * kappa, t_max)
    flags = ()
    if D is None:
        inv_d, flags = 0.0, ("lcd_not_found",)
    elif D == 0.0:
        inv_d, flags = np.inf, ("lcd_vacuous",)
    else:
        inv_d = 1.0 / D
    value = C * B * K ** 3 / sqrt(kappa) * (eps + inv_d) + C * exp(-c * alpha ** 2 * kappa / B ** 2)
    inputs = {"eps": eps, "alpha": alpha, "kappa": kappa, "B": B, "K": K, "C": C, "c": c, "D": D}
    return BoundReport("theorem", float(value), inputs, flags=flags)
