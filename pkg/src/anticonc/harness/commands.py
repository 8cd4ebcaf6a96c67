"""One function per harness command.

Each returns a ``Result``: report rows with a fixed column list, an
aggregate summary computed from those rows, and optional plot columns.
"""
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .. import lcd, randmat, smallball
from ..distributions import DistributionSpec
from ..errors import ArgumentError, CapacityError


@dataclass
class Result:
    columns: list
    rows: list
    summary: dict
    plot_columns: list = field(default_factory=list)
    plot_rows: list = field(default_factory=list)


def entry_law(p):
    return DistributionSpec.from_name(p.get("family", "rademacher"), p.get("points"), p.get("probs"),
                                      p.get("shift") or None)


def run_lcd(cfg):
    a, alpha, kappa, y, t_max = cfg["a"], cfg["alpha"], cfg["kappa"], cfg["y"], cfg["t_max"]
    D = lcd.essential_lcd(a, alpha, kappa, t_max)
    D2 = lcd.essential_lcd(a, min(2 * alpha, 0.999999), 2 * kappa, t_max)
    I = lcd.recurrence_set(a, alpha, kappa, y)
    rows = [(i, lo, hi, hi - lo) for i, (lo, hi) in enumerate(I)]
    summary = {"D": D, "D_2alpha_2kappa": D2, "intervals": len(rows),
               "measure": float(sum(r[3] for r in rows)), "density": lcd.density(I, y)}
    if D:
        rep = lcd.extract_progression(a, alpha, kappa, t_max)
        summary["progression"] = {"gap": rep.gap, "length": rep.length,
                                  "exceptions": list(rep.exceptions)}
    ys = np.linspace(y / 50, y, 50)
    plot = [(float(v), lcd.density(I, float(v))) for v in ys]
    return Result(["interval", "lo", "hi", "length"], rows, summary, ["y", "density"], plot)


def _small_ball(cfg, law, eps):
    if cfg.get("method", "exact") == "monte_carlo":
        return smallball.monte_carlo_small_ball(cfg["a"], eps, law, cfg["samples"], cfg.master_seed)
    return smallball.exact_small_ball(cfg["a"], eps, law, cfg["budget"])


def run_smallball(cfg):
    law = entry_law(cfg)
    rows = []
    for eps in cfg["eps"]:
        est = _small_ball(cfg, law, eps)
        rows.append((eps, float(est.value), est.center, est.error_band, est.method))
    summary = {"max_p": max(r[1] for r in rows), "min_p": min(r[1] for r in rows), "points": len(rows)}
    return Result(["eps", "p", "center", "error_band", "method"], rows, summary,
                  ["eps", "p"], [(r[0], r[1]) for r in rows])


def run_bounds_compare(cfg):
    law = entry_law(cfg)
    a = np.asarray(cfg["a"])
    B = cfg.get("B") or law.third_moment_bound
    K = cfg.get("K") or float(np.max(np.abs(a)))
    rows = []
    for eps in cfg["eps"]:
        p = smallball.exact_small_ball(a, eps, law, cfg["budget"]).value
        clt = smallball.clt_bound(a, eps, B, cfg["C1"]).value
        ess = smallball.esseen_integral(a, eps, law, cfg["quad_points"]).value if eps > 0 else None
        try:
            thm = smallball.theorem_bound(a, eps, cfg["alpha"], cfg["kappa"], B, K, cfg["C"], cfg["c"],
                                          cfg["t_max"]).value
        except ValueError:
            thm = None
        rows.append((eps, p, clt, p / clt, ess, None if not ess else p / ess, thm,
                     None if not thm else p / thm))
    summary = {"B": B, "K": K, "clt_dominates": all(r[1] <= r[2] for r in rows),
               "max_ratio_clt": max(r[3] for r in rows),
               "max_ratio_esseen": max((r[5] for r in rows if r[5] is not None), default=None),
               "max_ratio_theorem": max((r[7] for r in rows if r[7] is not None), default=None)}
    cols = ["eps", "p_exact", "clt", "ratio_clt", "esseen", "ratio_esseen", "theorem", "ratio_theorem"]
    return Result(cols, rows, summary, ["eps", "p_exact", "clt", "esseen", "theorem"],
                  [(r[0], r[1], r[2], r[4], r[6]) for r in rows])


def _per_trial(cfg, label):
    return [randmat.trial_seed(cfg.master_seed, label, i) for i in range(cfg["trials"])]


def run_matrix_tail(cfg):
    n, law = cfg["n"], entry_law(cfg)
    est = randmat.smallest_singular_tail(n, law, cfg["eps"], cfg["trials"], cfg.master_seed)
    seeds = _per_trial(cfg, "matrix-tail")
    rows = [(i, seeds[i], s, s * sqrt(n)) for i, s in enumerate(est.s_min.tolist())]
    plot = [(e, c / est.trials, lo, hi) for e, c, (lo, hi) in zip(est.eps_grid.tolist(),
                                                                   est.counts.tolist(), est.wilson_bands)]
    summary = {"trials": est.trials, "eps": est.eps_grid.tolist(), "counts": est.counts.tolist(),
               "fractions": [r[1] for r in plot], "mean_s_min_scaled": float(np.mean([r[3] for r in rows]))}
    return Result(["trial", "seed", "s_min", "s_min_scaled"], rows, summary,
                  ["eps", "fraction", "wilson_lo", "wilson_hi"], plot)


def _quantile_curve(values):
    v = np.sort(np.asarray(values, dtype=float))
    return [((i + 0.5) / v.size, float(x)) for i, x in enumerate(v)]


def run_largest_sv(cfg):
    n, law = cfg["n"], entry_law(cfg)
    stats = randmat.largest_singular_stats(n, law, cfg["trials"], cfg.master_seed)
    seeds = _per_trial(cfg, "largest-sv")
    rows = [(i, seeds[i], s * sqrt(n), s) for i, s in enumerate(stats["samples"].tolist())]
    summary = {k: v for k, v in stats.items() if k != "samples"}
    return Result(["trial", "seed", "s_max", "s_max_scaled"], rows, summary,
                  ["quantile", "s_max_scaled"], _quantile_curve(stats["samples"]))


def run_singularity(cfg):
    n, law = cfg["n"], entry_law(cfg)
    dets = randmat.singularity_trials(n, law, cfg["trials"], cfg.master_seed)
    seeds = _per_trial(cfg, "singularity")
    rows = [(i, seeds[i], int(d), int(d == 0)) for i, d in enumerate(dets.tolist())]
    hits = sum(r[3] for r in rows)
    lo, hi = randmat.wilson_interval(hits, len(rows))
    summary = {"trials": len(rows), "singular": hits, "fraction": hits / len(rows),
               "wilson_lo": lo, "wilson_hi": hi}
    try:
        exact = randmat.exact_singularity_probability(n, law, cfg.get("allow_large", False))
        summary["exact"] = str(exact)
        summary["exact_float"] = float(exact)
    except (ArgumentError, CapacityError):  # exact value not available at this n / law
        summary["exact"] = None
    return Result(["trial", "seed", "det", "singular"], rows, summary)


def run_distance(cfg):
    n, law = cfg["n"], entry_law(cfg)
    rep = randmat.distance_experiment(n, law, cfg["trials"], cfg.master_seed)
    seeds = _per_trial(cfg, "distance")
    rel = np.abs(rep.dist - rep.inner) / np.maximum(rep.dist, 1e-300)
    rows = [(i, seeds[i], float(d), float(p), None if g else float(r), int(g))
            for i, (d, p, r, g) in enumerate(zip(rep.dist, rep.inner, rel, rep.degenerate))]
    eps = cfg.get("eps") or [0.01, 0.02, 0.05, 0.1, 0.2, 0.3]
    cdf = rep.ecdf(eps)
    ok = [r[4] for r in rows if r[4] is not None]
    summary = {"trials": len(rows), "degenerate": int(rep.degenerate.sum()),
               "max_relative_discrepancy": max(ok) if ok else None,
               "eps": list(eps), "ecdf": cdf.tolist()}
    return Result(["trial", "seed", "dist", "inner", "rel_discrepancy", "degenerate"], rows, summary,
                  ["eps", "ecdf"], list(zip(eps, cdf.tolist())))


def run_normal_lcd(cfg):
    n, law = cfg["n"], entry_law(cfg)
    rep = randmat.normal_lcd_experiment(n, law, cfg["K1"], cfg["K2"], cfg["alpha"], cfg["beta"],
                                        cfg["trials"], cfg.master_seed, cfg["t_max"],
                                        cfg["delta"], cfg["rho"])
    seeds = _per_trial(cfg, "normal-lcd")
    rows = [(i, seeds[i], st, float(d) if st == "found" else None, float(d), int(c))
            for i, (st, d, c) in enumerate(zip(rep.status, rep.D, rep.compressible))]
    summary = {"trials": len(rows), "median_censored_D": rep.median,
               "quantiles_censored_D": {str(k): v for k, v in rep.quantiles().items()},
               "not_found": rep.not_found, "not_defined": rep.not_defined,
               "compressible_fraction": float(rep.compressible.mean()), "t_max": rep.t_max}
    return Result(["trial", "seed", "status", "D", "D_censored", "compressible"], rows, summary,
                  ["quantile", "D_censored"], _quantile_curve(rep.D))


def run_rectangular(cfg):
    n, k, law = cfg["n"], cfg["k"], entry_law(cfg)
    vals = randmat.rectangular_smin_experiment(n, k, law, cfg["trials"], cfg.master_seed)
    seeds = _per_trial(cfg, "rectangular")
    rows = [(i, seeds[i], v * sqrt(n), v) for i, v in enumerate(vals.tolist())]
    q = np.quantile(vals, [0.01, 0.05, 0.5])
    summary = {"trials": len(rows), "q01": float(q[0]), "q05": float(q[1]), "median": float(q[2]),
               "min": float(vals.min()), "mp_edge": 1 - sqrt(k / n)}
    return Result(["trial", "seed", "s_min", "s_min_scaled"], rows, summary,
                  ["quantile", "s_min_scaled"], _quantile_curve(vals))


RUNNERS = {
    "lcd": run_lcd, "smallball": run_smallball, "bounds-compare": run_bounds_compare,
    "matrix-tail": run_matrix_tail, "largest-sv": run_largest_sv, "singularity": run_singularity,
    "distance": run_distance, "normal-lcd": run_normal_lcd, "rectangular": run_rectangular,
}
