"""Experiment configuration: schema, parsing and validation."""
import json
from dataclasses import dataclass, field

COMMANDS = ("lcd", "smallball", "bounds-compare", "matrix-tail", "largest-sv",
            "singularity", "distance", "normal-lcd", "rectangular")

FAMILY_NAMES = ("rademacher", "gaussian", "uniform_discrete")


def _floats(v):
    if isinstance(v, str):
        v = [x for x in v.replace(";", ",").split(",") if x.strip()]
    if isinstance(v, (int, float)):
        v = [v]
    return [float(x) for x in v]


def _open01(x):
    return None if 0 < x < 1 else "must be in (0,1)"


def _positive(x):
    return None if x > 0 else "must be > 0"


def _nonneg(x):
    return None if x >= 0 else "must be >= 0"


def _at_least(lo):
    return lambda x: None if x >= lo else f"must be >= {lo}"


def _all(check):
    def run(xs):
        bad = [x for x in xs if check(x)]
        return f"entries {bad} {check(bad[0])}" if bad else None
    return run


def _nonempty(xs):
    return None if len(xs) else "must be non-empty"


# key -> (type converter, default, validator, help)
KEYS = {
    "seed": (int, 0, _nonneg, "master seed (64-bit)"),
    "n": (int, None, _at_least(1), "dimension"),
    "k": (int, None, _at_least(1), "number of columns (rectangular)"),
    "trials": (int, 1000, _at_least(1), "Monte Carlo trials"),
    "samples": (int, 100000, _at_least(100), "Monte Carlo sums (smallball)"),
    "eps": (_floats, None, _all(_nonneg), "comma-separated eps grid"),
    "a": (_floats, None, _nonempty, "comma-separated coefficients"),
    "alpha": (float, 0.1, _open01, "LCD accuracy alpha"),
    "kappa": (float, 0.0, _nonneg, "LCD exception budget kappa"),
    "beta": (float, 0.1, lambda x: None if 0 < x < 0.5 else "must be in (0,1/2)", "kappa = beta n"),
    "y": (float, 10.0, _positive, "recurrence-set half-width"),
    "t_max": (float, 1e4, _positive, "LCD search horizon"),
    "K1": (float, 0.5, _positive, "spread-part lower level"),
    "K2": (float, 2.0, _positive, "spread-part upper level"),
    "K": (float, None, _at_least(1.0), "coefficient magnitude bound"),
    "B": (float, None, _positive, "third-moment bound"),
    "C": (float, 1.0, _positive, "theorem constant C"),
    "c": (float, 1.0, _positive, "theorem constant c"),
    "C1": (float, 1.12, _positive, "CLT bound constant"),
    "delta": (float, 0.1, _open01, "compressibility delta"),
    "rho": (float, 0.1, _open01, "compressibility rho"),
    "family": (str, "rademacher", lambda x: None if x in FAMILY_NAMES else f"must be one of {FAMILY_NAMES}",
               "entry / step distribution"),
    "points": (_floats, None, _nonempty, "support points (uniform_discrete)"),
    "probs": (_floats, None, _nonempty, "support probabilities (uniform_discrete)"),
    "shift": (float, 0.0, None, "constant shift added to every entry"),
    "method": (str, "exact", lambda x: None if x in ("exact", "monte_carlo") else "must be exact or monte_carlo",
               "smallball engine"),
    "budget": (int, 2 ** 26, _at_least(1), "exact enumeration budget (atoms)"),
    "grid_res": (int, 100000, _at_least(10), "level-set grid points"),
    "quad_points": (int, 4096, _at_least(4), "Simpson panels"),
    "allow_large": (lambda v: v if isinstance(v, bool) else str(v).lower() in ("1", "true", "yes"),
                    False, None, "allow n=4 exact singularity enumeration"),
    "out": (str, "out", None, "output directory"),
}

COMMON = ("seed", "out")
ALLOWED = {
    "lcd": ("a", "alpha", "kappa", "t_max", "y"),
    "smallball": ("a", "eps", "family", "points", "probs", "shift", "method", "samples", "budget"),
    "bounds-compare": ("a", "eps", "family", "points", "probs", "alpha", "kappa", "B", "K", "C", "c",
                       "C1", "quad_points", "t_max", "budget"),
    "matrix-tail": ("n", "trials", "eps", "family", "points", "probs", "shift"),
    "largest-sv": ("n", "trials", "family", "points", "probs", "shift"),
    "singularity": ("n", "trials", "family", "points", "probs", "shift", "allow_large"),
    "distance": ("n", "trials", "eps", "family", "points", "probs", "shift"),
    "normal-lcd": ("n", "trials", "family", "points", "probs", "shift", "K1", "K2", "alpha", "beta",
                   "t_max", "delta", "rho"),
    "rectangular": ("n", "k", "trials", "family", "points", "probs", "shift"),
}
REQUIRED = {
    "lcd": ("a",), "smallball": ("a", "eps"), "bounds-compare": ("a", "eps"),
    "matrix-tail": ("n", "eps"), "largest-sv": ("n",), "singularity": ("n",),
    "distance": ("n",), "normal-lcd": ("n",), "rectangular": ("n", "k"),
}


class ConfigError(ValueError):
    """Carries every validation problem found, not just the first."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class ExperimentConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    master_seed: int = 0
    output: str = "out"

    def echo(self):
        return {"command": self.command, "seed": self.master_seed, "out": self.output, **self.parameters}

    def __getitem__(self, key):
        return self.parameters[key]

    def get(self, key, default=None):
        return self.parameters.get(key, default)


def _no_duplicates(pairs):
    seen, dup = {}, []
    for k, v in pairs:
        if k in seen:
            dup.append(k)
        seen[k] = v
    if dup:
        raise ConfigError([f"duplicate key {k!r}" for k in dup])
    return seen


def load_json(text):
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"invalid JSON: {exc}"]) from None
    if not isinstance(data, dict):
        raise ConfigError(["config must be a JSON object"])
    return data


def parse_config(text=None, command=None, overrides=None):
    """Validated ExperimentConfig from JSON text and/or flag overrides.

    ``overrides`` (already-parsed CLI flags) take precedence over the file.
    All problems are collected and raised together as a ConfigError.
    """
    raw = load_json(text) if text else {}
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if command is None:
        command = raw.pop("command", None)
    else:
        raw.pop("command", None)
    errors = []
    if command not in COMMANDS:
        raise ConfigError([f"command: unknown command {command!r}; expected one of {COMMANDS}"])
    allowed = set(ALLOWED[command]) | set(COMMON)
    params = {}
    for key, value in raw.items():
        if key not in KEYS or key not in allowed:
            errors.append(f"{key}: unknown key for command {command!r}")
            continue
        conv, _, check, _ = KEYS[key]
        try:
            value = conv(value)
        except (TypeError, ValueError):
            errors.append(f"{key}: cannot interpret {value!r}")
            continue
        msg = check(value) if check else None
        if msg:
            errors.append(f"{key} {msg}")
            continue
        params[key] = value
    for key in REQUIRED[command]:
        if key not in params and not any(e.startswith(f"{key}") for e in errors):
            errors.append(f"{key}: missing required key")
    for key in ALLOWED[command]:
        default = KEYS[key][1]
        if key not in params and default is not None:
            params[key] = default
    _cross_checks(command, params, errors)
    if errors:
        raise ConfigError(errors)
    seed = params.pop("seed", 0)
    out = params.pop("out", "out")
    return ExperimentConfig(command, params, seed, out)


def _cross_checks(command, p, errors):
    if p.get("family") == "uniform_discrete" and "points" not in p:
        errors.append("points: required for family uniform_discrete")
    if "probs" in p and "points" in p and len(p["probs"]) != len(p["points"]):
        errors.append("probs: length must match points")
    if "probs" in p and abs(sum(p["probs"]) - 1.0) > 1e-12:
        errors.append("probs: must sum to 1")
    if command == "normal-lcd" and p.get("K1", 0) >= p.get("K2", 1):
        errors.append("K1 must be < K2")
    if command == "rectangular" and "n" in p and "k" in p and p["k"] >= p["n"]:
        errors.append("k must be < n")
    if command == "lcd" and "a" in p and p.get("kappa", 0) >= len(p["a"]):
        errors.append("kappa must be < number of coefficients")
    if command in ("smallball", "bounds-compare") and p.get("family") == "gaussian" \
            and p.get("method", "exact") == "exact":
        errors.append("family: gaussian has no finite support; use method monte_carlo")
