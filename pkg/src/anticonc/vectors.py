"""Coefficient vectors, sparse approximation and the spread part."""
from dataclasses import dataclass
from functools import cached_property
from math import floor, sqrt

import numpy as np

from .errors import ArgumentError

UNIT_TOL = 1e-9


class CoefficientVector:
    """Immutable real coefficient sequence with cached p-norms."""

    def __init__(self, values):
        v = np.array(values, dtype=float).ravel()
        if v.size == 0:
            raise ArgumentError("coefficient vector must have at least one entry")
        if not np.all(np.isfinite(v)):
            raise ArgumentError("coefficients must be finite")
        v.setflags(write=False)
        self.values = v

    @classmethod
    def of(cls, a):
        return a if isinstance(a, cls) else cls(a)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self):
        return f"CoefficientVector({self.values.tolist()!r})"

    @cached_property
    def l1(self):
        return float(np.sum(np.abs(self.values)))

    @cached_property
    def l2(self):
        return float(np.linalg.norm(self.values))

    @cached_property
    def l3(self):
        return float(np.sum(np.abs(self.values) ** 3) ** (1.0 / 3.0))

    @cached_property
    def linf(self):
        return float(np.max(np.abs(self.values)))


def vector_norms(a):
    """Return (l1, l2, l3, linf) of ``a``."""
    a = CoefficientVector.of(a)
    return a.l1, a.l2, a.l3, a.linf


@dataclass(frozen=True)
class CompressibilityParams:
    delta: float
    rho: float

    def __post_init__(self):
        if not (0 < self.delta < 1 and 0 < self.rho < 1):
            raise ArgumentError("delta and rho must lie in (0,1)")


@dataclass(frozen=True)
class SpreadPart:
    indices: tuple
    scaled_values: np.ndarray
    K1: float
    K2: float

    def __len__(self):
        return len(self.indices)


def _largest_first(x):
    # stable sort on -|x| keeps lower indices first among ties
    return np.argsort(-np.abs(x), kind="stable")


def distance_to_sparse(x, s):
    """Euclidean distance from ``x`` to the vectors with at most ``s`` nonzeros.

    The best s-sparse approximation keeps the s largest-magnitude coordinates;
    the distance is the l2 norm of what remains.
    """
    x = np.asarray(CoefficientVector.of(x))
    n = x.size
    if not (0 <= s <= n) or int(s) != s:
        raise ArgumentError(f"sparsity s={s} must be an integer in [0, {n}]")
    tail = _largest_first(x)[int(s):]
    return float(np.linalg.norm(x[tail]))


def _require_unit(x):
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > UNIT_TOL:
        raise ArgumentError(f"expected a unit vector, got norm {nrm:.12g}")


def is_compressible(x, p):
    """True if the unit vector ``x`` is in Comp(delta, rho)."""
    x = np.asarray(CoefficientVector.of(x))
    _require_unit(x)
    return distance_to_sparse(x, floor(p.delta * x.size)) <= p.rho


def classify_compressible(x, p):
    return "Compressible" if is_compressible(x, p) else "Incompressible"


def spread_set(x, p):
    """Indices k (0-based) with rho/sqrt(2n) <= |x_k| <= 1/sqrt(delta n).

    For incompressible unit ``x`` this set has at least rho^2 delta n / 2
    elements; that is asserted.
    """
    x = np.asarray(CoefficientVector.of(x))
    n = x.size
    ax = np.abs(x)
    sigma = np.flatnonzero((ax >= p.rho / sqrt(2 * n)) & (ax <= 1.0 / sqrt(p.delta * n)))
    if not is_compressible(x, p):
        assert sigma.size >= 0.5 * p.rho ** 2 * p.delta * n, "spread lemma violated"
    return sigma


def spread_part(x, K1, K2):
    """Spread part of ``x``: coordinates of sqrt(n) x with K1 <= |value| <= K2.

    Returns None when no coordinate qualifies (the spread part is not defined).
    """
    if not (0 < K1 < K2):
        raise ArgumentError("spread levels need 0 < K1 < K2")
    x = np.asarray(CoefficientVector.of(x))
    scaled = sqrt(x.size) * x
    sigma = np.flatnonzero((np.abs(scaled) >= K1) & (np.abs(scaled) <= K2))
    if sigma.size == 0:
        return None
    vals = scaled[sigma]
    vals.setflags(write=False)
    return SpreadPart(tuple(int(i) for i in sigma), vals, float(K1), float(K2))
