"""Entry / step distributions for random sums and random matrices."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import log, pi, sqrt

import numpy as np
from scipy.special import ndtri

from .errors import ArgumentError, CapabilityError

FAMILIES = ("rademacher", "gaussian", "uniform_discrete", "shifted")


@dataclass(frozen=True)
class DistributionSpec:
    """A real random variable xi together with its moment metadata.

    ``offsets`` is only used by the ``shifted`` family: either a scalar
    shift, or one shift per coordinate (the variables xi_k + t_k).
    """

    family: str
    points: tuple = ()
    probs: tuple = ()
    base: "DistributionSpec | None" = None
    offsets: tuple = ()
    variance: float = field(default=0.0, compare=False)
    third_moment_bound: float = field(default=0.0, compare=False)
    fourth_moment_bound: "float | None" = field(default=None, compare=False)
    subgaussian_constant: "float | None" = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown family {self.family!r}")
        if self.family == "uniform_discrete":
            if len(self.points) == 0 or len(self.points) != len(self.probs):
                raise ArgumentError("points and probs must be non-empty and of equal length")
            if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-12:
                raise ArgumentError("probabilities must be non-negative and sum to 1")
        if self.family == "shifted" and (self.base is None or len(self.offsets) == 0):
            raise ArgumentError("shifted family needs a base distribution and offsets")

    # construction -------------------------------------------------------

    @classmethod
    def rademacher(cls):
        return cls._with_moments("rademacher", points=(-1.0, 1.0), probs=(0.5, 0.5))

    @classmethod
    def gaussian(cls):
        return cls._with_moments("gaussian")

    @classmethod
    def uniform_discrete(cls, points, probs=None):
        points = tuple(float(x) for x in points)
        if probs is None:
            probs = (1.0 / len(points),) * len(points)
        return cls._with_moments("uniform_discrete", points=points, probs=tuple(float(p) for p in probs))

    @classmethod
    def shifted(cls, base, offsets):
        offsets = np.atleast_1d(np.asarray(offsets, dtype=float))
        return cls._with_moments("shifted", base=base, offsets=tuple(offsets.tolist()))

    @classmethod
    def from_name(cls, name, points=None, probs=None, shift=None):
        if name == "rademacher":
            d = cls.rademacher()
        elif name == "gaussian":
            d = cls.gaussian()
        elif name == "uniform_discrete":
            if points is None:
                raise ArgumentError("uniform_discrete needs support points")
            d = cls.uniform_discrete(points, probs)
        else:
            raise ArgumentError(f"unknown family {name!r}")
        if shift:
            d = cls.shifted(d, shift)
        return d

    @classmethod
    def _with_moments(cls, family, **kw):
        proto = cls(family=family, **kw)
        m = proto.analytic_moments()
        return cls(family=family, variance=m["variance"], third_moment_bound=m["third"],
                   fourth_moment_bound=m["fourth"], subgaussian_constant=m["subgaussian"], **kw)

    # properties ---------------------------------------------------------

    @property
    def is_finite(self):
        if self.family == "shifted":
            return self.base.is_finite
        return self.family != "gaussian"

    @property
    def per_coordinate(self):
        return self.family == "shifted" and len(self.offsets) > 1

    def offset(self, k=0):
        if self.family != "shifted":
            return 0.0
        return self.offsets[k] if len(self.offsets) > 1 else self.offsets[0]

    def support(self, k=0):
        """Atoms and probabilities of the k-th coordinate variable."""
        if self.family == "shifted":
            pts, pr = self.base.support()
            return pts + self.offset(k), pr
        if not self.is_finite:
            raise CapabilityError(f"{self.family} has no finite support")
        return np.array(self.points, dtype=float), np.array(self.probs, dtype=float)

    def exact_atoms(self):
        """Atoms as Fractions, or None when they are not small rationals."""
        if not self.is_finite or self.per_coordinate:
            return None
        out = []
        for x in self.support()[0]:
            f = Fraction(float(x)).limit_denominator(10**6)
            if float(f) != float(x):
                return None
            out.append(f)
        return out

    def analytic_moments(self):
        """Variance, E|xi|^3, E xi^4 and a subgaussian constant, computed from the law."""
        if self.family == "gaussian":
            return {"variance": 1.0, "third": 2.0 * sqrt(2.0 / pi), "fourth": 3.0,
                    "subgaussian": sqrt(2.0)}
        if self.family == "shifted":
            ks = range(len(self.offsets))
            if not self.base.is_finite:
                # E|g + t|^3 has no short closed form; use quadrature on the density.
                from scipy.integrate import quad
                third = max(quad(lambda x, t=t: abs(x + t) ** 3 * np.exp(-x * x / 2) / sqrt(2 * pi),
                                 -np.inf, np.inf)[0] for t in self.offsets)
                fourth = max(3 + 6 * t * t + t ** 4 for t in self.offsets)
                return {"variance": 1.0, "third": third, "fourth": fourth, "subgaussian": None}
            stats = [_discrete_moments(*self.support(k)) for k in ks]
            return {key: max(s[key] for s in stats) for key in stats[0]}
        return _discrete_moments(np.array(self.points, dtype=float), np.array(self.probs, dtype=float))

    # evaluation ---------------------------------------------------------

    def characteristic(self, u, k=0):
        """E exp(i u xi_k), vectorized over u."""
        u = np.asarray(u, dtype=float)
        if self.family == "gaussian":
            return np.exp(-0.5 * u * u).astype(complex)
        if self.family == "rademacher":
            return np.cos(u).astype(complex)
        if self.family == "shifted":
            return np.exp(1j * u * self.offset(k)) * self.base.characteristic(u)
        pts, pr = self.support()
        return np.exp(1j * np.multiply.outer(u, pts)) @ pr

    def from_uniform(self, u):
        """Inverse-CDF transform of uniforms in [0,1); one uniform per draw."""
        u = np.asarray(u, dtype=float)
        if self.family == "gaussian":
            return ndtri(u)
        if self.family == "rademacher":
            return np.where(u < 0.5, -1.0, 1.0)
        if self.family == "shifted":
            x = self.base.from_uniform(u)
            off = np.array(self.offsets)
            return x + (off[0] if len(off) == 1 else off)
        pts, pr = self.support()
        cdf = np.cumsum(pr)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(pts) - 1)
        return pts[idx]

    def sample(self, rng, size):
        return self.from_uniform(rng.random(size))

    def describe(self):
        d = {"family": self.family}
        if self.family == "uniform_discrete":
            d.update(points=list(self.points), probs=list(self.probs))
        if self.family == "shifted":
            d.update(base=self.base.describe(), offsets=list(self.offsets))
        return d


def _discrete_moments(pts, pr):
    mean = float(pr @ pts)
    var = float(pr @ (pts - mean) ** 2)
    m = float(np.max(np.abs(pts)))
    return {
        "variance": var,
        "third": float(pr @ np.abs(pts) ** 3),
        "fourth": float(pr @ pts ** 4),
        # bounded |xi| <= m gives P(|xi| > t) <= 2 exp(-t^2 ln2 / m^2)
        "subgaussian": m / sqrt(log(2.0)) if m > 0 else 0.0,
    }
