"""Cost distributions with bounded support.

Agents draw a private search cost c from a continuous distribution F on
[support_lo, support_hi]. The families implemented here are the ones the
solver and its test suite need:

* ``Uniform(lo, hi)``
* ``Power(alpha)`` with F(c) = c**alpha on [0, 1]
* ``ShiftedPower(alpha, lo, hi)`` with F(c) = ((c - lo)/(hi - lo))**alpha
* ``PiecewiseLinearCdf(knots)`` for hand-specified CDFs with exact
  rational knots

Queries outside the support clamp to 0/1 rather than raising, because the
root bracketing in the solvers probes the support endpoints. All parameter
validation happens at construction; instances are immutable and safe to
share between threads.
"""

from __future__ import annotations

import bisect
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import ParameterError, ZeroDensityError

__all__ = [
    "CostDistribution",
    "Uniform",
    "Power",
    "ShiftedPower",
    "PiecewiseLinearCdf",
    "from_config",
    "cdf_dominates",
]


class CostDistribution(ABC):
    """A CDF/PDF pair on a finite support, immutable after construction."""

    support_lo: float
    support_hi: float

    @abstractmethod
    def cdf(self, c):
        """F(c), clamped to [0, 1] outside the support. Accepts arrays."""

    @abstractmethod
    def pdf(self, c: float) -> float:
        """Density f(c); 0 outside the support."""

    @abstractmethod
    def ppf(self, u):
        """Quantile function, the inverse of ``cdf``. Accepts arrays."""

    def inverse_elasticity(self, c: float) -> float:
        """F(c) / (c * f(c)), the reciprocal CDF elasticity.

        Defined for c in (support_lo, support_hi] with F(c) > 0. Raises
        :class:`ZeroDensityError` where the density vanishes.
        """
        if not (self.support_lo < c <= self.support_hi):
            raise ParameterError(f"c={c} outside ({self.support_lo}, {self.support_hi}]")
        big_f = float(self.cdf(c))
        if big_f <= 0.0:
            raise ParameterError(f"cdf({c}) = 0; elasticity undefined")
        f = self.pdf(c)
        if f == 0.0:
            raise ZeroDensityError(f"density vanishes at c={c}")
        return big_f / (c * f)

    def _clamped(self, c: float) -> float:
        return min(max(c, self.support_lo), self.support_hi)


@dataclass(frozen=True)
class Uniform(CostDistribution):
    """Uniform costs on [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi):
            raise ParameterError(f"need 0 <= lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def support_lo(self) -> float:
        return self.lo

    @property
    def support_hi(self) -> float:
        return self.hi

    def cdf(self, c):
        return np.clip((c - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def pdf(self, c: float) -> float:
        if self.lo <= c <= self.hi:
            return 1.0 / (self.hi - self.lo)
        return 0.0

    def ppf(self, u):
        return self.lo + (self.hi - self.lo) * u


@dataclass(frozen=True)
class Power(CostDistribution):
    """F(c) = c**alpha on [0, 1]; alpha > 0."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ParameterError(f"need alpha > 0, got {self.alpha}")

    @property
    def support_lo(self) -> float:
        return 0.0

    @property
    def support_hi(self) -> float:
        return 1.0

    def cdf(self, c):
        return np.clip(c, 0.0, 1.0) ** self.alpha

    def pdf(self, c: float) -> float:
        if not 0.0 <= c <= 1.0:
            return 0.0
        if c == 0.0:
            # right limit: 0 for alpha > 1, 1 at alpha = 1, +inf below
            return 0.0 if self.alpha > 1.0 else (1.0 if self.alpha == 1.0 else np.inf)
        return self.alpha * c ** (self.alpha - 1.0)

    def ppf(self, u):
        return u ** (1.0 / self.alpha)


@dataclass(frozen=True)
class ShiftedPower(CostDistribution):
    """F(c) = ((c - lo)/(hi - lo))**alpha on [lo, hi]; alpha > 0."""

    alpha: float
    lo: float
    hi: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ParameterError(f"need alpha > 0, got {self.alpha}")
        if not (0.0 <= self.lo < self.hi):
            raise ParameterError(f"need 0 <= lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def support_lo(self) -> float:
        return self.lo

    @property
    def support_hi(self) -> float:
        return self.hi

    def cdf(self, c):
        z = np.clip((c - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        return z**self.alpha

    def pdf(self, c: float) -> float:
        if not self.lo <= c <= self.hi:
            return 0.0
        width = self.hi - self.lo
        z = (c - self.lo) / width
        if z == 0.0:
            return 0.0 if self.alpha > 1.0 else (1.0 / width if self.alpha == 1.0 else np.inf)
        return self.alpha / width * z ** (self.alpha - 1.0)

    def ppf(self, u):
        return self.lo + (self.hi - self.lo) * u ** (1.0 / self.alpha)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise ParameterError(f"cannot interpret knot value {x!r}")


@dataclass(frozen=True)
class PiecewiseLinearCdf(CostDistribution):
    """A CDF given by straight segments between knots (c_i, F_i).

    Knots are stored as exact rationals so hand-specified fractional knots
    evaluate without drift; strings like ``"3/7"`` are accepted. The first
    knot must have F = 0, the last F = 1, c strictly increasing and F
    nondecreasing. At an interior knot ``pdf`` returns the right
    derivative, at the upper endpoint the left one.
    """

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, knots: Sequence[tuple]):
        pairs = tuple((_as_fraction(c), _as_fraction(F)) for c, F in knots)
        if len(pairs) < 2:
            raise ParameterError("need at least two knots")
        cs = [p[0] for p in pairs]
        fs = [p[1] for p in pairs]
        if any(b <= a for a, b in zip(cs, cs[1:])):
            raise ParameterError("knot positions must be strictly increasing")
        if any(b < a for a, b in zip(fs, fs[1:])):
            raise ParameterError("knot CDF values must be nondecreasing")
        if fs[0] != 0 or fs[-1] != 1:
            raise ParameterError("knot CDF values must start at 0 and end at 1")
        if cs[0] < 0:
            raise ParameterError("support must be nonnegative")
        object.__setattr__(self, "knots", pairs)
        object.__setattr__(self, "_cs", np.array([float(c) for c in cs]))
        object.__setattr__(self, "_fs", np.array([float(F) for F in fs]))

    @property
    def support_lo(self) -> float:
        return float(self.knots[0][0])

    @property
    def support_hi(self) -> float:
        return float(self.knots[-1][0])

    def cdf(self, c):
        if isinstance(c, Fraction):
            return self._cdf_exact(c)
        return np.interp(c, self._cs, self._fs)

    def _cdf_exact(self, c: Fraction) -> Fraction:
        ks = self.knots
        if c <= ks[0][0]:
            return Fraction(0)
        if c >= ks[-1][0]:
            return Fraction(1)
        for (c0, f0), (c1, f1) in zip(ks, ks[1:]):
            if c0 <= c <= c1:
                return f0 + (f1 - f0) * (c - c0) / (c1 - c0)
        raise AssertionError("unreachable")

    def pdf(self, c: float) -> float:
        cs = self._cs
        if not cs[0] <= c <= cs[-1]:
            return 0.0
        # right derivative at knots; bisect_right pushes a knot into the
        # segment to its right, except at the upper endpoint
        i = bisect.bisect_right(cs, c) - 1
        i = min(i, len(cs) - 2)
        return (self._fs[i + 1] - self._fs[i]) / (cs[i + 1] - cs[i])

    def ppf(self, u):
        return np.interp(u, self._fs, self._cs)


_KINDS = {"uniform", "power", "shifted_power", "piecewise_linear"}


def from_config(spec: Mapping) -> CostDistribution:
    """Build a distribution from a ``{"kind": ..., ...}`` config record."""
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ParameterError("distribution config must be a mapping with a 'kind' key")
    kind = spec["kind"]
    if kind not in _KINDS:
        raise ParameterError(f"unknown distribution kind {kind!r}; expected one of {sorted(_KINDS)}")
    fields = {k: v for k, v in spec.items() if k != "kind"}

    def take(required: set[str]) -> dict:
        unknown = set(fields) - required
        if unknown:
            raise ParameterError(f"unknown keys for {kind!r} distribution: {sorted(unknown)}")
        missing = required - set(fields)
        if missing:
            raise ParameterError(f"missing keys for {kind!r} distribution: {sorted(missing)}")
        return fields

    if kind == "uniform":
        f = take({"lo", "hi"})
        return Uniform(float(f["lo"]), float(f["hi"]))
    if kind == "power":
        f = take({"alpha"})
        return Power(float(f["alpha"]))
    if kind == "shifted_power":
        f = take({"alpha", "lo", "hi"})
        return ShiftedPower(float(f["alpha"]), float(f["lo"]), float(f["hi"]))
    f = take({"knots"})
    return PiecewiseLinearCdf([tuple(k) for k in f["knots"]])


def cdf_dominates(d_low: CostDistribution, d_high: CostDistribution, points: int = 1000) -> bool:
    """True when ``d_low.cdf >= d_high.cdf`` pointwise on a shared grid.

    First-order stochastic dominance in costs: ``d_low`` then tends to draw
    the cheaper searchers.
    """
    lo = min(d_low.support_lo, d_high.support_lo)
    hi = max(d_low.support_hi, d_high.support_hi)
    grid = np.linspace(lo, hi, points)
    return bool(np.all(d_low.cdf(grid) >= d_high.cdf(grid) - 1e-15))
