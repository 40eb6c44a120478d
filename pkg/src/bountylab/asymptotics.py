"""Large-contest limits: participation mass, limiting success, rates.

As the pool grows, the equilibrium threshold falls toward the bottom of the
cost support while the expected number of searchers n * F(c_n) approaches a
finite mass kappa solving c_lo = V (1 - exp(-q kappa)) / kappa, provided
c_lo > 0. With c_lo = 0 the mass diverges and the bug is found almost
surely in the limit. This module solves for kappa, cross-checks finite-n
sweeps against the limits, estimates log-log convergence rates, and scans
for the pool size beyond which success becomes monotone in n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contest_core import ContestParams
from .distributions import CostDistribution
from .equilibrium import solve_threshold
from .errors import NoLimitError, ParameterError, ZeroDensityError

__all__ = [
    "KappaResult",
    "LimitReport",
    "RateReport",
    "solve_kappa",
    "solve_kappa_with_bug",
    "limit_consistency",
    "convergence_rate",
    "tail_monotonicity_n",
    "inverse_elasticity_floor",
]

KAPPA_TOL = 1e-12


@dataclass(frozen=True)
class KappaResult:
    """Limiting searcher mass and success probability.

    ``kappa`` is ``math.inf`` when the mass diverges (zero lowest cost), in
    which case the bug is found with certainty in the limit.
    """

    kappa: float
    limit_success: float
    residual: float

    @property
    def divergent(self) -> bool:
        return math.isinf(self.kappa)


def _solve_mass(rhs, at_zero: float, c_lo: float) -> tuple[float, float]:
    """Root of the decreasing map rhs(kappa) = c_lo with limit at_zero at 0+."""
    if c_lo >= at_zero:
        raise NoLimitError(
            f"lowest cost {c_lo} meets or exceeds the expected reward {at_zero}; "
            "limit participation vanishes"
        )
    hi = 1.0
    while rhs(hi) >= c_lo:
        hi *= 2.0
        if hi > 1e300:
            raise NoLimitError("failed to bracket the limiting mass")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if rhs(mid) > c_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= KAPPA_TOL * max(1.0, hi):
            break
    kappa = 0.5 * (lo + hi)
    return kappa, abs(c_lo - rhs(kappa))


def solve_kappa(c_lo: float, q: float, prize: float) -> KappaResult:
    """Limiting mass for the plain contest: c_lo = V (1 - e^(-q k)) / k."""
    if not 0.0 < q <= 1.0:
        raise ParameterError(f"find probability must lie in (0, 1], got {q}")
    if prize <= 0.0:
        raise ParameterError(f"prize must be positive, got {prize}")
    if c_lo < 0.0:
        raise ParameterError(f"lowest cost must be nonnegative, got {c_lo}")
    if c_lo == 0.0:
        return KappaResult(kappa=math.inf, limit_success=1.0, residual=0.0)
    rhs = lambda k: prize * (-math.expm1(-q * k)) / k
    kappa, residual = _solve_mass(rhs, q * prize, c_lo)
    return KappaResult(kappa=kappa, limit_success=-math.expm1(-q * kappa), residual=residual)


def solve_kappa_with_bug(
    c_lo: float, q: float, prize: float, q_a: float, v_a: float
) -> KappaResult:
    """Limiting mass with a planted bug: two reward terms share the mass.

    Requires c_lo > 0; with a zero lowest cost the mass diverges and
    planting a bug only adds cost.
    """
    if not 0.0 < q <= 1.0:
        raise ParameterError(f"find probability must lie in (0, 1], got {q}")
    if prize <= 0.0 or v_a < 0.0:
        raise ParameterError("prize must be positive and the planted reward nonnegative")
    if not 0.0 <= q_a <= 1.0:
        raise ParameterError(f"planted-bug find probability must lie in [0, 1], got {q_a}")
    if c_lo <= 0.0:
        raise ParameterError("lowest cost must be positive; the mass diverges at zero")
    rhs = lambda k: (prize * (-math.expm1(-q * k)) + v_a * (-math.expm1(-q_a * k))) / k
    kappa, residual = _solve_mass(rhs, q * prize + q_a * v_a, c_lo)
    return KappaResult(kappa=kappa, limit_success=-math.expm1(-q * kappa), residual=residual)


@dataclass(frozen=True)
class LimitReport:
    """Finite-n equilibria on a geometric grid, compared to their limits."""

    rows: tuple[tuple[int, float, float, float], ...]  # (n, c_n, P_n, n F(c_n))
    kappa: KappaResult
    threshold_gap: float
    mass_gap: float | None
    success_gap: float


def _geometric_ns(n_lo: int, n_hi: int, points: int) -> list[int]:
    raw = np.geomspace(n_lo, n_hi, points)
    out: list[int] = []
    for v in raw:
        n = int(round(v))
        if not out or n > out[-1]:
            out.append(n)
    return out


def limit_consistency(
    d: CostDistribution, prize: float, q: float, n_max: int, points: int = 12
) -> LimitReport:
    """Solve along a geometric n-grid and report the gaps to the limits."""
    if n_max < 1000:
        raise ParameterError("n_max must be at least 1000 for a meaningful limit check")
    ns = _geometric_ns(10, n_max, points)
    rows = []
    for n in ns:
        res = solve_threshold(d, ContestParams(prize, q, n))
        rows.append((n, res.threshold, res.success, n * float(d.cdf(res.threshold))))
    kappa = solve_kappa(d.support_lo, q, prize)
    last = rows[-1]
    return LimitReport(
        rows=tuple(rows),
        kappa=kappa,
        threshold_gap=abs(last[1] - d.support_lo),
        mass_gap=None if kappa.divergent else abs(last[3] - kappa.kappa),
        success_gap=abs(last[2] - kappa.limit_success),
    )


@dataclass(frozen=True)
class RateReport:
    """Least-squares log-log slopes fitted on the top half of the n-grid."""

    slope_cost_mass: float  # c_n * F(c_n) against n; -1 expected
    slope_tail_mass: float | None  # F(c_n) against n when c_lo > 0; -1 expected
    slope_threshold: float | None  # c_n against n when c_lo = 0
    slope_threshold_excess: float | None  # c_n - c_lo against n when c_lo > 0


def _loglog_slope(ns, ys) -> float:
    return float(np.polyfit(np.log(ns), np.log(ys), 1)[0])


def convergence_rate(
    d: CostDistribution, prize: float, q: float, n_grid: list[int]
) -> RateReport:
    """Fit convergence-rate exponents from equilibria on a geometric grid.

    Only the top half of the grid enters the fits, which suppresses the
    pre-asymptotic bias of small n.
    """
    if len(n_grid) < 6:
        raise ParameterError("need at least 6 grid points")
    ns = sorted(int(n) for n in n_grid)
    sols = [solve_threshold(d, ContestParams(prize, q, n)) for n in ns]
    cs = np.array([s.threshold for s in sols])
    fs = np.array([float(d.cdf(c)) for c in cs])
    top = slice(len(ns) // 2, None)
    ns_top = np.array(ns)[top]
    c_lo = d.support_lo
    slope_cost_mass = _loglog_slope(ns_top, (cs * fs)[top])
    if c_lo > 0.0:
        return RateReport(
            slope_cost_mass=slope_cost_mass,
            slope_tail_mass=_loglog_slope(ns_top, fs[top]),
            slope_threshold=None,
            slope_threshold_excess=_loglog_slope(ns_top, (cs - c_lo)[top]),
        )
    return RateReport(
        slope_cost_mass=slope_cost_mass,
        slope_tail_mass=None,
        slope_threshold=_loglog_slope(ns_top, cs[top]),
        slope_threshold_excess=None,
    )


def tail_monotonicity_n(
    d: CostDistribution, prize: float, q: float, n_max: int
) -> int | None:
    """Smallest N with the success sequence strictly increasing past it.

    Scans every pool size from 2 to ``n_max`` and returns the smallest N
    such that P*(n) > P*(n-1) for every scanned n > N, or None when the
    sequence is still falling at the end of the scan.
    """
    if n_max < 3:
        raise ParameterError("n_max must be at least 3")
    ps = [
        solve_threshold(d, ContestParams(prize, q, n)).success
        for n in range(2, n_max + 1)
    ]
    last_drop = None
    for i in range(1, len(ps)):
        if ps[i] <= ps[i - 1]:
            last_drop = i
    if last_drop is None:
        return 2
    if last_drop == len(ps) - 1:
        return None
    return last_drop + 2  # ps[i] corresponds to n = i + 2


def inverse_elasticity_floor(
    d: CostDistribution, samples: int = 40, start_fraction: float = 0.5
) -> float:
    """Estimated lower bound of F/(c f) on a geometric approach to c_lo.

    A strictly positive floor is the tail-monotonicity condition on the cost
    distribution. The estimate samples the inverse elasticity at offsets
    shrinking geometrically toward the lower support; segments of zero
    density contribute +inf and cannot lower the floor. Reported as a
    diagnostic, never asserted.
    """
    width = d.support_hi - d.support_lo
    floor = math.inf
    offset = width * start_fraction
    for _ in range(samples):
        c = d.support_lo + offset
        try:
            floor = min(floor, d.inverse_elasticity(c))
        except ZeroDensityError:
            pass
        offset *= 0.5
    return floor
