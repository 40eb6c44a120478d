"""Fixed-point solvers for equilibrium participation thresholds.

Every equilibrium in scope is characterized by a fixed point c = R(c) whose
right-hand side is strictly decreasing in c, so g(c) = R(c) - c has at most
one sign change on the cost support and plain bisection is guaranteed to
bracket it. Interiority is checked up front: the expected reward at the
bottom of the support must exceed the lowest cost, and at the top it must
fall short of the highest cost.

The two-agent asymmetric game is handled separately by scanning the
composition of the best-response maps, which can vanish on an interval
(an equilibrium continuum) as well as at isolated points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .contest_core import (
    ContestParams,
    _one_minus_pow,
    _phi_raw,
    _success_raw,
    phi,
    phi_expert,
    phi_rank,
    success_prob,
)
from .distributions import CostDistribution
from .errors import NonInteriorError, ParameterError

__all__ = [
    "EquilibriumResult",
    "PrizeVector",
    "SweepEntry",
    "AsymmetricEquilibria",
    "ThresholdInterval",
    "BestResponsePair",
    "check_interiority",
    "solve_threshold",
    "sweep_n",
    "dpdn_sign",
    "solve_expert",
    "critical_expertise",
    "solve_artificial",
    "solve_multiprize",
    "solve_multibug",
    "solve_asymmetric_n2",
    "hetero_best_response_n2",
]

BISECTION_TOL = 1e-13
BISECTION_MAX_ITER = 200


@dataclass(frozen=True)
class EquilibriumResult:
    """A solved participation threshold and its diagnostics.

    ``residual`` is the absolute fixed-point defect |R(c*) - c*| and
    ``interior_checks`` records the two endpoint inequalities. ``note``
    carries a diagnostic for boundary outcomes.
    """

    threshold: float
    success: float
    residual: float
    interior_checks: tuple[bool, bool]
    iterations: int
    note: str | None = None

    @property
    def interior(self) -> bool:
        return self.interior_checks[0] and self.interior_checks[1]


@dataclass(frozen=True)
class PrizeVector:
    """Ordered nonnegative prizes v1 >= ... >= vn for the ranked-prize game."""

    prizes: tuple[float, ...]

    def __init__(self, prizes: Sequence[float]):
        vs = tuple(float(v) for v in prizes)
        if not vs:
            raise ParameterError("prize vector must be nonempty")
        if any(v < -1e-12 for v in vs):
            raise ParameterError("prizes must be nonnegative")
        if any(b > a + 1e-12 for a, b in zip(vs, vs[1:])):
            raise ParameterError("prizes must be nonincreasing")
        object.__setattr__(self, "prizes", vs)

    @property
    def total(self) -> float:
        return math.fsum(self.prizes)

    def __len__(self) -> int:
        return len(self.prizes)


@dataclass(frozen=True)
class SweepEntry:
    n: int
    result: EquilibriumResult | None = None
    error: str | None = None


def _bisect_decreasing(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = BISECTION_TOL,
    max_iter: int = BISECTION_MAX_ITER,
) -> tuple[float, int]:
    """Root of a decreasing g with g(lo) >= 0 >= g(hi); returns (root, iters)."""
    a, b = float(lo), float(hi)
    iterations = 0
    while iterations < max_iter and b - a > tol:
        mid = 0.5 * (a + b)
        if not a < mid < b:  # hit the float grid
            break
        iterations += 1
        if g(mid) < 0.0:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b), iterations


def check_interiority(d: CostDistribution, p: ContestParams) -> tuple[bool, bool]:
    """The two strict endpoint inequalities for an interior fixed point.

    Returns ``(lower_ok, upper_ok)`` for ``c_lo < q V`` and
    ``V (1 - (1-q)^n) / n < c_hi``.
    """
    lower_ok = d.support_lo < p.q * p.prize
    upper_ok = p.prize * _one_minus_pow(p.q, p.n) / p.n < d.support_hi
    return lower_ok, upper_ok


def _solve_fixed_point(
    d: CostDistribution,
    rhs: Callable[[float], float],
    p: ContestParams,
    lower_ok: bool,
    upper_ok: bool,
) -> EquilibriumResult:
    if not (lower_ok and upper_ok):
        raise NonInteriorError(lower_ok, upper_ok)
    root, iterations = _bisect_decreasing(
        lambda c: rhs(c) - c, d.support_lo, d.support_hi
    )
    return EquilibriumResult(
        threshold=root,
        success=success_prob(d, root, p),
        residual=abs(rhs(root) - root),
        interior_checks=(lower_ok, upper_ok),
        iterations=iterations,
    )


def solve_threshold(d: CostDistribution, p: ContestParams) -> EquilibriumResult:
    """Unique symmetric equilibrium threshold solving c = V * phi(c)."""
    lower_ok, upper_ok = check_interiority(d, p)
    return _solve_fixed_point(d, lambda c: p.prize * phi(d, c, p), p, lower_ok, upper_ok)


def sweep_n(
    d: CostDistribution, prize: float, q: float, n_list: Sequence[int]
) -> list[SweepEntry]:
    """Solve the symmetric equilibrium for each pool size in ``n_list``.

    Failures are collected per entry so one bad row does not abort a table.
    """
    entries: list[SweepEntry] = []
    for n in n_list:
        try:
            res = solve_threshold(d, ContestParams(prize, q, int(n)))
            entries.append(SweepEntry(n=int(n), result=res))
        except (NonInteriorError, ParameterError) as exc:
            entries.append(SweepEntry(n=int(n), error=str(exc)))
    return entries


def dpdn_sign(d: CostDistribution, result: EquilibriumResult, p: ContestParams) -> int:
    """Sign of the success-probability derivative in the pool size.

    Evaluates, at the solved threshold, whether
    (1 - qF) ln(1 - qF) / (-qF) >= 1 / (1 + F / (c f)); the left side is the
    crowding-out discount and the right side the participation response.
    """
    c = result.threshold
    big_f = float(d.cdf(c))
    x = p.q * big_f
    if x <= 0.0:
        lhs = 1.0
    elif x >= 1.0:
        lhs = 0.0
    else:
        lhs = (1.0 - x) * math.log1p(-x) / (-x)
    rhs = 1.0 / (1.0 + d.inverse_elasticity(c))
    return 1 if lhs >= rhs else -1


def solve_expert(d: CostDistribution, p: ContestParams, q_e: float) -> EquilibriumResult:
    """Equilibrium threshold when a non-strategic expert also searches."""
    rhs = lambda c: p.prize * phi_expert(d, c, p, q_e)
    lower_ok = d.support_lo < rhs(d.support_lo)
    upper_ok = rhs(d.support_hi) < d.support_hi
    return _solve_fixed_point(d, rhs, p, lower_ok, upper_ok)


def critical_expertise(d: CostDistribution, p: ContestParams) -> float:
    """Expert skill that replicates one extra strategic agent: q F(c*(n+1))."""
    bigger = solve_threshold(d, ContestParams(p.prize, p.q, p.n + 1))
    return p.q * float(d.cdf(bigger.threshold))


def solve_artificial(
    d: CostDistribution, p: ContestParams, v_a: float, q_a: float
) -> EquilibriumResult:
    """Equilibrium with a planted known bug worth ``v_a`` found w.p. ``q_a``.

    The reward side becomes V * phi(c; q) + V_a * phi(c; q_a), still strictly
    decreasing, so the same bracketing applies.
    """
    if v_a < 0.0:
        raise ParameterError(f"planted-bug reward must be nonnegative, got {v_a}")
    if not 0.0 <= q_a <= 1.0:
        raise ParameterError(f"planted-bug find probability must lie in [0, 1], got {q_a}")

    def rhs(c: float) -> float:
        big_f = float(d.cdf(c))
        return p.prize * _phi_raw(big_f, p.q, p.n) + v_a * _phi_raw(big_f, q_a, p.n)

    lower_ok = d.support_lo < p.q * p.prize + q_a * v_a
    upper_ok = rhs(d.support_hi) < d.support_hi
    return _solve_fixed_point(d, rhs, p, lower_ok, upper_ok)


def solve_multiprize(
    d: CostDistribution, p: ContestParams, v: PrizeVector
) -> EquilibriumResult:
    """Equilibrium threshold for ranked prizes: c = sum_m v_m * phi_rank(c, m).

    When the reward curve fails to cross the diagonal, the boundary outcome
    is reported with a diagnostic note instead of raising.
    """
    if len(v) != p.n:
        raise ParameterError(f"prize vector has {len(v)} entries for n = {p.n}")
    if abs(v.total - p.prize) > 1e-12 * max(1.0, p.prize):
        raise ParameterError(f"prizes sum to {v.total}, expected {p.prize}")

    def rhs(c: float) -> float:
        return math.fsum(vm * phi_rank(d, c, p, m + 1) for m, vm in enumerate(v.prizes))

    lo, hi = d.support_lo, d.support_hi
    lower_ok = rhs(lo) > lo
    upper_ok = rhs(hi) < hi
    if not (lower_ok and upper_ok):
        boundary = lo if not lower_ok else hi
        return EquilibriumResult(
            threshold=boundary,
            success=success_prob(d, boundary, p),
            residual=abs(rhs(boundary) - boundary),
            interior_checks=(lower_ok, upper_ok),
            iterations=0,
            note="no interior crossing; boundary threshold reported",
        )
    root, iterations = _bisect_decreasing(lambda c: rhs(c) - c, lo, hi)
    return EquilibriumResult(
        threshold=root,
        success=success_prob(d, root, p),
        residual=abs(rhs(root) - root),
        interior_checks=(lower_ok, upper_ok),
        iterations=iterations,
    )


def solve_multibug(
    d: CostDistribution,
    prizes: Sequence[float],
    expected_counts: Sequence[float],
    find_probs: Sequence[float],
    n: int,
) -> EquilibriumResult:
    """Equilibrium with several bug types: c = sum_l V_l E[R_l] phi(c; q_l).

    ``expected_counts`` are the mean numbers of bugs of each type; zero-weight
    types drop out.
    """
    if not (len(prizes) == len(expected_counts) == len(find_probs)) or not prizes:
        raise ParameterError("bug-type lists must be nonempty and equally long")
    for v, r, q in zip(prizes, expected_counts, find_probs):
        if v < 0.0 or r < 0.0 or math.isinf(r) or math.isnan(r):
            raise ParameterError("rewards and expected counts must be finite and nonnegative")
        if not 0.0 <= q <= 1.0:
            raise ParameterError(f"find probability must lie in [0, 1], got {q}")
    if not (isinstance(n, int) and n >= 1):
        raise ParameterError(f"agent count must be an integer >= 1, got {n}")

    def rhs(c: float) -> float:
        big_f = float(d.cdf(c))
        return math.fsum(
            v * r * _phi_raw(big_f, q, n)
            for v, r, q in zip(prizes, expected_counts, find_probs)
        )

    lower_ok = d.support_lo < math.fsum(
        v * r * q for v, r, q in zip(prizes, expected_counts, find_probs)
    )
    upper_ok = rhs(d.support_hi) < d.support_hi
    if not (lower_ok and upper_ok):
        raise NonInteriorError(lower_ok, upper_ok)
    root, iterations = _bisect_decreasing(lambda c: rhs(c) - c, d.support_lo, d.support_hi)
    # success refers to the first bug type, the one of primary interest
    return EquilibriumResult(
        threshold=root,
        success=_success_raw(float(d.cdf(root)), find_probs[0], n),
        residual=abs(rhs(root) - root),
        interior_checks=(lower_ok, upper_ok),
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Two-agent asymmetric equilibria
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdInterval:
    """A segment of equilibria: every c1 in [c1_lo, c1_hi] pairs with br(c1)."""

    c1_lo: float
    c1_hi: float
    c2_at_lo: float
    c2_at_hi: float

    def contains(self, c1: float, tol: float = 0.0) -> bool:
        return self.c1_lo - tol <= c1 <= self.c1_hi + tol


@dataclass(frozen=True)
class AsymmetricEquilibria:
    points: tuple[tuple[float, float], ...] = field(default=())
    intervals: tuple[ThresholdInterval, ...] = field(default=())


@dataclass(frozen=True)
class BestResponsePair:
    """The two best-response maps of a two-agent game and their domain."""

    br1: Callable[[float], float]  # agent 1's threshold given agent 2's
    br2: Callable[[float], float]
    lo: float
    hi: float


def hetero_best_response_n2(
    mode: str,
    q: float,
    prize: float,
    *,
    dists: tuple[CostDistribution, CostDistribution] | None = None,
    dist: CostDistribution | None = None,
    times: tuple[float, float] | None = None,
) -> BestResponsePair:
    """Best-response maps for the two-agent game with heterogeneous agents.

    ``mode="costs"`` takes two cost distributions (``dists``); each agent's
    reward discount uses the rival's CDF. ``mode="search_times"`` takes one
    distribution plus per-agent search horizons ``times=(T1, T2)`` with
    T1 <= T2; the faster agent wins a larger share of double finds.
    """
    if not 0.0 < q <= 1.0:
        raise ParameterError(f"find probability must lie in (0, 1], got {q}")
    if prize <= 0.0:
        raise ParameterError(f"prize must be positive, got {prize}")
    if mode == "costs":
        if dists is None or len(dists) != 2:
            raise ParameterError("costs mode needs dists=(F1, F2)")
        d1, d2 = dists
        lo = min(d1.support_lo, d2.support_lo)
        hi = max(d1.support_hi, d2.support_hi)

        def clamp(c: float) -> float:
            return min(max(c, lo), hi)

        br1 = lambda c2: clamp(q * prize * (1.0 - 0.5 * q * float(d2.cdf(c2))))
        br2 = lambda c1: clamp(q * prize * (1.0 - 0.5 * q * float(d1.cdf(c1))))
        return BestResponsePair(br1, br2, lo, hi)
    if mode == "search_times":
        if dist is None or times is None:
            raise ParameterError("search_times mode needs dist=F and times=(T1, T2)")
        t1, t2 = times
        if not 0.0 < t1 <= t2:
            raise ParameterError(f"need 0 < T1 <= T2, got ({t1}, {t2})")
        share = t1 / (2.0 * t2)  # chance agent 2 beats agent 1 on a double find
        lo, hi = dist.support_lo, dist.support_hi

        def clamp(c: float) -> float:
            return min(max(c, lo), hi)

        br1 = lambda c2: clamp(q * prize * (1.0 - q * float(dist.cdf(c2)) * share))
        br2 = lambda c1: clamp(q * prize * (1.0 - q * float(dist.cdf(c1)) * (1.0 - share)))
        return BestResponsePair(br1, br2, lo, hi)
    raise ParameterError(f"unknown mode {mode!r}; expected 'costs' or 'search_times'")


def _refine_sign_change(
    h: Callable[[float], float], a: float, b: float, fa: float
) -> float:
    for _ in range(200):
        mid = 0.5 * (a + b)
        if not a < mid < b:
            break
        fm = h(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def _refine_flat_edge(
    h: Callable[[float], float], inside: float, outside: float, tol: float
) -> float:
    """Boundary point where |h| crosses ``tol`` between a flat and a non-flat c."""
    a, b = inside, outside
    for _ in range(100):
        mid = 0.5 * (a + b)
        if not min(a, b) < mid < max(a, b):
            break
        if abs(h(mid)) <= tol:
            a = mid
        else:
            b = mid
    return a


def solve_asymmetric_n2(
    br1: Callable[[float], float],
    br2: Callable[[float], float],
    lo: float,
    hi: float,
    scan_points: int = 2001,
    *,
    flat_tol: float = 1e-9,
    residual_tol: float = 1e-8,
) -> AsymmetricEquilibria:
    """All two-agent threshold equilibria found by a dense fixed-point scan.

    Scans h(c1) = br1(br2(c1)) - c1 on [lo, hi]; isolated sign changes become
    equilibrium points and runs where h vanishes (continua of equilibria)
    are reported as intervals with refined endpoints. Every returned pair
    satisfies both best-response equations within ``residual_tol``.
    """
    if scan_points < 10:
        raise ParameterError("scan_points must be at least 10")
    h = lambda c1: br1(br2(c1)) - c1
    step = (hi - lo) / (scan_points - 1)
    grid = [lo + i * step for i in range(scan_points)]
    grid[-1] = hi
    vals = [h(c) for c in grid]
    flat = [abs(v) <= flat_tol for v in vals]

    def is_equilibrium(c1: float) -> tuple[float, float] | None:
        c2 = br2(c1)
        if abs(br1(c2) - c1) <= residual_tol and abs(br2(c1) - c2) <= residual_tol:
            return (c1, c2)
        return None

    points: list[tuple[float, float]] = []
    intervals: list[ThresholdInterval] = []

    i = 0
    n = len(grid)
    while i < n:
        if flat[i]:
            j = i
            while j + 1 < n and flat[j + 1]:
                j += 1
            if j > i:  # a run: refine both edges against the neighbors
                left = grid[i] if i == 0 else _refine_flat_edge(h, grid[i], grid[i - 1], flat_tol)
                right = grid[j] if j == n - 1 else _refine_flat_edge(h, grid[j], grid[j + 1], flat_tol)
                intervals.append(
                    ThresholdInterval(left, right, br2(left), br2(right))
                )
            else:  # single flat sample: an isolated root
                c1 = grid[i]
                if 0 < i and i < n - 1 and (vals[i - 1] < 0.0) != (vals[i + 1] < 0.0):
                    c1 = _refine_sign_change(h, grid[i - 1], grid[i + 1], vals[i - 1])
                pair = is_equilibrium(c1)
                if pair:
                    points.append(pair)
            i = j + 1
        else:
            if i + 1 < n and not flat[i + 1] and (vals[i] < 0.0) != (vals[i + 1] < 0.0):
                c1 = _refine_sign_change(h, grid[i], grid[i + 1], vals[i])
                pair = is_equilibrium(c1)
                if pair:
                    points.append(pair)
            i += 1

    return AsymmetricEquilibria(points=tuple(points), intervals=tuple(intervals))
