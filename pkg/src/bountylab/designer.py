"""Scheme-design objectives and grid optimizers.

The principal earns ``fix_value`` when the real bug is found and pays out
prizes to finders. Design levers: plant a known bug (reward v_a, find
probability q_a) to pull more searchers in, hire an always-on expert, or
split the prize across finder ranks. Objectives are cheap to evaluate but
carry no convexity structure, so the optimizers are exhaustive grids with
one local refinement pass and are flagged as heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .contest_core import ContestParams, _success_raw, p_at_least_m, success_prob
from .distributions import CostDistribution
from .equilibrium import (
    EquilibriumResult,
    PrizeVector,
    solve_artificial,
    solve_expert,
    solve_multiprize,
    solve_threshold,
)
from .asymptotics import solve_kappa_with_bug
from .errors import NonInteriorError, ParameterError

__all__ = [
    "DesignerParams",
    "DesignEvaluation",
    "eval_bug_design",
    "eval_bug_design_asymptotic",
    "optimize_bug",
    "expert_success",
    "multiprize_utility",
    "optimize_prizes",
]


@dataclass(frozen=True)
class DesignerParams:
    """The principal's side of the problem.

    ``fix_value`` is the utility of the real bug being found and must
    exceed the prize, otherwise running the scheme cannot pay. Optional
    grid bounds steer :func:`optimize_bug`.
    """

    fix_value: float
    contest: ContestParams
    bug_bounds: tuple[tuple[float, float], tuple[float, float]] | None = None
    prize_resolution: int | None = None

    def __post_init__(self):
        if not self.fix_value > self.contest.prize:
            raise ParameterError(
                f"fix_value must exceed the prize ({self.contest.prize}), got {self.fix_value}"
            )
        if self.bug_bounds is not None:
            (v_lo, v_hi), (q_lo, q_hi) = self.bug_bounds
            if not (0.0 <= v_lo <= v_hi and math.isfinite(v_hi)):
                raise ParameterError("planted-reward bounds must be finite and ordered")
            if not (0.0 <= q_lo <= q_hi <= 1.0):
                raise ParameterError("planted find-probability bounds must lie in [0, 1]")


@dataclass(frozen=True)
class DesignEvaluation:
    """One evaluated design: decision variables, equilibrium, objective.

    ``objective`` always equals ``benefit - sum(reward_costs)``; both parts
    are stored so the decomposition can be audited.
    """

    variables: tuple[tuple[str, float], ...]
    threshold: float
    objective: float
    benefit: float
    reward_costs: tuple[float, ...]
    method: str = "exact"
    note: str | None = None

    def variable(self, name: str) -> float:
        for key, val in self.variables:
            if key == name:
                return val
        raise KeyError(name)


def eval_bug_design(
    d: CostDistribution, dp: DesignerParams, v_a: float, q_a: float
) -> DesignEvaluation:
    """Designer payoff of planting a bug: margin on success minus its payout."""
    p = dp.contest
    res = solve_artificial(d, p, v_a, q_a)
    big_f = float(d.cdf(res.threshold))
    benefit = (dp.fix_value - p.prize) * _success_raw(big_f, p.q, p.n)
    cost = v_a * _success_raw(big_f, q_a, p.n)
    return DesignEvaluation(
        variables=(("v_a", v_a), ("q_a", q_a)),
        threshold=res.threshold,
        objective=benefit - cost,
        benefit=benefit,
        reward_costs=(cost,),
    )


def eval_bug_design_asymptotic(
    c_lo: float, dp: DesignerParams, v_a: float, q_a: float
) -> DesignEvaluation:
    """Designer payoff of planting a bug in the unbounded-pool limit.

    With a zero lowest cost the searcher mass diverges, success is certain
    anyway, and the best planted reward is zero; that advisory evaluation is
    returned instead of an error.
    """
    p = dp.contest
    if c_lo == 0.0:
        benefit = dp.fix_value - p.prize
        return DesignEvaluation(
            variables=(("v_a", 0.0), ("q_a", q_a)),
            threshold=c_lo,
            objective=benefit,
            benefit=benefit,
            reward_costs=(0.0,),
            note="zero lowest cost: success is certain without planting, v_a = 0 is optimal",
        )
    kres = solve_kappa_with_bug(c_lo, p.q, p.prize, q_a, v_a)
    benefit = (dp.fix_value - p.prize) * (-math.expm1(-p.q * kres.kappa))
    cost = v_a * (-math.expm1(-q_a * kres.kappa))
    return DesignEvaluation(
        variables=(("v_a", v_a), ("q_a", q_a), ("kappa", kres.kappa)),
        threshold=c_lo,
        objective=benefit - cost,
        benefit=benefit,
        reward_costs=(cost,),
    )


def _grid(lo: float, hi: float, points: int) -> list[float]:
    if points == 1 or hi == lo:
        return [lo]
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


def optimize_bug(
    dp: DesignerParams,
    resolution: int,
    *,
    d: CostDistribution | None = None,
    c_lo: float | None = None,
    bounds: tuple[tuple[float, float], tuple[float, float]] | None = None,
) -> DesignEvaluation:
    """Best planted-bug design found on a (v_a, q_a) grid plus one refinement.

    Pass ``d`` for the finite-pool objective or ``c_lo`` for the asymptotic
    one. Cells that violate interiority are skipped. The result is a grid
    optimum, not a certified one.
    """
    if (d is None) == (c_lo is None):
        raise ParameterError("pass exactly one of d (finite pool) or c_lo (asymptotic)")
    if resolution < 2:
        raise ParameterError("need at least 2 grid points per axis")
    (v_lo, v_hi), (q_lo, q_hi) = (
        bounds or dp.bug_bounds or ((0.0, dp.contest.prize), (0.0, 1.0))
    )

    def evaluate(v_a: float, q_a: float) -> DesignEvaluation | None:
        try:
            if d is not None:
                return eval_bug_design(d, dp, v_a, q_a)
            return eval_bug_design_asymptotic(c_lo, dp, v_a, q_a)
        except NonInteriorError:
            return None

    def grid_best(vs: list[float], qs: list[float]) -> tuple[DesignEvaluation | None, int, int]:
        best, bi, bj = None, -1, -1
        for i, v_a in enumerate(vs):
            for j, q_a in enumerate(qs):
                ev = evaluate(v_a, q_a)
                if ev is not None and (best is None or ev.objective > best.objective):
                    best, bi, bj = ev, i, j
        return best, bi, bj

    vs = _grid(v_lo, v_hi, resolution)
    qs = _grid(q_lo, q_hi, resolution)
    best, bi, bj = grid_best(vs, qs)
    if best is None:
        raise NonInteriorError(False, False, "no feasible cell on the design grid")
    # one refinement pass around the incumbent cell
    vs2 = _grid(vs[max(bi - 1, 0)], vs[min(bi + 1, len(vs) - 1)], resolution)
    qs2 = _grid(qs[max(bj - 1, 0)], qs[min(bj + 1, len(qs) - 1)], resolution)
    refined, _, _ = grid_best(vs2, qs2)
    if refined is not None and refined.objective > best.objective:
        best = refined
    return DesignEvaluation(
        variables=best.variables,
        threshold=best.threshold,
        objective=best.objective,
        benefit=best.benefit,
        reward_costs=best.reward_costs,
        method="grid",
        note=best.note,
    )


def expert_success(d: CostDistribution, p: ContestParams, q_e: float) -> float:
    """Overall success probability with an expert of skill q_e in the pool.

    The crowd equilibrium adjusts downward first; the expert then covers the
    residual failure probability with chance q_e.
    """
    res = solve_expert(d, p, q_e)
    return (1.0 - q_e) * success_prob(d, res.threshold, p) + q_e


def multiprize_utility(
    d: CostDistribution, dp: DesignerParams, v: PrizeVector
) -> DesignEvaluation:
    """Principal's utility of a prize split: W P(c) - sum_m v_m P_m(c).

    P_m is the probability that at least m agents find the bug, so each
    prize is paid exactly when its rank is reached. The equivalent form
    (W - v_1) P - sum_{m>=2} v_m P_m is recomputed as a consistency check.
    """
    p = dp.contest
    res = solve_multiprize(d, p, v)
    c = res.threshold
    p_success = success_prob(d, c, p)
    tails = [p_at_least_m(d, c, p, m) for m in range(1, p.n + 1)]
    costs = tuple(vm * tails[m] for m, vm in enumerate(v.prizes))
    benefit = dp.fix_value * p_success
    objective = benefit - math.fsum(costs)
    alt = (dp.fix_value - v.prizes[0]) * p_success - math.fsum(
        vm * tails[m] for m, vm in enumerate(v.prizes) if m >= 1
    )
    if abs(objective - alt) > 1e-10:
        raise ArithmeticError(
            f"utility decomposition mismatch: {objective} vs {alt}"
        )
    return DesignEvaluation(
        variables=tuple((f"v{m + 1}", vm) for m, vm in enumerate(v.prizes)),
        threshold=c,
        objective=objective,
        benefit=benefit,
        reward_costs=costs,
    )


def _ordered_splits(total: int, parts: int):
    """Weakly decreasing integer compositions of ``total`` into ``parts``."""

    def rec(remaining: int, cap: int, slots: int, prefix: tuple[int, ...]):
        if slots == 1:
            if remaining <= cap:
                yield prefix + (remaining,)
            return
        for k in range(min(cap, remaining), -1, -1):
            if remaining - k > k * (slots - 1):
                break  # the rest cannot fit under a cap of k
            yield from rec(remaining - k, k, slots - 1, prefix + (k,))

    yield from rec(total, total, parts, ())


def optimize_prizes(
    d: CostDistribution, dp: DesignerParams, resolution: int
) -> DesignEvaluation:
    """Best prize split on the ordered simplex at the given resolution.

    Enumerates all weakly decreasing splits of the prize into
    ``resolution`` shares, then runs one refinement pass of pairwise mass
    transfers around the incumbent. Grid optimum, flagged as such.
    """
    p = dp.contest
    if p.n > 6:
        raise ParameterError("simplex enumeration supported up to n = 6")
    if resolution < 5:
        raise ParameterError("need resolution >= 5")
    unit = p.prize / resolution

    def evaluate(prizes: tuple[float, ...]) -> DesignEvaluation | None:
        try:
            return multiprize_utility(d, dp, PrizeVector(prizes))
        except (NonInteriorError, ParameterError):
            return None

    best = None
    for split in _ordered_splits(resolution, p.n):
        ev = evaluate(tuple(k * unit for k in split))
        if ev is not None and (best is None or ev.objective > best.objective):
            best = ev
    if best is None:
        raise NonInteriorError(False, False, "no feasible prize vector on the grid")

    # refinement: transfer small mass between coordinate pairs of the incumbent
    incumbent = tuple(val for _, val in best.variables)
    for delta in (unit / 2.0, unit / 4.0, unit / 8.0):
        for i, j in combinations(range(p.n), 2):
            for src, dst in ((i, j), (j, i)):
                cand = list(incumbent)
                cand[src] -= delta
                cand[dst] += delta
                ordered = tuple(sorted(cand, reverse=True))
                if ordered[-1] < 0.0:
                    continue
                ev = evaluate(ordered)
                if ev is not None and ev.objective > best.objective:
                    best = ev
    return DesignEvaluation(
        variables=best.variables,
        threshold=best.threshold,
        objective=best.objective,
        benefit=best.benefit,
        reward_costs=best.reward_costs,
        method="grid",
    )
