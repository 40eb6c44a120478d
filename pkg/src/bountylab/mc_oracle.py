"""Monte Carlo simulation of the contest primitive.

Each trial draws private costs, applies the threshold strategies, lets
every searcher find the bug with its own probability at an arrival time
uniform on [0, horizon], and awards the prize to the earliest finder. The
estimators here re-derive every closed-form kernel by brute force, which
makes them the independent cross-check of the analytic code paths.

Determinism contract
--------------------
Trials are processed in fixed chunks of 2**16. Chunk ``i`` draws from a
Philox4x64 counter-based generator keyed with ``(seed, i)``, and within a
chunk the draw order is fixed (costs, then find/arrival variates, then the
expert's variate). Indicator estimates reduce to integer counts and payoff
estimates to per-chunk partial sums added in chunk order, so a given
``(seed, trials)`` pair reproduces bit-for-bit on a platform regardless of
how chunks would be distributed across workers.

A searcher's find event and arrival time share one uniform draw v: it
finds when v < q, and the arrival time is then v * horizon / q, which is
uniform given a find and independent across agents. Exact arrival ties
have probability zero in double precision; if one occurs the lower agent
index wins, with a hired expert ranked after all agents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .contest_core import ContestParams, validate_thresholds
from .distributions import CostDistribution
from .equilibrium import EquilibriumResult
from .errors import ParameterError

__all__ = [
    "McConfig",
    "McEstimate",
    "DeviationRow",
    "VerificationReport",
    "estimate_win_prob",
    "estimate_success",
    "estimate_rank_prob",
    "estimate_with_expert",
    "verify_equilibrium",
]

CHUNK = 1 << 16
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class McConfig:
    trials: int = 1_000_000
    seed: int = 0
    horizon: float = 1.0

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be positive")
        if self.horizon <= 0.0:
            raise ParameterError("horizon must be positive")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    trials: int


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _chunks(trials: int) -> Iterator[tuple[int, int]]:
    index = 0
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        yield index, size
        index += 1
        done += size


def _from_count(count: int, trials: int) -> McEstimate:
    mean = count / trials
    if trials > 1:
        var = (count - count * count / trials) / (trials - 1)
        se = math.sqrt(var / trials)
    else:
        se = 0.0
    return McEstimate(mean=mean, std_error=se, trials=trials)


def _arrival_times(v: np.ndarray, found: np.ndarray, q: float, horizon: float) -> np.ndarray:
    scale = horizon / q if q > 0.0 else 0.0
    return np.where(found, v * scale, np.inf)


def estimate_win_prob(
    thresholds: Sequence[float],
    d: CostDistribution,
    q: float,
    agent_index: int,
    cfg: McConfig,
) -> McEstimate:
    """Win frequency of one agent, forced to search, against the profile.

    Forcing the focal agent matches the conditioning of the analytic win
    kernels; the remaining agents search when their drawn cost is at or
    below their threshold.
    """
    ts = np.asarray(thresholds, dtype=float)
    n = ts.size
    if not 0 <= agent_index < n:
        raise ParameterError(f"agent_index {agent_index} out of range for n = {n}")
    validate_thresholds(d, ts)
    wins = 0
    for index, size in _chunks(cfg.trials):
        g = _chunk_rng(cfg.seed, index)
        costs = d.ppf(g.random((size, n)))
        v = g.random((size, n))
        search = costs <= ts
        search[:, agent_index] = True
        found = search & (v < q)
        times = _arrival_times(v, found, q, cfg.horizon)
        winner = times.argmin(axis=1)  # ties resolve to the lowest index
        wins += int((found[:, agent_index] & (winner == agent_index)).sum())
    return _from_count(wins, cfg.trials)


def estimate_success(
    thresholds: Sequence[float],
    d: CostDistribution,
    q: float,
    cfg: McConfig,
    min_finders: int = 1,
) -> McEstimate:
    """Frequency of at least ``min_finders`` agents finding the bug."""
    ts = np.asarray(thresholds, dtype=float)
    validate_thresholds(d, ts)
    if not 1 <= min_finders <= ts.size:
        raise ParameterError(f"min_finders must lie in [1, {ts.size}]")
    hits = 0
    for index, size in _chunks(cfg.trials):
        g = _chunk_rng(cfg.seed, index)
        costs = d.ppf(g.random((size, ts.size)))
        v = g.random((size, ts.size))
        found = (costs <= ts) & (v < q)
        hits += int((found.sum(axis=1) >= min_finders).sum())
    return _from_count(hits, cfg.trials)


def estimate_rank_prob(
    thresholds: Sequence[float],
    d: CostDistribution,
    q: float,
    agent_index: int,
    m: int,
    cfg: McConfig,
) -> McEstimate:
    """Frequency that the forced focal agent is exactly the m-th finder."""
    ts = np.asarray(thresholds, dtype=float)
    n = ts.size
    if not 0 <= agent_index < n:
        raise ParameterError(f"agent_index {agent_index} out of range for n = {n}")
    if not 1 <= m <= n:
        raise ParameterError(f"rank must lie in [1, {n}]")
    validate_thresholds(d, ts)
    ids = np.arange(n)
    hits = 0
    for index, size in _chunks(cfg.trials):
        g = _chunk_rng(cfg.seed, index)
        costs = d.ppf(g.random((size, n)))
        v = g.random((size, n))
        search = costs <= ts
        search[:, agent_index] = True
        found = search & (v < q)
        times = _arrival_times(v, found, q, cfg.horizon)
        mine = times[:, agent_index][:, None]
        earlier = (times < mine) | ((times == mine) & (ids < agent_index))
        earlier[:, agent_index] = False
        rank = 1 + earlier.sum(axis=1)
        hits += int((found[:, agent_index] & (rank == m)).sum())
    return _from_count(hits, cfg.trials)


def estimate_with_expert(
    thresholds: Sequence[float],
    d: CostDistribution,
    q: float,
    q_e: float,
    agent_index: int,
    cfg: McConfig,
) -> McEstimate:
    """Win frequency of the forced focal agent with an expert also searching.

    The expert always participates, finds with probability q_e, and draws
    its arrival from the same uniform clock; on an exact tie the strategic
    agents rank first.
    """
    ts = np.asarray(thresholds, dtype=float)
    n = ts.size
    if not 0 <= agent_index < n:
        raise ParameterError(f"agent_index {agent_index} out of range for n = {n}")
    if not 0.0 <= q_e <= 1.0:
        raise ParameterError(f"expert find probability must lie in [0, 1], got {q_e}")
    validate_thresholds(d, ts)
    wins = 0
    for index, size in _chunks(cfg.trials):
        g = _chunk_rng(cfg.seed, index)
        costs = d.ppf(g.random((size, n)))
        v = g.random((size, n))
        v_e = g.random(size)
        search = costs <= ts
        search[:, agent_index] = True
        found = search & (v < q)
        times = _arrival_times(v, found, q, cfg.horizon)
        expert_times = _arrival_times(v_e, v_e < q_e, q_e, cfg.horizon)
        all_times = np.column_stack([times, expert_times])
        winner = all_times.argmin(axis=1)
        wins += int((found[:, agent_index] & (winner == agent_index)).sum())
    return _from_count(wins, cfg.trials)


@dataclass(frozen=True)
class DeviationRow:
    """Estimated payoff change from deviating to another threshold."""

    threshold: float
    improvement: float
    std_error: float
    profitable: bool


@dataclass(frozen=True)
class VerificationReport:
    """Best-response audit of a threshold profile against simulation.

    ``indifference_gap`` is the simulated search payoff of the marginal
    type; at an equilibrium it vanishes within noise. ``type_violations``
    lists grid types whose search/no-search choice under the profile is
    beaten beyond the tolerance, and ``deviations`` lists whole-threshold
    deviations with their estimated payoff improvements.
    """

    threshold: float
    win_prob: McEstimate
    indifference_gap: float
    tolerance: float
    indifference_ok: bool
    type_violations: tuple[float, ...]
    deviations: tuple[DeviationRow, ...]

    @property
    def ok(self) -> bool:
        return (
            self.indifference_ok
            and not self.type_violations
            and not any(row.profitable for row in self.deviations)
        )


def verify_equilibrium(
    result: EquilibriumResult | float,
    d: CostDistribution,
    p: ContestParams,
    deviation_grid: Sequence[float] | None = None,
    cfg: McConfig = McConfig(),
    z: float = 4.0,
) -> VerificationReport:
    """Audit a symmetric threshold profile for profitable deviations.

    All rivals hold the candidate threshold. The focal agent's win
    probability (forced to search) prices every cost type: types below the
    threshold must not lose by searching and types above must not gain,
    within ``z`` standard errors. Separately, each deviation threshold on
    the grid is priced per trial against the candidate and flagged when its
    estimated improvement exceeds ``z`` standard errors.
    """
    t = result.threshold if isinstance(result, EquilibriumResult) else float(result)
    validate_thresholds(d, [t])
    grid = np.asarray(
        deviation_grid
        if deviation_grid is not None
        else np.linspace(d.support_lo, d.support_hi, 41),
        dtype=float,
    )
    n, q, prize = p.n, p.q, p.prize
    wins = 0
    dev_sum = np.zeros(grid.size)
    dev_sumsq = np.zeros(grid.size)
    for index, size in _chunks(cfg.trials):
        g = _chunk_rng(cfg.seed, index)
        own_cost = d.ppf(g.random(size))
        rival_costs = d.ppf(g.random((size, n - 1))) if n > 1 else np.empty((size, 0))
        v = g.random((size, n))  # column 0 is the focal agent
        rival_found = (rival_costs <= t) & (v[:, 1:] < q)
        rival_times = _arrival_times(v[:, 1:], rival_found, q, cfg.horizon)
        focal_found = v[:, 0] < q
        focal_times = _arrival_times(v[:, 0], focal_found, q, cfg.horizon)
        first = rival_times.min(axis=1) if n > 1 else np.full(size, np.inf)
        focal_wins = focal_found & (focal_times <= first)
        wins += int(focal_wins.sum())
        payoff = prize * focal_wins - own_cost  # payoff if searching
        searches = own_cost[:, None] <= grid[None, :]
        base = own_cost <= t
        delta = (searches ^ base[:, None]) * np.where(base, -1.0, 1.0)[:, None]
        dev = delta * payoff[:, None]
        dev_sum += dev.sum(axis=0)
        dev_sumsq += (dev * dev).sum(axis=0)

    trials = cfg.trials
    win_est = _from_count(wins, trials)
    gap = prize * win_est.mean - t
    tol = z * prize * win_est.std_error
    type_violations = []
    for c in grid:
        value = prize * win_est.mean - c
        if c <= t and value < -tol:
            type_violations.append(float(c))
        elif c > t and value > tol:
            type_violations.append(float(c))
    rows = []
    for j, c in enumerate(grid):
        mean = dev_sum[j] / trials
        var = max(dev_sumsq[j] - dev_sum[j] ** 2 / trials, 0.0) / max(trials - 1, 1)
        se = math.sqrt(var / trials)
        rows.append(
            DeviationRow(
                threshold=float(c),
                improvement=mean,
                std_error=se,
                profitable=mean > z * se,
            )
        )
    return VerificationReport(
        threshold=t,
        win_prob=win_est,
        indifference_gap=gap,
        tolerance=tol,
        indifference_ok=abs(gap) <= tol,
        type_violations=tuple(type_violations),
        deviations=tuple(rows),
    )
