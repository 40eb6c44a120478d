"""Closed-form probability kernels of the bug bounty contest.

A searcher finds the bug with probability q and, among the finders, wins
with equal probability (arrival times are iid uniform, so each finder is
equally likely to be first). Everything here reduces to weighted binomial
sums; the closed forms rest on three generalized binomial identities
(``binom_sum_1`` .. ``binom_sum_3``) that the test suite checks against
direct summation.

All functions are pure and operate on scalars; the Monte Carlo oracle in
:mod:`bountylab.mc_oracle` re-estimates each one by simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .distributions import CostDistribution
from .errors import ParameterError, SizeLimitError

__all__ = [
    "ContestParams",
    "validate_thresholds",
    "binom_sum_1",
    "binom_sum_2",
    "binom_sum_3",
    "p_win",
    "p_win_rank",
    "phi",
    "psi",
    "phi_expert",
    "phi_rank",
    "success_prob",
    "p_at_least_m",
]

# Exact subset-style evaluation of the win kernel is capped here; larger
# heterogeneous profiles have no closed form in scope.
MAX_HETEROGENEOUS_AGENTS = 20


@dataclass(frozen=True)
class ContestParams:
    """Contest primitives: prize money, per-agent find probability, pool size.

    n = 1 is accepted so sweep helpers can probe degenerate pools; the game
    itself is only interesting from n = 2.
    """

    prize: float
    q: float
    n: int

    def __post_init__(self):
        if not self.prize > 0.0:
            raise ParameterError(f"prize must be positive, got {self.prize}")
        if not 0.0 < self.q <= 1.0:
            raise ParameterError(f"find probability must lie in (0, 1], got {self.q}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ParameterError(f"agent count must be an integer >= 1, got {self.n}")


def validate_thresholds(d: CostDistribution, thresholds: Sequence[float]) -> None:
    """Reject threshold vectors with entries outside the cost support."""
    lo, hi = d.support_lo, d.support_hi
    for c in thresholds:
        if not (lo - 1e-12 <= c <= hi + 1e-12):
            raise ParameterError(f"threshold {c} outside support [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# Generalized binomial identities
# ---------------------------------------------------------------------------


def binom_sum_1(n: int, x: float, y: float) -> float:
    """sum_k C(n,k) x^k y^(n-k) / (k+1) in closed form.

    Equals ((x+y)^(n+1) - y^(n+1)) / ((n+1) x); the x = 0 limit is y^n.
    """
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if x == 0.0:
        return y**n
    return ((x + y) ** (n + 1) - y ** (n + 1)) / ((n + 1) * x)


def binom_sum_2(n: int, x: float, y: float) -> float:
    """sum_k C(n,k) x^k y^(n-k) / ((k+1)(k+2)); the x = 0 limit is y^n / 2."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if x == 0.0:
        return 0.5 * y**n
    num = (x + y) ** (n + 2) - ((n + 2) * x + y) * y ** (n + 1)
    return num / ((n + 1) * (n + 2) * x * x)


def binom_sum_3(n: int, x: float, y: float) -> float:
    """sum_k C(n,k) x^k y^(n-k) / (k+2); the x = 0 limit is y^n / 2."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if x == 0.0:
        return 0.5 * y**n
    num = ((n + 1) * x - y) * (x + y) ** (n + 1) + y ** (n + 2)
    return num / ((n + 1) * (n + 2) * x * x)


# ---------------------------------------------------------------------------
# Winning probabilities for a fixed number of rival searchers
# ---------------------------------------------------------------------------


def _one_minus_pow(x: float, n: float) -> float:
    """1 - (1 - x)^n for x in [0, 1], stable for tiny x and huge n."""
    if x >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-x))


def p_win(q: float, s_other: int) -> float:
    """Probability a searcher is first to find, with s_other rival searchers.

    Averaging the equal split over the binomial number of rival finders
    collapses to (1 - (1-q)^(s+1)) / (s+1).
    """
    if s_other < 0:
        raise ParameterError("rival searcher count must be nonnegative")
    return _one_minus_pow(q, s_other + 1) / (s_other + 1)


def p_win_rank(q: float, s_other: int, m: int) -> float:
    """Probability a searcher is the m-th finder, with s_other rival searchers.

    Zero when fewer than m - 1 rivals search; otherwise the binomial tail
    q * sum_{t >= m-1} C(s,t) q^t (1-q)^(s-t) / (t+1).
    """
    if m < 1:
        raise ParameterError("rank must be at least 1")
    if s_other < 0:
        raise ParameterError("rival searcher count must be nonnegative")
    if m - 1 > s_other:
        return 0.0
    total = 0.0
    for t in range(m - 1, s_other + 1):
        total += math.comb(s_other, t) * q**t * (1.0 - q) ** (s_other - t) / (t + 1)
    return q * total


# ---------------------------------------------------------------------------
# Threshold-strategy kernels
# ---------------------------------------------------------------------------


def _phi_raw(big_f: float, q: float, n: int) -> float:
    # series expansion below the removable singularity at F = 0
    if big_f < 1e-12:
        return q * (1.0 - 0.5 * (n - 1) * q * big_f)
    return _one_minus_pow(q * big_f, n) / (n * big_f)


def _success_raw(big_f: float, q: float, n: int) -> float:
    return _one_minus_pow(q * big_f, n)


def phi(d: CostDistribution, c: float, p: ContestParams) -> float:
    """Win probability of a searcher when every rival uses threshold c.

    Equivalently: the success probability divided by the expected number of
    searchers, (1 - (1 - q F(c))^n) / (n F(c)), extended by its limit q at
    the bottom of the support.
    """
    return _phi_raw(float(d.cdf(c)), p.q, p.n)


def success_prob(d: CostDistribution, c: float, p: ContestParams) -> float:
    """Probability at least one of n threshold-c agents finds the bug."""
    return _success_raw(float(d.cdf(c)), p.q, p.n)


def psi(d: CostDistribution, others: Sequence[float], q: float) -> float:
    """Win probability of a searcher facing rivals with thresholds ``others``.

    The sum over rival subsets factors through the distribution of the
    rival searcher count, so it is evaluated exactly by convolving the
    per-rival search probabilities F(c_j) and averaging ``p_win``. Profiles
    longer than MAX_HETEROGENEOUS_AGENTS are only supported when all
    thresholds coincide, in which case the diagonal kernel ``phi`` applies.
    """
    if not 0.0 < q <= 1.0:
        raise ParameterError(f"find probability must lie in (0, 1], got {q}")
    validate_thresholds(d, others)
    fs = [float(d.cdf(c)) for c in others]
    if len(fs) > MAX_HETEROGENEOUS_AGENTS:
        if fs and max(fs) - min(fs) > 0.0:
            raise SizeLimitError(
                f"exact heterogeneous evaluation capped at {MAX_HETEROGENEOUS_AGENTS} rivals"
            )
        return _phi_raw(fs[0] if fs else 0.0, q, len(fs) + 1)
    # pmf of the number of searching rivals
    pmf = [1.0]
    for f in fs:
        nxt = [0.0] * (len(pmf) + 1)
        for k, w in enumerate(pmf):
            nxt[k] += w * (1.0 - f)
            nxt[k + 1] += w * f
        pmf = nxt
    return sum(w * p_win(q, k) for k, w in enumerate(pmf))


def phi_expert(d: CostDistribution, c: float, p: ContestParams, q_e: float) -> float:
    """Win probability against same-threshold rivals plus an expert.

    The expert always searches, finds with probability q_e, and shares the
    equal-split reward; the correction to ``phi`` below is the expected
    chance the expert claims the prize instead.
    """
    if not 0.0 <= q_e <= 1.0:
        raise ParameterError(f"expert find probability must lie in [0, 1], got {q_e}")
    big_f, q, n = float(d.cdf(c)), p.q, p.n
    x = q * big_f
    if big_f < 1e-6:
        # second-order series of both terms; removable singularity at F = 0
        base = q * (1.0 - (n - 1) * x / 2.0 + (n - 1) * (n - 2) * x * x / 6.0)
        corr = q * (0.5 - (n - 1) * x / 3.0 + (n - 1) * (n - 2) * x * x / 8.0)
        return base - q_e * corr
    if x >= 1.0:
        num = 1.0
    else:
        num = -math.expm1(n * math.log1p(-x) + math.log1p(n * x))
    return _phi_raw(big_f, q, n) - q_e * num / (n * (n + 1) * q * big_f * big_f)


def phi_rank(d: CostDistribution, c: float, p: ContestParams, m: int) -> float:
    """Probability a searcher is the m-th finder, rivals all at threshold c."""
    if not 1 <= m <= p.n:
        raise ParameterError(f"rank must lie in [1, {p.n}], got {m}")
    big_f, q, n = float(d.cdf(c)), p.q, p.n
    total = 0.0
    for k in range(m - 1, n):
        weight = math.comb(n - 1, k) * big_f**k * (1.0 - big_f) ** (n - 1 - k)
        if weight:
            total += weight * p_win_rank(q, k, m)
    return total


def p_at_least_m(d: CostDistribution, c: float, p: ContestParams, m: int) -> float:
    """Probability that at least m of n threshold-c agents find the bug."""
    if not 1 <= m <= p.n:
        raise ParameterError(f"rank must lie in [1, {p.n}], got {m}")
    big_f, q, n = float(d.cdf(c)), p.q, p.n
    total = 0.0
    for k in range(m, n + 1):
        weight = math.comb(n, k) * big_f**k * (1.0 - big_f) ** (n - k)
        if not weight:
            continue
        inner = 0.0
        for t in range(m, k + 1):
            inner += math.comb(k, t) * q**t * (1.0 - q) ** (k - t)
        total += weight * inner
    return total
