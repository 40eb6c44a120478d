"""Independent brute-force oracles used across the test modules.

Everything here evaluates the defining sums directly, term by term, so the
closed forms and solver outputs in the package are checked against code
that shares none of their algebra.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product


def brute_binom_sum(n: int, x: float, y: float, weight) -> float:
    """sum_k C(n,k) x^k y^(n-k) * weight(k), in exact rational arithmetic.

    ``weight(k)`` must return a Fraction-compatible value. The float inputs
    are taken as exact binary rationals, so the only rounding is the final
    conversion to float.
    """
    xf, yf = Fraction(x), Fraction(y)
    total = sum(
        math.comb(n, k) * xf**k * yf ** (n - k) * Fraction(weight(k))
        for k in range(n + 1)
    )
    return float(total)


def binom_term_scale(n: int, x: float, y: float, weight) -> float:
    """sum of absolute term magnitudes; the conditioning scale of the sum."""
    return math.fsum(
        math.comb(n, k) * abs(x) ** k * abs(y) ** (n - k) * float(weight(k))
        for k in range(n + 1)
    )


def brute_p_win(q: float, s_other: int) -> float:
    """Equal-split win probability via the defining binomial average."""
    return q * math.fsum(
        math.comb(s_other, t) * q**t * (1.0 - q) ** (s_other - t) / (t + 1)
        for t in range(s_other + 1)
    )


def brute_p_win_rank(q: float, s_other: int, m: int) -> float:
    if m - 1 > s_other:
        return 0.0
    return q * math.fsum(
        math.comb(s_other, t) * q**t * (1.0 - q) ** (s_other - t) / (t + 1)
        for t in range(m - 1, s_other + 1)
    )


def brute_psi(fs: list[float], q: float) -> float:
    """Win probability against rivals searching w.p. fs, by subset enumeration."""
    total = 0.0
    for searching in product([0, 1], repeat=len(fs)):
        weight = 1.0
        for f, s in zip(fs, searching):
            weight *= f if s else (1.0 - f)
        total += weight * brute_p_win(q, sum(searching))
    return total


def brute_phi_rank(big_f: float, q: float, n: int, m: int) -> float:
    """Rank-m win kernel against n-1 same-threshold rivals, by enumeration."""
    total = 0.0
    for k in range(n):
        weight = math.comb(n - 1, k) * big_f**k * (1.0 - big_f) ** (n - 1 - k)
        total += weight * brute_p_win_rank(q, k, m)
    return total


def brute_p_at_least_m(big_f: float, q: float, n: int, m: int) -> float:
    """P(at least m finders) by enumerating searcher and finder counts."""
    total = 0.0
    for k in range(n + 1):
        w_search = math.comb(n, k) * big_f**k * (1.0 - big_f) ** (n - k)
        for t in range(m, k + 1):
            total += w_search * math.comb(k, t) * q**t * (1.0 - q) ** (k - t)
    return total
