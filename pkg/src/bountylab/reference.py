"""Checked-in reference values and their recomputation.

The published study behind this model prints equilibrium tables and worked
design examples to four decimals. This module stores those numbers as the
golden expectations and recomputes every one of them from the library, so
``bountylab reproduce-paper`` can diff the two sets. Table values carry a
1e-3 tolerance (they were rounded to four decimals at the source); values
with exact closed forms are held to 1e-9 and the equilibrium-continuum
endpoints to 1e-6.
"""

from __future__ import annotations

from dataclasses import dataclass

from .asymptotics import solve_kappa, solve_kappa_with_bug
from .contest_core import ContestParams
from .designer import (
    DesignerParams,
    eval_bug_design,
    eval_bug_design_asymptotic,
    multiprize_utility,
)
from .distributions import PiecewiseLinearCdf, Power, Uniform
from .equilibrium import (
    PrizeVector,
    critical_expertise,
    hetero_best_response_n2,
    solve_asymmetric_n2,
    sweep_n,
)

__all__ = [
    "ReferenceRow",
    "continuum_example_distribution",
    "POWER20_TABLE",
    "HIGH_PRIZE_TABLE",
    "UNIFORM01_TABLE",
    "SHIFTED_UNIFORM_TABLE",
    "compute_reference_rows",
]

# Published threshold/success tables: n -> (c_star, p_star), 4-decimal values.
POWER20_TABLE = {
    2: (0.9151, 0.3106),
    3: (0.8951, 0.2924),
    4: (0.8828, 0.2917),
    5: (0.8739, 0.2948),
    6: (0.8669, 0.2989),
}
HIGH_PRIZE_TABLE = {
    2: (0.9998, 0.9999),
    3: (0.8136, 0.9935),
    4: (0.7042, 0.9923),
    5: (0.6301, 0.9931),
    6: (0.5755, 0.9941),
}
UNIFORM01_TABLE = {
    10: (0.2787, 0.7771),
    100: (0.0997, 0.9939),
    1000: (0.0316, 0.9999),
    2000: (0.0224, 0.9999),
}
SHIFTED_UNIFORM_TABLE = {
    10: (0.3780, 0.4839),
    100: (0.2767, 0.7395),
    1000: (0.2531, 0.7904),
    2000: (0.2516, 0.7936),
}

TABLE_TOL = 1e-3
EXACT_TOL = 1e-9
CONTINUUM_TOL = 1e-6


def continuum_example_distribution() -> PiecewiseLinearCdf:
    """The piecewise-linear CDF whose two-agent game has a line of equilibria."""
    return PiecewiseLinearCdf([("0", "0"), ("3/7", "2/5"), ("4/7", "4/5"), ("1", "1")])


@dataclass(frozen=True)
class ReferenceRow:
    name: str
    expected: float
    computed: float
    tolerance: float

    @property
    def abs_diff(self) -> float:
        return abs(self.expected - self.computed)

    @property
    def ok(self) -> bool:
        return self.abs_diff <= self.tolerance


def _sweep_rows(
    name: str, d, prize: float, q: float, table: dict[int, tuple[float, float]]
) -> list[ReferenceRow]:
    rows = []
    for entry in sweep_n(d, prize, q, sorted(table)):
        exp_c, exp_p = table[entry.n]
        got_c = entry.result.threshold if entry.result else float("nan")
        got_p = entry.result.success if entry.result else float("nan")
        rows.append(ReferenceRow(f"{name}.c_star[n={entry.n}]", exp_c, got_c, TABLE_TOL))
        rows.append(ReferenceRow(f"{name}.p_star[n={entry.n}]", exp_p, got_p, TABLE_TOL))
    return rows


def compute_reference_rows() -> list[ReferenceRow]:
    """Recompute every golden value and pair it with its expectation."""
    rows: list[ReferenceRow] = []

    rows += _sweep_rows("power20_v1_q1", Power(20.0), 1.0, 1.0, POWER20_TABLE)
    rows += _sweep_rows("uniform01_v1.999_q1", Uniform(0.0, 1.0), 1.999, 1.0, HIGH_PRIZE_TABLE)
    rows += _sweep_rows("uniform01_v1_qhalf", Uniform(0.0, 1.0), 1.0, 0.5, UNIFORM01_TABLE)
    rows += _sweep_rows(
        "uniform_shifted_v1_qhalf", Uniform(0.25, 1.25), 1.0, 0.5, SHIFTED_UNIFORM_TABLE
    )

    # limiting searcher mass and success for the shifted uniform instance
    kres = solve_kappa(0.25, 0.5, 1.0)
    rows.append(ReferenceRow("limit_mass.kappa", 3.188, kres.kappa, TABLE_TOL))
    rows.append(ReferenceRow("limit_mass.success", 0.797, kres.limit_success, TABLE_TOL))
    kres_bug = solve_kappa_with_bug(0.25, 0.5, 1.0, q_a=0.05, v_a=1.0)
    rows.append(ReferenceRow("limit_mass_planted.kappa", 4.313, kres_bug.kappa, TABLE_TOL))

    # planted-bug designer, finite pool: uniform costs, W=4, V=1, q=0.5, n=2
    dp = DesignerParams(fix_value=4.0, contest=ContestParams(1.0, 0.5, 2))
    d01 = Uniform(0.0, 1.0)
    base = eval_bug_design(d01, dp, v_a=0.0, q_a=0.0)
    rows.append(ReferenceRow("planted_finite.base_threshold", 4.0 / 9.0, base.threshold, EXACT_TOL))
    rows.append(ReferenceRow("planted_finite.base_payoff", 96.0 / 81.0, base.objective, EXACT_TOL))
    planted = eval_bug_design(d01, dp, v_a=1.0, q_a=0.3)
    rows.append(ReferenceRow("planted_finite.threshold", 0.684, planted.threshold, TABLE_TOL))
    rows.append(ReferenceRow("planted_finite.payoff", 1.333, planted.objective, TABLE_TOL))

    # planted-bug designer in the unbounded-pool limit
    base_limit = eval_bug_design_asymptotic(0.25, dp, v_a=0.0, q_a=0.0)
    rows.append(ReferenceRow("planted_limit.base_payoff", 2.390, base_limit.objective, TABLE_TOL))
    planted_limit = eval_bug_design_asymptotic(0.25, dp, v_a=1.0, q_a=0.05)
    rows.append(ReferenceRow("planted_limit.payoff", 2.459, planted_limit.objective, TABLE_TOL))

    # two-prize split example: W=2, V=1, q=1, uniform costs
    dp2 = DesignerParams(fix_value=2.0, contest=ContestParams(1.0, 1.0, 2))
    wta = multiprize_utility(d01, dp2, PrizeVector((1.0, 0.0)))
    rows.append(ReferenceRow("two_prize.wta_threshold", 2.0 / 3.0, wta.threshold, EXACT_TOL))
    rows.append(ReferenceRow("two_prize.wta_utility", 8.0 / 9.0, wta.objective, EXACT_TOL))
    split = multiprize_utility(d01, dp2, PrizeVector((0.75, 0.25)))
    rows.append(ReferenceRow("two_prize.split_threshold", 3.0 / 5.0, split.threshold, EXACT_TOL))
    rows.append(ReferenceRow("two_prize.split_utility", 24.0 / 25.0, split.objective, EXACT_TOL))

    # two-agent equilibrium continuum on the piecewise CDF, q=1, V=5/7
    cont = continuum_example_distribution()
    pair = hetero_best_response_n2("costs", q=1.0, prize=5.0 / 7.0, dists=(cont, cont))
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, scan_points=2001)
    if len(eqs.intervals) == 1:
        seg = eqs.intervals[0]
        rows.append(ReferenceRow("continuum.c1_lo", 3.0 / 7.0, seg.c1_lo, CONTINUUM_TOL))
        rows.append(ReferenceRow("continuum.c1_hi", 4.0 / 7.0, seg.c1_hi, CONTINUUM_TOL))
        rows.append(ReferenceRow("continuum.c2_at_lo", 4.0 / 7.0, seg.c2_at_lo, CONTINUUM_TOL))
        rows.append(ReferenceRow("continuum.c2_at_hi", 3.0 / 7.0, seg.c2_at_hi, CONTINUUM_TOL))
        midpoint = 1.0 if seg.contains(0.5) else 0.0
        rows.append(ReferenceRow("continuum.contains_symmetric_point", 1.0, midpoint, 0.0))
    else:
        rows.append(ReferenceRow("continuum.interval_count", 1.0, float(len(eqs.intervals)), 0.0))

    # expert skill equivalent to one extra agent, high-prize uniform instance
    q_hat = critical_expertise(d01, ContestParams(1.999, 1.0, 3))
    rows.append(ReferenceRow("critical_expertise.uniform_n3", 0.7042, q_hat, TABLE_TOL))

    return rows
