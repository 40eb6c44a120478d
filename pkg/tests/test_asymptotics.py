"""Large-pool limits: mass solver, consistency sweeps, rates, tail monotonicity."""

import math

import numpy as np
import pytest

from bountylab import (
    ContestParams,
    NoLimitError,
    ParameterError,
    PiecewiseLinearCdf,
    Power,
    ShiftedPower,
    Uniform,
    convergence_rate,
    inverse_elasticity_floor,
    limit_consistency,
    solve_kappa,
    solve_kappa_with_bug,
    solve_threshold,
    tail_monotonicity_n,
)

UNIT = Uniform(0.0, 1.0)
SHIFTED = Uniform(0.25, 1.25)


# --- limiting mass ----------------------------------------------------------------


def test_kappa_pinned_values():
    res = solve_kappa(0.25, 0.5, 1.0)
    assert abs(res.kappa - 3.188) < 1e-3
    assert abs(res.limit_success - 0.797) < 1e-3
    assert res.residual < 1e-12
    bug = solve_kappa_with_bug(0.25, 0.5, 1.0, q_a=0.05, v_a=1.0)
    assert abs(bug.kappa - 4.313) < 1e-3


def test_kappa_divergent_at_zero_cost():
    res = solve_kappa(0.0, 0.5, 1.0)
    assert res.divergent
    assert res.limit_success == 1.0


def test_kappa_no_solution_when_participation_vanishes():
    with pytest.raises(NoLimitError):
        solve_kappa(0.6, 0.5, 1.0)  # c_lo >= q V
    with pytest.raises(NoLimitError):
        solve_kappa_with_bug(0.7, 0.5, 1.0, q_a=0.1, v_a=1.0)


def test_kappa_with_zero_bug_matches_plain():
    a = solve_kappa(0.3, 0.5, 1.0)
    b = solve_kappa_with_bug(0.3, 0.5, 1.0, q_a=0.4, v_a=0.0)
    assert abs(a.kappa - b.kappa) < 1e-10


def test_kappa_with_matching_bug_merges_prizes():
    a = solve_kappa(0.3, 0.5, 2.0)
    b = solve_kappa_with_bug(0.3, 0.5, 1.0, q_a=0.5, v_a=1.0)
    assert abs(a.kappa - b.kappa) < 1e-10


def test_kappa_monotone_in_prize_skill_and_bug():
    base = solve_kappa(0.25, 0.5, 1.0).kappa
    assert solve_kappa(0.25, 0.5, 1.3).kappa > base
    assert solve_kappa(0.25, 0.7, 1.0).kappa > base
    grew = base
    for v_a in (0.2, 0.5, 1.0):
        k = solve_kappa_with_bug(0.25, 0.5, 1.0, q_a=0.05, v_a=v_a).kappa
        assert k > grew
        grew = k
    grew = base
    for q_a in (0.02, 0.05, 0.2):
        k = solve_kappa_with_bug(0.25, 0.5, 1.0, q_a=q_a, v_a=1.0).kappa
        assert k > grew
        grew = k


def test_kappa_rejects_zero_cost_with_bug():
    with pytest.raises(ParameterError):
        solve_kappa_with_bug(0.0, 0.5, 1.0, q_a=0.1, v_a=1.0)


# --- finite-n consistency -----------------------------------------------------------


def test_limit_consistency_shifted_uniform():
    report = limit_consistency(SHIFTED, 1.0, 0.5, 2000)
    n, c_n, p_n, mass = report.rows[-1]
    assert n == 2000
    assert abs(c_n - 0.2516) < 1e-3
    assert abs(p_n - 0.7936) < 1e-3
    assert report.threshold_gap < 2e-3
    assert report.mass_gap is not None
    assert report.success_gap < 4e-3


def test_limit_consistency_unit_uniform_diverges():
    report = limit_consistency(UNIT, 1.0, 0.5, 2000)
    assert report.kappa.divergent
    assert report.mass_gap is None
    assert abs(report.rows[-1][1] - 0.0224) < 1e-3
    assert report.rows[-1][2] > 0.999


def test_searcher_mass_bounded_by_prize_over_lowest_cost():
    for d in (SHIFTED, ShiftedPower(2.0, 0.3, 1.5)):
        for n in (10, 100, 2000):
            res = solve_threshold(d, ContestParams(1.0, 0.5, n))
            assert n * float(d.cdf(res.threshold)) <= 1.0 / d.support_lo + 1e-9


def test_mass_converges_for_five_distributions():
    dists = [
        SHIFTED,
        Uniform(0.5, 1.5),
        ShiftedPower(2.0, 0.3, 1.3),
        ShiftedPower(3.0, 0.2, 1.0),
        PiecewiseLinearCdf([("1/4", "0"), ("1/2", "3/5"), ("5/4", "1")]),
    ]
    for d in dists:
        kres = solve_kappa(d.support_lo, 0.5, 1.0)
        res = solve_threshold(d, ContestParams(1.0, 0.5, 10**5))
        mass = 10**5 * float(d.cdf(res.threshold))
        assert abs(mass - kres.kappa) < 0.05


def test_crowding_discount_tends_to_one():
    # the left side of the success-direction condition approaches 1
    res = solve_threshold(SHIFTED, ContestParams(1.0, 0.5, 10**5))
    x = 0.5 * float(SHIFTED.cdf(res.threshold))
    lhs = (1.0 - x) * math.log1p(-x) / (-x)
    assert abs(lhs - 1.0) < 0.01


# --- convergence rates ---------------------------------------------------------------


def _geom_grid(lo, hi, points):
    return sorted({int(round(v)) for v in np.geomspace(lo, hi, points)})


def test_rates_unit_uniform():
    report = convergence_rate(UNIT, 1.0, 0.5, _geom_grid(100, 100_000, 10))
    assert report.slope_threshold is not None
    assert abs(report.slope_threshold - (-0.5)) < 0.1
    assert abs(report.slope_cost_mass - (-1.0)) < 0.1
    assert report.slope_tail_mass is None


def test_rates_shifted_uniform():
    report = convergence_rate(SHIFTED, 1.0, 0.5, _geom_grid(100, 100_000, 10))
    assert report.slope_threshold_excess is not None
    assert abs(report.slope_threshold_excess - (-1.0)) < 0.1
    assert abs(report.slope_tail_mass - (-1.0)) < 0.1
    assert abs(report.slope_cost_mass - (-1.0)) < 0.1


def test_rates_power_alpha():
    # threshold falls like n**(-1/(1+alpha)) on a zero-based power CDF
    for alpha in (2.0, 3.0):
        report = convergence_rate(Power(alpha), 1.0, 0.5, _geom_grid(100, 100_000, 10))
        assert abs(report.slope_threshold - (-1.0 / (1.0 + alpha))) < 0.1


def test_rates_need_enough_points():
    with pytest.raises(ParameterError):
        convergence_rate(UNIT, 1.0, 0.5, [10, 100, 1000])


# --- tail monotonicity ----------------------------------------------------------------


def test_tail_monotonicity_power20():
    assert tail_monotonicity_n(Power(20.0), 1.0, 1.0, 40) == 4


def test_tail_monotonicity_high_prize_uniform():
    assert tail_monotonicity_n(UNIT, 1.999, 1.0, 40) == 4


def test_tail_monotonicity_already_increasing():
    assert tail_monotonicity_n(UNIT, 1.0, 0.5, 30) == 2


def test_tail_monotonicity_unresolved_returns_none():
    # scan too short to see the turn: success still falling at n_max
    assert tail_monotonicity_n(Power(20.0), 1.0, 1.0, 4) is None


def test_inverse_elasticity_floor_estimates():
    assert abs(inverse_elasticity_floor(Power(20.0)) - 0.05) < 1e-9
    assert inverse_elasticity_floor(UNIT) == pytest.approx(1.0, abs=1e-9)
    # shifted uniform: F/(c f) -> 0 at the lower support
    assert inverse_elasticity_floor(SHIFTED) < 1e-6
