"""Fixed-point solvers: pinned equilibria, comparative statics, asymmetric games."""

import math

import numpy as np
import pytest

from bountylab import (
    ContestParams,
    NonInteriorError,
    ParameterError,
    PiecewiseLinearCdf,
    Power,
    PrizeVector,
    ShiftedPower,
    Uniform,
    check_interiority,
    critical_expertise,
    dpdn_sign,
    hetero_best_response_n2,
    phi,
    phi_rank,
    solve_artificial,
    solve_asymmetric_n2,
    solve_expert,
    solve_multibug,
    solve_multiprize,
    solve_threshold,
    sweep_n,
)
from bountylab.reference import (
    HIGH_PRIZE_TABLE,
    POWER20_TABLE,
    SHIFTED_UNIFORM_TABLE,
    UNIFORM01_TABLE,
    continuum_example_distribution,
)

UNIT = Uniform(0.0, 1.0)


# --- interiority ---------------------------------------------------------------


def test_check_interiority_examples():
    assert check_interiority(UNIT, ContestParams(1.0, 0.5, 10)) == (True, True)
    # reward at the top support exactly equals the highest cost: strict check fails
    assert check_interiority(UNIT, ContestParams(1.0, 1.0, 1)) == (True, False)
    assert check_interiority(Uniform(0.25, 1.25), ContestParams(1.0, 0.5, 4)) == (True, True)


def test_solve_threshold_raises_with_diagnostics():
    with pytest.raises(NonInteriorError) as info:
        solve_threshold(Uniform(0.6, 1.0), ContestParams(1.0, 0.5, 3))
    assert info.value.lower_ok is False
    assert info.value.upper_ok is True


# --- baseline solver -----------------------------------------------------------


def test_solve_threshold_uniform_closed_form():
    res = solve_threshold(UNIT, ContestParams(1.0, 1.0, 2))
    assert res.threshold == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert res.success == pytest.approx(8.0 / 9.0, abs=1e-12)
    assert res.interior


@pytest.mark.parametrize(
    "d,prize,q,table",
    [
        (Power(20.0), 1.0, 1.0, POWER20_TABLE),
        (UNIT, 1.999, 1.0, HIGH_PRIZE_TABLE),
        (UNIT, 1.0, 0.5, UNIFORM01_TABLE),
        (Uniform(0.25, 1.25), 1.0, 0.5, SHIFTED_UNIFORM_TABLE),
    ],
    ids=["power20", "high_prize", "uniform01", "shifted"],
)
def test_published_tables(d, prize, q, table):
    for entry in sweep_n(d, prize, q, sorted(table)):
        exp_c, exp_p = table[entry.n]
        assert entry.result is not None
        assert abs(entry.result.threshold - exp_c) < 1e-3
        assert abs(entry.result.success - exp_p) < 1e-3


def test_residual_invariant():
    cases = [
        (Power(20.0), ContestParams(1.0, 1.0, 4)),
        (UNIT, ContestParams(1.999, 1.0, 3)),
        (Uniform(0.25, 1.25), ContestParams(1.0, 0.5, 1000)),
        (ShiftedPower(2.0, 0.3, 1.5), ContestParams(1.0, 0.7, 12)),
    ]
    for d, p in cases:
        res = solve_threshold(d, p)
        assert res.residual < 1e-10 * max(1.0, p.prize)
        assert d.support_lo < res.threshold < d.support_hi


def test_unique_sign_change_on_dense_grid():
    cases = [
        (Power(20.0), ContestParams(1.0, 1.0, 4)),
        (UNIT, ContestParams(1.999, 1.0, 5)),
        (continuum_example_distribution(), ContestParams(5.0 / 7.0, 1.0, 2)),
    ]
    for d, p in cases:
        grid = np.linspace(d.support_lo, d.support_hi, 10_000)
        g = np.array([p.prize * phi(d, c, p) - c for c in grid])
        changes = int(np.sum(np.sign(g[:-1]) != np.sign(g[1:])))
        assert changes == 1


def test_sweep_thresholds_strictly_decreasing():
    entries = sweep_n(Power(3.0), 1.0, 0.8, list(range(2, 15)))
    cs = [e.result.threshold for e in entries]
    assert all(a > b for a, b in zip(cs, cs[1:]))


def test_sweep_collects_per_entry_errors():
    entries = sweep_n(Uniform(0.6, 1.0), 1.0, 0.5, [2, 3])
    assert all(e.result is None and e.error for e in entries)


def test_comparative_statics_randomized():
    rng = np.random.default_rng(99)
    d = Power(2.0)
    for _ in range(15):
        q = float(rng.uniform(0.2, 1.0))
        n = int(rng.integers(2, 10))
        prize = float(rng.uniform(0.3, 1.4))
        base = solve_threshold(d, ContestParams(prize, q, n))
        up_v = solve_threshold(d, ContestParams(prize * 1.2, q, n))
        assert up_v.threshold > base.threshold
        assert up_v.success > base.success
        if q <= 0.83:
            up_q = solve_threshold(d, ContestParams(prize, q * 1.2, n))
            assert up_q.threshold > base.threshold
            assert up_q.success > base.success
        more_n = solve_threshold(d, ContestParams(prize, q, n + 1))
        assert more_n.threshold < base.threshold


# --- success-direction diagnostic ----------------------------------------------


def test_dpdn_sign_power20():
    d = Power(20.0)
    signs = {}
    for n in (3, 5):
        p = ContestParams(1.0, 1.0, n)
        signs[n] = dpdn_sign(d, solve_threshold(d, p), p)
    assert signs[3] == -1  # success still falling past n = 3
    assert signs[5] == +1  # and rising past n = 5


def test_dpdn_sign_uniform_finite_difference():
    d = UNIT
    p = ContestParams(1.0, 0.5, 10)
    res = solve_threshold(d, p)
    assert dpdn_sign(d, res, p) == +1
    nxt = solve_threshold(d, ContestParams(1.0, 0.5, 11))
    assert nxt.success > res.success


# --- expert --------------------------------------------------------------------


def test_expert_limit_recovers_baseline():
    p = ContestParams(1.0, 1.0, 3)
    d = Power(20.0)
    base = solve_threshold(d, p)
    tiny = solve_expert(d, p, 1e-9)
    assert abs(tiny.threshold - base.threshold) < 1e-6


def test_expert_crowds_out():
    p = ContestParams(1.0, 1.0, 3)
    d = Power(20.0)
    base = solve_threshold(d, p)
    bigger = solve_threshold(d, ContestParams(1.0, 1.0, 4))
    for q_e in (0.05, 0.3, 1.0):
        assert solve_expert(d, p, q_e).threshold < base.threshold
    # a full-strength expert displaces more than one extra strategic agent
    assert solve_expert(d, p, p.q).threshold < bigger.threshold


def test_critical_expertise_reproduces_bigger_pool():
    for d, prize in ((Power(20.0), 1.0), (UNIT, 1.999)):
        p = ContestParams(prize, 1.0, 2)
        q_hat = critical_expertise(d, p)
        assert 0.0 < q_hat < p.q
        target = solve_threshold(d, ContestParams(prize, 1.0, 3)).threshold
        assert abs(solve_expert(d, p, q_hat).threshold - target) < 1e-9
        # pinned form: the crowd skill times the bigger pool's participation mass
        assert q_hat == pytest.approx(float(d.cdf(target)), abs=1e-12)


# --- planted bug ---------------------------------------------------------------


def test_artificial_baseline_and_planted_values():
    p = ContestParams(1.0, 0.5, 2)
    base = solve_artificial(UNIT, p, 0.0, 0.0)
    assert base.threshold == pytest.approx(4.0 / 9.0, abs=1e-12)
    planted = solve_artificial(UNIT, p, 1.0, 0.3)
    assert abs(planted.threshold - 0.684) < 1e-3
    # hand algebra: c = 0.8 - 0.17 c
    assert planted.threshold == pytest.approx(0.8 / 1.17, abs=1e-12)


def test_artificial_with_matching_skill_merges_prizes():
    p = ContestParams(1.0, 0.5, 3)
    merged = solve_artificial(UNIT, p, 0.7, 0.5)
    direct = solve_threshold(UNIT, ContestParams(1.7, 0.5, 3))
    assert abs(merged.threshold - direct.threshold) < 1e-12


def test_artificial_rejects_bad_parameters():
    p = ContestParams(1.0, 0.5, 2)
    with pytest.raises(ParameterError):
        solve_artificial(UNIT, p, -0.1, 0.5)
    with pytest.raises(ParameterError):
        solve_artificial(UNIT, p, 0.5, 1.5)


# --- ranked prizes ---------------------------------------------------------------


def test_multiprize_two_agent_pinned():
    p = ContestParams(1.0, 1.0, 2)
    assert solve_multiprize(UNIT, p, PrizeVector((1.0, 0.0))).threshold == pytest.approx(
        2.0 / 3.0, abs=1e-12
    )
    assert solve_multiprize(UNIT, p, PrizeVector((0.75, 0.25))).threshold == pytest.approx(
        3.0 / 5.0, abs=1e-12
    )
    assert solve_multiprize(UNIT, p, PrizeVector((0.5, 0.5))).threshold == pytest.approx(
        0.5, abs=1e-12
    )


def test_multiprize_matches_winner_take_all_solver():
    p = ContestParams(1.0, 0.7, 4)
    v = PrizeVector((1.0, 0.0, 0.0, 0.0))
    assert abs(
        solve_multiprize(UNIT, p, v).threshold - solve_threshold(UNIT, p).threshold
    ) < 1e-11


def test_prize_vector_validation():
    with pytest.raises(ParameterError):
        PrizeVector((0.25, 0.75))  # increasing
    with pytest.raises(ParameterError):
        PrizeVector((0.5, -0.5))
    with pytest.raises(ParameterError):
        solve_multiprize(UNIT, ContestParams(1.0, 1.0, 2), PrizeVector((0.5, 0.1)))


def _random_prize_vectors(rng, n, prize, count):
    for _ in range(count):
        raw = np.sort(rng.dirichlet(np.ones(n)))[::-1] * prize
        yield PrizeVector(tuple(raw / raw.sum() * prize))


def test_prize_envelope_and_extremal_thresholds():
    rng = np.random.default_rng(7)
    p = ContestParams(1.0, 0.6, 4)
    cs = np.linspace(0.0, 1.0, 21)
    wta = solve_multiprize(UNIT, p, PrizeVector((1.0, 0.0, 0.0, 0.0))).threshold
    equal = solve_multiprize(UNIT, p, PrizeVector((0.25, 0.25, 0.25, 0.25))).threshold
    for v in _random_prize_vectors(rng, 4, 1.0, 100):
        mix = [
            math.fsum(vm * phi_rank(UNIT, c, p, m + 1) for m, vm in enumerate(v.prizes))
            for c in cs
        ]
        top = [p.prize * phi_rank(UNIT, c, p, 1) for c in cs]
        floor = p.prize * p.q / p.n
        assert all(t >= m - 1e-12 for t, m in zip(top, mix))
        assert all(m >= floor - 1e-12 for m in mix)
        c_v = solve_multiprize(UNIT, p, v).threshold
        assert wta + 1e-10 >= c_v >= equal - 1e-10


def test_multiprize_boundary_reported_with_note():
    # tiny prize on a support bounded away from zero: nobody searches
    d = Uniform(0.5, 1.0)
    res = solve_multiprize(d, ContestParams(0.1, 0.5, 2), PrizeVector((0.1, 0.0)))
    assert not res.interior
    assert res.note is not None
    assert res.threshold == d.support_lo


# --- several bug types -----------------------------------------------------------


def test_multibug_reductions():
    p = ContestParams(1.0, 0.5, 2)
    single = solve_multibug(UNIT, [1.0], [1.0], [0.5], 2)
    assert abs(single.threshold - solve_threshold(UNIT, p).threshold) < 1e-12
    two = solve_multibug(UNIT, [1.0, 1.0], [1.0, 1.0], [0.5, 0.3], 2)
    planted = solve_artificial(UNIT, p, 1.0, 0.3)
    assert abs(two.threshold - planted.threshold) < 1e-12
    zero_weight = solve_multibug(UNIT, [1.0, 1.0], [1.0, 0.0], [0.5, 0.3], 2)
    assert abs(zero_weight.threshold - single.threshold) < 1e-12


def test_multibug_expected_count_scales_reward():
    p = ContestParams(2.0, 0.5, 3)
    doubled = solve_multibug(UNIT, [1.0], [2.0], [0.5], 3)
    direct = solve_threshold(UNIT, p)
    assert abs(doubled.threshold - direct.threshold) < 1e-12


def test_multibug_validation():
    with pytest.raises(ParameterError):
        solve_multibug(UNIT, [1.0], [1.0, 2.0], [0.5], 2)
    with pytest.raises(ParameterError):
        solve_multibug(UNIT, [], [], [], 2)
    with pytest.raises(ParameterError):
        solve_multibug(UNIT, [1.0], [math.inf], [0.5], 2)


# --- asymmetric two-agent games ---------------------------------------------------


def test_continuum_instance_reports_interval():
    d = continuum_example_distribution()
    pair = hetero_best_response_n2("costs", 1.0, 5.0 / 7.0, dists=(d, d))
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, 2001)
    assert len(eqs.intervals) == 1
    seg = eqs.intervals[0]
    assert abs(seg.c1_lo - 3.0 / 7.0) < 1e-6
    assert abs(seg.c1_hi - 4.0 / 7.0) < 1e-6
    assert seg.contains(0.5)  # the symmetric point sits inside
    # the continuum pairs satisfy c1 + c2 = 1
    assert abs(seg.c1_lo + seg.c2_at_lo - 1.0) < 1e-8
    assert abs(seg.c1_hi + seg.c2_at_hi - 1.0) < 1e-8


def test_symmetric_uniform_gives_unique_point():
    pair = hetero_best_response_n2("costs", 1.0, 1.0, dists=(UNIT, UNIT))
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, 2001)
    assert eqs.intervals == ()
    assert len(eqs.points) == 1
    c1, c2 = eqs.points[0]
    assert abs(c1 - 2.0 / 3.0) < 1e-8
    assert abs(c2 - 2.0 / 3.0) < 1e-8


def test_hetero_costs_cheaper_agent_searches_more():
    pair = hetero_best_response_n2("costs", 1.0, 1.0, dists=(Power(1.0), Power(2.0)))
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, 2001)
    assert len(eqs.points) == 1
    c1, c2 = eqs.points[0]
    assert c1 > c2
    # hand algebra: c1 = 2(sqrt(2) - 1)
    assert abs(c1 - 2.0 * (math.sqrt(2.0) - 1.0)) < 1e-8


def test_hetero_times_faster_agent_searches_more():
    pair = hetero_best_response_n2(
        "search_times", 1.0, 1.0, dist=UNIT, times=(0.5, 1.0)
    )
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, 2001)
    assert len(eqs.points) == 1
    c1, c2 = eqs.points[0]
    assert c1 > c2
    assert abs(c1 - 12.0 / 13.0) < 1e-8
    assert abs(c2 - 4.0 / 13.0) < 1e-8


def test_hetero_times_equal_horizons_symmetric():
    pair = hetero_best_response_n2(
        "search_times", 0.8, 1.0, dist=UNIT, times=(1.0, 1.0)
    )
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, 2001)
    assert len(eqs.points) == 1
    c1, c2 = eqs.points[0]
    assert abs(c1 - c2) < 1e-10


def test_hetero_mode_validation():
    with pytest.raises(ParameterError):
        hetero_best_response_n2("speed", 1.0, 1.0, dist=UNIT, times=(1.0, 2.0))
    with pytest.raises(ParameterError):
        hetero_best_response_n2("search_times", 1.0, 1.0, dist=UNIT, times=(2.0, 1.0))
    with pytest.raises(ParameterError):
        hetero_best_response_n2("costs", 1.0, 1.0, dist=UNIT)
