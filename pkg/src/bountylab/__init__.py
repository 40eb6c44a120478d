"""Equilibrium solvers and design tools for bug bounty contests.

A pool of agents with private search costs decides whether to hunt for a
bug; the first finder takes the prize. The library computes the symmetric
equilibrium participation threshold and success probability, their
large-pool limits, the design extensions (hired expert, planted bug,
ranked prizes, asymmetric two-agent games), and validates all closed forms
against a deterministic Monte Carlo oracle. The ``bountylab`` CLI exposes
each solver and reproduces the published tables.
"""

from .asymptotics import (
    KappaResult,
    LimitReport,
    RateReport,
    convergence_rate,
    inverse_elasticity_floor,
    limit_consistency,
    solve_kappa,
    solve_kappa_with_bug,
    tail_monotonicity_n,
)
from .contest_core import (
    ContestParams,
    binom_sum_1,
    binom_sum_2,
    binom_sum_3,
    p_at_least_m,
    p_win,
    p_win_rank,
    phi,
    phi_expert,
    phi_rank,
    psi,
    success_prob,
)
from .designer import (
    DesignerParams,
    DesignEvaluation,
    eval_bug_design,
    eval_bug_design_asymptotic,
    expert_success,
    multiprize_utility,
    optimize_bug,
    optimize_prizes,
)
from .distributions import (
    CostDistribution,
    PiecewiseLinearCdf,
    Power,
    ShiftedPower,
    Uniform,
    cdf_dominates,
    from_config,
)
from .equilibrium import (
    AsymmetricEquilibria,
    BestResponsePair,
    EquilibriumResult,
    PrizeVector,
    SweepEntry,
    ThresholdInterval,
    check_interiority,
    critical_expertise,
    dpdn_sign,
    hetero_best_response_n2,
    solve_artificial,
    solve_asymmetric_n2,
    solve_expert,
    solve_multibug,
    solve_multiprize,
    solve_threshold,
    sweep_n,
)
from .errors import (
    BountyLabError,
    NoLimitError,
    NonInteriorError,
    ParameterError,
    SizeLimitError,
    ZeroDensityError,
)
from .mc_oracle import (
    McConfig,
    McEstimate,
    VerificationReport,
    estimate_rank_prob,
    estimate_success,
    estimate_win_prob,
    estimate_with_expert,
    verify_equilibrium,
)

__version__ = "0.1.0"
