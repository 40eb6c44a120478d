"""Command-line front end.

One JSON config document describes one scenario; the subcommand picks the
solver and the result is emitted as CSV (four decimals, matching the
published tables) or JSON (full precision, with a fixed
scenario/inputs/outputs/diagnostics envelope). ``--seed`` and ``--format``
override the corresponding config fields.

Exit codes: 0 success, 2 usage or config error, 3 interiority or solver
failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Mapping

import numpy as np

from . import reference
from .asymptotics import solve_kappa, solve_kappa_with_bug
from .contest_core import ContestParams
from .designer import (
    DesignerParams,
    eval_bug_design,
    eval_bug_design_asymptotic,
    multiprize_utility,
    optimize_bug,
    optimize_prizes,
)
from .distributions import CostDistribution, from_config
from .equilibrium import (
    PrizeVector,
    critical_expertise,
    dpdn_sign,
    hetero_best_response_n2,
    solve_asymmetric_n2,
    solve_expert,
    solve_threshold,
    sweep_n,
)
from .designer import expert_success
from .errors import (
    BountyLabError,
    NoLimitError,
    NonInteriorError,
    ParameterError,
    SizeLimitError,
)
from .mc_oracle import (
    McConfig,
    estimate_rank_prob,
    estimate_success,
    estimate_win_prob,
    estimate_with_expert,
    verify_equilibrium,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

SCENARIOS = (
    "solve",
    "sweep",
    "expert",
    "bug",
    "prizes",
    "kappa",
    "asym2",
    "simulate",
    "verify",
    "reproduce-paper",
)

_COMMON_KEYS = {"scenario", "format", "seed"}


class _Emission:
    """What a scenario handler hands back for rendering."""

    def __init__(self, outputs, diagnostics, header, rows, exit_code=EXIT_OK):
        self.outputs = outputs
        self.diagnostics = diagnostics
        self.header = header
        self.rows = rows
        self.exit_code = exit_code


def _check_keys(cfg: Mapping, scenario: str, required: set[str], optional: set[str]) -> None:
    if cfg.get("scenario") not in (None, scenario):
        raise ParameterError(
            f"config is for scenario {cfg.get('scenario')!r}, invoked as {scenario!r}"
        )
    unknown = set(cfg) - required - optional - _COMMON_KEYS
    if unknown:
        raise ParameterError(f"unknown config keys for {scenario!r}: {sorted(unknown)}")
    missing = required - set(cfg)
    if missing:
        raise ParameterError(f"missing config keys for {scenario!r}: {sorted(missing)}")


def _contest(cfg: Mapping, default_n: int | None = None) -> ContestParams:
    block = cfg.get("contest")
    if not isinstance(block, Mapping):
        raise ParameterError("config needs a 'contest' object with V, q, n")
    unknown = set(block) - {"V", "q", "n"}
    if unknown:
        raise ParameterError(f"unknown contest keys: {sorted(unknown)}")
    n = block.get("n", default_n)
    if n is None:
        raise ParameterError("contest block is missing 'n'")
    return ContestParams(prize=float(block["V"]), q=float(block["q"]), n=int(n))


def _distribution(cfg: Mapping) -> CostDistribution:
    if "distribution" not in cfg:
        raise ParameterError("config needs a 'distribution' object")
    return from_config(cfg["distribution"])


def _fmt_float(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.4f}"
    return str(x)


def _result_outputs(res) -> dict:
    return {
        "c_star": res.threshold,
        "p_star": res.success,
        "residual": res.residual,
        "iterations": res.iterations,
        "interior": res.interior,
        "interior_checks": list(res.interior_checks),
        "note": res.note,
    }


# ---------------------------------------------------------------------------
# scenario handlers
# ---------------------------------------------------------------------------


def _cmd_solve(cfg: Mapping) -> _Emission:
    _check_keys(cfg, "solve", {"distribution", "contest"}, set())
    d = _distribution(cfg)
    p = _contest(cfg)
    res = solve_threshold(d, p)
    outputs = {"n": p.n, **_result_outputs(res)}
    diag = {"residual": res.residual, "iterations": res.iterations}
    return _Emission(outputs, diag, ["n", "c_star", "p_star"], [[p.n, res.threshold, res.success]])


def _cmd_sweep(cfg: Mapping) -> _Emission:
    _check_keys(cfg, "sweep", {"distribution", "V", "q", "n_list"}, {"dpdn"})
    d = _distribution(cfg)
    prize, q = float(cfg["V"]), float(cfg["q"])
    n_list = [int(n) for n in cfg["n_list"]]
    with_sign = bool(cfg.get("dpdn", False))
    entries = sweep_n(d, prize, q, n_list)
    header = ["n", "c_star", "p_star"] + (["dpdn_sign"] if with_sign else [])
    rows, out_rows, errors = [], [], {}
    for e in entries:
        if e.result is None:
            errors[e.n] = e.error
            rows.append([e.n] + [None] * (len(header) - 1))
            out_rows.append({"n": e.n, "error": e.error})
            continue
        row = [e.n, e.result.threshold, e.result.success]
        out = {"n": e.n, "c_star": e.result.threshold, "p_star": e.result.success}
        if with_sign:
            sign = dpdn_sign(d, e.result, ContestParams(prize, q, e.n))
            row.append(sign)
            out["dpdn_sign"] = sign
        rows.append(row)
        out_rows.append(out)
    code = EXIT_SOLVER if errors else EXIT_OK
    return _Emission({"rows": out_rows}, {"errors": errors}, header, rows, code)


def _cmd_expert(cfg: Mapping) -> _Emission:
    _check_keys(cfg, "expert", {"distribution", "contest"}, {"q_e", "critical"})
    d = _distribution(cfg)
    p = _contest(cfg)
    q_hat = critical_expertise(d, p)
    if cfg.get("critical", False):
        q_e = q_hat
    elif "q_e" in cfg:
        q_e = float(cfg["q_e"])
    else:
        raise ParameterError("expert scenario needs 'q_e' or 'critical': true")
    res = solve_expert(d, p, q_e)
    p_e = expert_success(d, p, q_e)
    outputs = {
        "q_e": q_e,
        "c_e": res.threshold,
        "p_expert": p_e,
        "critical_expertise": q_hat,
        "residual": res.residual,
    }
    diag = {"iterations": res.iterations, "interior_checks": list(res.interior_checks)}
    header = ["q_e", "c_e", "p_expert", "critical_expertise"]
    return _Emission(outputs, diag, header, [[q_e, res.threshold, p_e, q_hat]])


def _cmd_bug(cfg: Mapping) -> _Emission:
    _check_keys(
        cfg, "bug", {"contest", "W"}, {"distribution", "c_lo", "V_a", "q_a", "optimize"}
    )
    finite = "distribution" in cfg
    if finite == ("c_lo" in cfg):
        raise ParameterError("bug scenario needs exactly one of 'distribution' or 'c_lo'")
    dp = DesignerParams(fix_value=float(cfg["W"]), contest=_contest(cfg, default_n=2))
    v_a = float(cfg.get("V_a", 0.0))
    q_a = float(cfg.get("q_a", 0.0))
    if "optimize" in cfg:
        opt = cfg["optimize"]
        unknown = set(opt) - {"resolution", "bounds"}
        if unknown:
            raise ParameterError(f"unknown optimize keys: {sorted(unknown)}")
        bounds = opt.get("bounds")
        if bounds is not None:
            bounds = ((float(bounds[0][0]), float(bounds[0][1])), (float(bounds[1][0]), float(bounds[1][1])))
        ev = optimize_bug(
            dp,
            int(opt.get("resolution", 11)),
            d=_distribution(cfg) if finite else None,
            c_lo=None if finite else float(cfg["c_lo"]),
            bounds=bounds,
        )
    elif finite:
        ev = eval_bug_design(_distribution(cfg), dp, v_a, q_a)
    else:
        ev = eval_bug_design_asymptotic(float(cfg["c_lo"]), dp, v_a, q_a)
    outputs = {
        "variables": dict(ev.variables),
        "threshold": ev.threshold,
        "objective": ev.objective,
        "benefit": ev.benefit,
        "reward_costs": list(ev.reward_costs),
        "method": ev.method,
        "note": ev.note,
    }
    header = ["v_a", "q_a", "threshold", "objective"]
    row = [ev.variable("v_a"), ev.variable("q_a"), ev.threshold, ev.objective]
    return _Emission(outputs, {}, header, [row])


def _cmd_prizes(cfg: Mapping) -> _Emission:
    _check_keys(cfg, "prizes", {"distribution", "contest", "W"}, {"prizes", "resolution"})
    d = _distribution(cfg)
    dp = DesignerParams(fix_value=float(cfg["W"]), contest=_contest(cfg))
    if ("prizes" in cfg) == ("resolution" in cfg):
        raise ParameterError("prizes scenario needs exactly one of 'prizes' or 'resolution'")
    if "prizes" in cfg:
        ev = multiprize_utility(d, dp, PrizeVector([float(v) for v in cfg["prizes"]]))
    else:
        ev = optimize_prizes(d, dp, int(cfg["resolution"]))
    prizes = [val for _, val in ev.variables]
    outputs = {
        "prizes": prizes,
        "c_v": ev.threshold,
        "utility": ev.objective,
        "benefit": ev.benefit,
        "reward_costs": list(ev.reward_costs),
        "method": ev.method,
    }
    header = [f"prize_{i + 1}" for i in range(len(prizes))] + ["c_v", "utility"]
    return _Emission(outputs, {}, header, [prizes + [ev.threshold, ev.objective]])


def _cmd_kappa(cfg: Mapping) -> _Emission:
    _check_keys(cfg, "kappa", {"c_lo", "q", "V"}, {"V_a", "q_a"})
    c_lo, q, prize = float(cfg["c_lo"]), float(cfg["q"]), float(cfg["V"])
    if "V_a" in cfg or "q_a" in cfg:
        kres = solve_kappa_with_bug(
            c_lo, q, prize, q_a=float(cfg.get("q_a", 0.0)), v_a=float(cfg.get("V_a", 0.0))
        )
    else:
        kres = solve_kappa(c_lo, q, prize)
    outputs = {
        "kappa": None if kres.divergent else kres.kappa,
        "divergent": kres.divergent,
        "limit_success": kres.limit_success,
        "residual": kres.residual,
    }
    header = ["kappa", "limit_success", "residual"]
    row = [math.inf if kres.divergent else kres.kappa, kres.limit_success, kres.residual]
    return _Emission(outputs, {}, header, [row])


def _cmd_asym2(cfg: Mapping) -> _Emission:
    _check_keys(
        cfg,
        "asym2",
        {"mode", "q", "V"},
        {"distribution", "distributions", "T1", "T2", "scan_points"},
    )
    mode = cfg["mode"]
    q, prize = float(cfg["q"]), float(cfg["V"])
    scan_points = int(cfg.get("scan_points", 2001))
    if mode == "symmetric":
        d = _distribution(cfg)
        pair = hetero_best_response_n2("costs", q, prize, dists=(d, d))
    elif mode == "costs":
        specs = cfg.get("distributions")
        if not isinstance(specs, list) or len(specs) != 2:
            raise ParameterError("costs mode needs 'distributions': [F1, F2]")
        pair = hetero_best_response_n2(
            "costs", q, prize, dists=(from_config(specs[0]), from_config(specs[1]))
        )
    elif mode == "search_times":
        if "T1" not in cfg or "T2" not in cfg:
            raise ParameterError("search_times mode needs 'T1' and 'T2'")
        pair = hetero_best_response_n2(
            "search_times",
            q,
            prize,
            dist=_distribution(cfg),
            times=(float(cfg["T1"]), float(cfg["T2"])),
        )
    else:
        raise ParameterError(f"unknown asym2 mode {mode!r}")
    eqs = solve_asymmetric_n2(pair.br1, pair.br2, pair.lo, pair.hi, scan_points)
    outputs = {
        "points": [[c1, c2] for c1, c2 in eqs.points],
        "intervals": [
            {
                "c1_lo": seg.c1_lo,
                "c1_hi": seg.c1_hi,
                "c2_at_lo": seg.c2_at_lo,
                "c2_at_hi": seg.c2_at_hi,
            }
            for seg in eqs.intervals
        ],
    }
    header = ["kind", "c1", "c2", "c1_end", "c2_end"]
    rows: list[list] = []
    for c1, c2 in eqs.points:
        rows.append(["point", c1, c2, None, None])
    for seg in eqs.intervals:
        rows.append(["interval", seg.c1_lo, seg.c2_at_lo, seg.c1_hi, seg.c2_at_hi])
    return _Emission(outputs, {}, header, rows)


def _cmd_simulate(cfg: Mapping) -> _Emission:
    _check_keys(
        cfg,
        "simulate",
        {"estimator", "distribution", "q", "thresholds"},
        {"agent_index", "m", "q_e", "min_finders", "trials", "horizon"},
    )
    d = _distribution(cfg)
    q = float(cfg["q"])
    thresholds = [float(c) for c in cfg["thresholds"]]
    mc = McConfig(
        trials=int(cfg.get("trials", 100_000)),
        seed=int(cfg.get("seed", 0)),
        horizon=float(cfg.get("horizon", 1.0)),
    )
    agent = int(cfg.get("agent_index", 0))
    kind = cfg["estimator"]
    if kind == "win":
        est = estimate_win_prob(thresholds, d, q, agent, mc)
    elif kind == "success":
        est = estimate_success(thresholds, d, q, mc, min_finders=int(cfg.get("min_finders", 1)))
    elif kind == "rank":
        if "m" not in cfg:
            raise ParameterError("rank estimator needs 'm'")
        est = estimate_rank_prob(thresholds, d, q, agent, int(cfg["m"]), mc)
    elif kind == "expert":
        if "q_e" not in cfg:
            raise ParameterError("expert estimator needs 'q_e'")
        est = estimate_with_expert(thresholds, d, q, float(cfg["q_e"]), agent, mc)
    else:
        raise ParameterError(f"unknown estimator {kind!r}")
    outputs = {"mean": est.mean, "std_error": est.std_error, "trials": est.trials}
    return _Emission(outputs, {"seed": mc.seed}, ["mean", "std_error", "trials"], [[est.mean, est.std_error, est.trials]])


def _cmd_verify(cfg: Mapping) -> _Emission:
    _check_keys(
        cfg, "verify", {"distribution", "contest"}, {"threshold", "trials", "grid_points"}
    )
    d = _distribution(cfg)
    p = _contest(cfg)
    mc = McConfig(trials=int(cfg.get("trials", 200_000)), seed=int(cfg.get("seed", 0)))
    if "threshold" in cfg:
        candidate: float = float(cfg["threshold"])
        threshold_source = "config override"
    else:
        candidate = solve_threshold(d, p).threshold
        threshold_source = "solved equilibrium"
    grid = np.linspace(d.support_lo, d.support_hi, int(cfg.get("grid_points", 41)))
    report = verify_equilibrium(candidate, d, p, grid, mc)
    outputs = {
        "threshold": report.threshold,
        "win_prob": report.win_prob.mean,
        "win_prob_se": report.win_prob.std_error,
        "indifference_gap": report.indifference_gap,
        "tolerance": report.tolerance,
        "indifference_ok": report.indifference_ok,
        "type_violations": list(report.type_violations),
        "profitable_deviations": [
            {"threshold": r.threshold, "improvement": r.improvement, "std_error": r.std_error}
            for r in report.deviations
            if r.profitable
        ],
        "ok": report.ok,
    }
    diag = {"threshold_source": threshold_source, "trials": mc.trials, "seed": mc.seed}
    header = ["threshold", "win_prob", "indifference_gap", "tolerance", "ok"]
    row = [report.threshold, report.win_prob.mean, report.indifference_gap, report.tolerance, report.ok]
    return _Emission(outputs, diag, header, [row], EXIT_OK if report.ok else EXIT_VERIFY)


def _cmd_reproduce(cfg: Mapping) -> _Emission:
    _check_keys(cfg, "reproduce-paper", set(), set())
    rows = reference.compute_reference_rows()
    out_rows = [
        {
            "name": r.name,
            "expected": r.expected,
            "computed": r.computed,
            "abs_diff": r.abs_diff,
            "tolerance": r.tolerance,
            "ok": r.ok,
        }
        for r in rows
    ]
    all_ok = all(r.ok for r in rows)
    header = ["name", "expected", "computed", "abs_diff", "tolerance", "status"]
    csv_rows = [
        [r.name, r.expected, r.computed, r.abs_diff, r.tolerance, "ok" if r.ok else "FAIL"]
        for r in rows
    ]
    diag = {"total": len(rows), "failed": sum(not r.ok for r in rows)}
    return _Emission(
        {"rows": out_rows, "all_ok": all_ok}, diag, header, csv_rows,
        EXIT_OK if all_ok else EXIT_VERIFY,
    )


_HANDLERS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "expert": _cmd_expert,
    "bug": _cmd_bug,
    "prizes": _cmd_prizes,
    "kappa": _cmd_kappa,
    "asym2": _cmd_asym2,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "reproduce-paper": _cmd_reproduce,
}


# ---------------------------------------------------------------------------
# rendering and entry point
# ---------------------------------------------------------------------------


def _render_csv(emission: _Emission, out) -> None:
    def cell(x) -> str:
        if x is None:
            return ""
        if isinstance(x, bool):
            return str(x).lower()
        if isinstance(x, float):
            return _fmt_float(x)
        return str(x)

    out.write(",".join(emission.header) + "\n")
    for row in emission.rows:
        out.write(",".join(cell(x) for x in row) + "\n")


def _render_json(scenario: str, cfg: Mapping, emission: _Emission, out) -> None:
    doc = {
        "scenario": scenario,
        "inputs": dict(cfg),
        "outputs": emission.outputs,
        "diagnostics": emission.diagnostics,
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bountylab",
        description="Equilibrium and design calculations for bug bounty contests.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to the scenario JSON document")
        p.add_argument("--format", choices=["csv", "json"], help="output format override")
        p.add_argument("--seed", type=int, help="seed override for stochastic scenarios")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    scenario = args.scenario
    try:
        if args.config is not None:
            with open(args.config) as fh:
                cfg: dict[str, Any] = json.load(fh)
            if not isinstance(cfg, dict):
                raise ParameterError("config document must be a JSON object")
        else:
            if scenario != "reproduce-paper":
                raise ParameterError("--config is required for this scenario")
            cfg = {}
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.format is not None:
            cfg["format"] = args.format
        fmt = cfg.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ParameterError(f"unknown format {cfg.get('format')!r}")
        emission = _HANDLERS[scenario](cfg)
    except (json.JSONDecodeError, OSError) as exc:
        print(f"bountylab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"bountylab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonInteriorError, NoLimitError, SizeLimitError) as exc:
        print(f"bountylab: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except BountyLabError as exc:  # anything else from the library
        print(f"bountylab: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if fmt == "json":
        _render_json(scenario, cfg, emission, sys.stdout)
    else:
        _render_csv(emission, sys.stdout)
    return emission.exit_code


if __name__ == "__main__":
    sys.exit(main())
