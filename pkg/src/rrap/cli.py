"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 infeasible allocation
(``evaluate`` only).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .model import RrapError, evaluate_constraints, load_problem
from .optimizer import ALGORITHMS, HybridConfig, optimize
from .oracle import DEFAULT_STATE_CAP, solve_exact_dp
from .sla import NotAchievable, SlaSpec, serial_reliability, sla_size

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


def _parse_allocation(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError(f"allocation must be comma-separated integers, got {text!r}") from None


def _parse_params(pairs: list[str]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--params expects key=value, got {pair!r}")
        out[key.strip()] = value.strip()
    return out


def _config(args) -> HybridConfig:
    params = _parse_params(args.params or [])
    base = HybridConfig()
    if args.max_fe is not None:
        base = base.replace(max_fe=args.max_fe)
    if getattr(args, "seed", None) is not None:
        base = base.replace(seed=args.seed)
    return HybridConfig.from_params(params, base)


def cmd_evaluate(args) -> int:
    problem = load_problem(args.problem)
    ev = evaluate_constraints(problem, _parse_allocation(args.allocation))
    status = "feasible" if ev.feasible else "infeasible"
    print(f"R_s={ev.system_reliability:.6f} g1={ev.cost_used} g2={ev.weight_used} {status}")
    if not ev.feasible:
        print(f"violation={ev.violation:.6g} (budgets {problem.cost_budget}/{problem.weight_budget})")
    if args.out:
        bench.write_json(args.out, ev.to_dict())
    return EXIT_OK if ev.feasible else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    problem = load_problem(args.problem)
    result = solve_exact_dp(problem, state_cap=args.state_cap)
    ev = evaluate_constraints(problem, result.best_allocation)
    print(f"problem {problem.name}: N={problem.n} budgets {problem.cost_budget}/{problem.weight_budget}")
    print("x* = " + ",".join(map(str, result.best_allocation)))
    print(f"R_s={result.best_reliability:.6f} g1={ev.cost_used} g2={ev.weight_used}")
    print(f"states explored: {result.states_explored}")
    if args.out:
        bench.write_json(args.out, result.to_dict())
    return EXIT_OK


def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    config = _config(args)
    trace = optimize(problem, config, args.algo, args.target)
    print(f"{args.algo} seed={config.seed} stop={trace.stop_reason}")
    print("x = " + ",".join(map(str, trace.best_allocation)))
    print(f"R_s={trace.best_reliability:.6f} feasible={str(trace.feasible).lower()}")
    print(f"fe_used={trace.fe_used} fe_to_target={trace.fe_to_target if trace.fe_to_target is not None else '-'}")
    if args.out:
        bench.write_json(args.out, trace.to_dict())
    return EXIT_OK


def cmd_bench(args) -> int:
    problem = load_problem(args.problem)
    config = _config(args)
    result, _ = bench.run_campaign(
        problem, args.algo, config, runs=args.runs, target=args.target, jobs=args.jobs, base_seed=args.base_seed
    )
    print(bench.format_report(result))
    if args.csv:
        Path(args.csv).write_text(bench.campaign_csv(result))
    if args.out:
        bench.write_json(args.out, result.to_dict())
    return EXIT_OK


def cmd_sla(args) -> int:
    spec = SlaSpec(args.r, args.target, args.unit_cost)
    print(f"baseline: {args.max_n} units in series, no redundancy: R={serial_reliability(args.r, args.max_n):.4f}")
    sizing = sla_size(spec, args.max_n, args.max_m)
    if isinstance(sizing, NotAchievable):
        print(f"NotAchievable: target {args.target} cannot be met; {sizing.reason}")
        print(f"best reachable R={sizing.best_reliability:.9f}")
    else:
        print(f"n={sizing.n} m={sizing.m} R={sizing.reliability:.9f} total_cost={sizing.total_cost:g}")
    return EXIT_OK


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rrap", description="Serial-parallel reliability-redundancy allocation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="evaluate one allocation")
    p.add_argument("problem", help="problem JSON file or bundled name (rrap15)")
    p.add_argument("allocation", help="comma-separated redundancy levels, e.g. 3,4,6")
    p.add_argument("--out", help="write the evaluation as JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("oracle", help="exact optimum by dynamic programming")
    p.add_argument("problem")
    p.add_argument("--state-cap", type=_positive_int, default=DEFAULT_STATE_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    def optimizer_flags(p, seed_flag):
        p.add_argument("problem")
        p.add_argument("--algo", choices=ALGORITHMS, default="hybrid")
        p.add_argument(seed_flag, type=int, default=None)
        p.add_argument("--max-fe", type=_positive_int, default=None)
        p.add_argument("--target", type=_probability, default=None)
        p.add_argument("--params", nargs="*", metavar="KEY=VALUE", help="HybridConfig overrides, e.g. hmcr=0.9")
        p.add_argument("--out", help="write JSON results")

    p = sub.add_parser("solve", help="one optimizer run")
    optimizer_flags(p, "--seed")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="multi-seed campaign")
    optimizer_flags(p, "--base-seed")
    p.add_argument("--runs", type=_positive_int, default=25)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--csv", help="write per-run rows plus a summary row")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sla", help="size n series / m parallel units against an uptime target")
    p.add_argument("--r", type=_probability, required=True, help="unit reliability")
    p.add_argument("--target", type=_probability, required=True)
    p.add_argument("--unit-cost", type=float, default=1000.0)
    p.add_argument("--max-n", type=_positive_int, default=5)
    p.add_argument("--max-m", type=_positive_int, default=5)
    p.set_defaults(func=cmd_sla)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RrapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
