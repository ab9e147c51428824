"""Command-line interface.

Exit codes: 0 success, 2 planning failure, 1 usage or input-format error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .grid import MapFormatError, parse_map
from .mapgen import cave_grid, generate_scenario, random_grid, scenario_text
from .runner import (
    ALGORITHMS,
    InstanceError,
    load_instance,
    run_full_horizon,
    run_oracle_check,
    run_single_step_study,
    write_steps_csv,
    write_study_csv,
    write_summary_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PLANNING = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    """Bad arguments; mapped to exit code 1."""


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", required=True, help="MovingAI .map file")
    p.add_argument("--scen", required=True, help="MovingAI .scen file")
    p.add_argument("--agents", type=int, required=True, help="use the first N scenario entries")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anytime-mapf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="one full-horizon run")
    _add_instance_args(p)
    p.add_argument("--alg", required=True, choices=ALGORITHMS)
    p.add_argument("--step-budget-ms", type=float, default=0.0,
                   help="per-step refinement budget in ms (nodes mode converts at 1000 nodes/ms)")
    p.add_argument("--budget-mode", choices=("wall", "nodes"), default="wall")
    p.add_argument("--time-limit-s", type=float, default=60.0,
                   help="cumulative planning-time cutoff")
    p.add_argument("--max-steps", type=int, default=5000)
    p.add_argument("--out-summary", help="write the RunSummary JSON here")
    p.add_argument("--out-steps", help="write per-step records CSV here")

    p = sub.add_parser("study", help="per-step improvement study across budgets")
    _add_instance_args(p)
    p.add_argument("--budgets", required=True,
                   help="comma-separated budgets in ms, ascending (e.g. 0,0.1,4,256)")
    p.add_argument("--budget-mode", choices=("wall", "nodes"), default="nodes")
    p.add_argument("--max-steps", type=int, default=5000)
    p.add_argument("--out", required=True, help="study CSV output path")

    p = sub.add_parser("oracle-check", help="compare against the brute-force optimum")
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--agents", default="2..6", help="agent-count range, e.g. 2..6")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen-map", help="synthesize a benchmark map")
    p.add_argument("--kind", choices=("random", "cave"), default="random")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--density", type=float, default=0.2, help="obstacle density (random kind)")
    p.add_argument("--ensure-cycles", action="store_true",
                   help="repair dead ends and bridges so the open space is biconnected (random kind)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen-scen", help="synthesize a scenario for a map")
    p.add_argument("--map", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    return parser


def _cmd_solve(args) -> int:
    instance = load_instance(args.map, args.scen, args.agents)
    result = run_full_horizon(
        instance,
        args.alg,
        step_budget_ms=args.step_budget_ms,
        budget_mode=args.budget_mode,
        seed=args.seed,
        time_limit_s=args.time_limit_s,
        max_steps=args.max_steps,
    )
    if args.out_summary:
        write_summary_json(args.out_summary, result.summary)
    if args.out_steps:
        write_steps_csv(args.out_steps, result.steps)
    print(json.dumps(asdict(result.summary)))
    return EXIT_OK if result.summary.success else EXIT_PLANNING


def _cmd_study(args) -> int:
    try:
        budgets = [float(b) for b in args.budgets.split(",") if b != ""]
    except ValueError:
        raise UsageError(f"bad --budgets value: {args.budgets!r}")
    instance = load_instance(args.map, args.scen, args.agents)
    records = run_single_step_study(
        instance, budgets, budget_mode=args.budget_mode, seed=args.seed,
        max_steps=args.max_steps,
    )
    write_study_csv(args.out, records)
    print(f"wrote {len(records)} study records ({len(budgets)} budgets) to {args.out}")
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    try:
        lo, hi = (int(x) for x in args.agents.split(".."))
    except ValueError:
        raise UsageError(f"bad --agents range: {args.agents!r} (expected e.g. 2..6)")
    matches, trials = run_oracle_check(
        size=args.size, agents_min=lo, agents_max=hi, trials=args.trials, seed=args.seed
    )
    print(f"optimal on {matches}/{trials} instances")
    return EXIT_OK if matches == trials else EXIT_PLANNING


def _cmd_gen_map(args) -> int:
    if args.kind == "random":
        grid = random_grid(
            args.width, args.height, args.density, args.seed,
            ensure_cycles=args.ensure_cycles,
        )
    else:
        grid = cave_grid(args.width, args.height, args.seed)
    Path(args.out).write_text(grid.to_text())
    open_cells = int(grid.passable.sum())
    print(f"wrote {args.width}x{args.height} {args.kind} map ({open_cells} open cells) to {args.out}")
    return EXIT_OK


def _cmd_gen_scen(args) -> int:
    grid = parse_map(Path(args.map).read_text())
    entries = generate_scenario(grid, args.count, args.seed, map_name=Path(args.map).name)
    Path(args.out).write_text(scenario_text(grid, entries, Path(args.map).name))
    print(f"wrote {len(entries)} scenario entries to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "study": _cmd_study,
    "oracle-check": _cmd_oracle_check,
    "gen-map": _cmd_gen_map,
    "gen-scen": _cmd_gen_scen,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MapFormatError, InstanceError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
