"""Benchmark command line.

    bench run <plan-file> [--out results.csv] [--plot results.svg] [--timings]
    bench solve --game <spec> --alg <name> --eps <e> [--perturb <spec>]
                [--seed <s>] [--init worst|first|k,l] [--normalize] [--cluster]

`run` executes every (game, algorithm, size, repetition) cell of a plan
file and writes a CSV (plus an optional SVG summary plot).  `solve` runs a
single configuration and prints one record as key=value pairs.  Exit codes:
0 success, 1 configuration error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

from .plan import ExperimentPlan, parse_plan_file
from .report import emit_csv, emit_svg_plot
from .runner import run_experiment, summarize


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description="zero-sum best-response benchmark runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment plan file")
    p_run.add_argument("plan", help="path to a key=value plan file")
    p_run.add_argument("--out", help="CSV output path (default: <plan>.csv)")
    p_run.add_argument("--plot", help="also write an SVG summary plot")
    p_run.add_argument("--timings", action="store_true",
                       help="write real wall-clock ms (breaks byte-reproducibility)")

    p_solve = sub.add_parser("solve", help="run a single configuration")
    p_solve.add_argument("--game", required=True, help="game spec, e.g. L:8 or blotto:5,10")
    p_solve.add_argument("--alg", required=True, help="fp|sfp|afp|safp|do|sdo|sfp-restart")
    p_solve.add_argument("--eps", required=True, type=float)
    p_solve.add_argument("--perturb", default="none", help="none|uniform:a,b|gumbel:mu,beta|theory")
    p_solve.add_argument("--seed", default=1, type=int)
    p_solve.add_argument("--init", default="worst", help="worst|first|k,l")
    p_solve.add_argument("--normalize", action="store_true", help="rescale entries to [0,1]")
    p_solve.add_argument("--cluster", action="store_true", help="use terminal-cluster oracles")
    return parser


def _cmd_run(args) -> int:
    try:
        plan = parse_plan_file(args.plan)
    except (OSError, ValueError) as exc:
        print(f"bench: config error: {exc}", file=sys.stderr)
        return 1
    records = run_experiment(plan)
    out = args.out or str(Path(args.plan).with_suffix(".csv"))
    emit_csv(records, out, timings=args.timings)
    print(f"wrote {len(records)} records to {out}")
    failures = [r for r in records if r.error]
    for rec in failures:
        print(f"  run failed: {rec.game} {rec.algorithm} size={rec.size} rep={rec.rep}: {rec.error}",
              file=sys.stderr)
    if args.plot:
        emit_svg_plot(summarize(records), args.plot)
        print(f"wrote plot to {args.plot}")
    return 0


def _cmd_solve(args) -> int:
    init = args.init
    if init not in ("worst", "first"):
        init = f"explicit:{init}"
    try:
        plan = ExperimentPlan(
            games=(args.game,),
            algorithms=(args.alg.lower(),),
            eps=args.eps,
            sizes=(0,),  # placeholder; the game spec is already concrete
            repetitions=1,
            base_seed=args.seed - 1,  # run_single uses base + rep with rep = 1
            init=init,
            normalize=args.normalize,
            cluster=args.cluster,
            row_perturb=args.perturb,
            col_perturb=args.perturb,
        )
    except ValueError as exc:
        print(f"bench: config error: {exc}", file=sys.stderr)
        return 1

    from ..families import parse_game_spec
    from ..perturb import RandomSource
    from .runner import run_single

    try:
        built = parse_game_spec(args.game, RandomSource(args.seed, ("game",)))
    except (OSError, ValueError) as exc:
        print(f"bench: config error: {exc}", file=sys.stderr)
        return 1
    record = run_single(plan, built, plan.algorithms[0], size=max(built.game.shape), rep=1)
    for key, val in asdict(record).items():
        if key == "error" and val is None:
            continue
        print(f"{key}={val}")
    return 2 if record.error else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_solve(args)


if __name__ == "__main__":
    sys.exit(main())
