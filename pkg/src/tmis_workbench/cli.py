"""``workbench`` command line.

    workbench run --scenario kssti --params desk --seed 1 --sessions 100
    workbench replay --transcripts t.jsonl --leaks t.leaks.jsonl

Exit status is 0 iff every assertion of the scenario held.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import WorkbenchError
from .harness import (
    SCENARIOS, ScenarioConfig, export_transcripts, replay_attacks, run_scenario,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="workbench")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate sessions and run a scenario")
    run.add_argument("--scenario", choices=SCENARIOS, default="honest")
    run.add_argument("--params", choices=("test", "desk"), default="test")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--sessions", type=int, default=1)
    run.add_argument("--delta-max", type=int, default=1000, metavar="MS")
    run.add_argument("--clock-step", type=int, default=5, metavar="MS")
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--export", metavar="PATH", help="write transcripts as JSON lines")
    run.add_argument("--leaks-out", metavar="PATH",
                     help="where to write leaks (default: <export stem>.leaks.jsonl)")
    run.add_argument("--registry", metavar="PATH", help="load/save the patient registry")
    run.add_argument("--corrupt-leak", action="store_true",
                     help="hand the attacks a wrong secret (negative control)")
    run.add_argument("--tamper-trials", type=int, default=50,
                     help="tampers per message field across the run")

    replay = sub.add_parser("replay", help="re-run attacks from exported files")
    replay.add_argument("--transcripts", required=True, metavar="PATH")
    replay.add_argument("--leaks", required=True, metavar="PATH")
    replay.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = ScenarioConfig(
                scenario=args.scenario, param_set=args.params, seed=args.seed,
                sessions=args.sessions, delta_max_millis=args.delta_max,
                clock_step_millis=args.clock_step, output_format=args.format,
                registry_path=args.registry, corrupt_leak=args.corrupt_leak,
                tamper_trials=args.tamper_trials,
            )
            if args.export:
                report = export_transcripts(cfg, args.export, args.leaks_out)
            else:
                report = run_scenario(cfg)
        else:
            report = replay_attacks(args.transcripts, args.leaks)
    except (WorkbenchError, OSError) as e:
        print(f"workbench: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render(args.format))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
