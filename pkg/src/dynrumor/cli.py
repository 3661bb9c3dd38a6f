"""Command-line front end.

Five subcommands: ``metrics`` (snapshot metrics of a graph file),
``simulate`` (seeded protocol runs over a schedule), ``generate`` (persist a
schedule family as a directory), ``bounds`` (the summed-rate bound table of
a schedule) and ``experiment`` (the Monte Carlo harness).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .bounds import bound_report, schedule_snapshots
from .generators import FAMILIES, load_schedule_dir, save_schedule_dir
from .graphs import RecordingSchedule, StaticSchedule, read_graph_file
from .metrics import DEFAULT_CAP, metric_report
from .simulate import PROTOCOLS, SimConfig, run
from .experiments import EXPERIMENTS, run_experiment

__all__ = ["main"]


def _load_schedule(path: str):
    p = Path(path)
    if p.is_dir():
        return load_schedule_dir(p)
    return StaticSchedule(read_graph_file(p))


def _cmd_metrics(args) -> int:
    g = read_graph_file(args.graphfile)
    report = metric_report(g, cap=args.cap)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return 0
    d = report.to_dict()
    print(f"n={d['n']} m={d['m']} connected={d['connected']}")
    for key in ("conductance", "diligence", "absolute_diligence"):
        frac = d[key]
        print(f"{key} = {frac['num']}/{frac['den']} ({frac['value']:.6g})")
    print(f"conductance witness: {d['conductance_witness']}")
    print(f"diligence witness: {d['diligence_witness']}")
    print(f"absolute witness edge: {d['absolute_witness']}")
    return 0


def _cmd_simulate(args) -> int:
    schedule = _load_schedule(args.schedule)
    if args.trace and args.trials != 1:
        raise SystemExit("--trace writes a single run; use --trials 1")
    initial = None
    if args.initial is not None and args.initial != "random":
        initial = (int(args.initial),)
    print("trial,seed,completion_time,events")
    for trial in range(args.trials):
        seed = args.seed + trial
        start = initial
        if args.initial == "random":
            rng = np.random.default_rng(seed)
            start = (int(rng.integers(0, schedule.n)),)
        sim = SimConfig(
            protocol=args.protocol,
            seed=seed,
            initial_informed=start,
            horizon=args.horizon,
        )
        trace = run(schedule.clone(seed=seed), sim)
        comp = "" if trace.completion_time is None else repr(trace.completion_time)
        print(f"{trial},{seed},{comp},{len(trace)}")
        if args.trace:
            trace.to_jsonl(args.trace)
    return 0


def _cmd_generate(args) -> int:
    factory = FAMILIES[args.family]
    kwargs = {"n": args.n, "seed": args.seed}
    if args.family in ("diligence-lb", "absolute-lb"):
        if args.rho is None:
            raise SystemExit(f"family {args.family} needs --rho")
        kwargs["rho"] = args.rho
    elif args.rho is not None:
        raise SystemExit(f"family {args.family} takes no --rho")
    if args.k is not None:
        if args.family != "diligence-lb":
            raise SystemExit(f"family {args.family} takes no --k")
        kwargs["k"] = args.k
    schedule = factory(**kwargs)
    save_schedule_dir(schedule, args.out)
    print(f"wrote {args.out} ({args.family}, n={schedule.n})")
    return 0


def _cmd_bounds(args) -> int:
    schedule = _load_schedule(args.schedule)
    if getattr(schedule, "adaptive", False):
        if args.seed is None:
            raise SystemExit(
                "adaptive schedules are realized by simulation; pass --seed"
            )
        recorder = RecordingSchedule(schedule.clone(seed=args.seed))
        run(recorder, SimConfig(seed=args.seed, record_trace=False))
        snapshots = recorder.snapshots[: args.prefix]
    else:
        snapshots = schedule_snapshots(schedule, args.prefix)
    report = bound_report(
        snapshots, c=args.c, cap=args.cap, extend_frozen_tail=args.extend
    )
    if args.json:
        print(report.to_json())
        return 0
    rows = report.rows()
    columns = list(rows[0].keys())
    print(",".join(columns))
    for row in rows:
        print(",".join(str(row[c]) for c in columns))
    print(f"# diligence_target={report.diligence_target!r}")
    print(f"# absolute_target={report.absolute_target}")
    print(f"# diligence_bound={report.diligence_bound}")
    print(f"# absolute_bound={report.absolute_bound}")
    print(f"# combined_bound={report.combined_bound}")
    return 0


def _cmd_experiment(args) -> int:
    overrides = None
    if args.config is not None:
        with open(args.config, "rb") as fh:
            overrides = tomllib.load(fh)
    result = run_experiment(args.name, overrides, outdir=args.out)
    for check in result.checks:
        verdict = {True: "PASS", False: "FAIL", None: "NOTE"}[check.get("pass")]
        rest = {k: v for k, v in check.items() if k not in ("check", "pass")}
        print(f"{verdict} {check['check']} {json.dumps(rest, sort_keys=True)}")
    print(f"wrote raw.csv, summary.csv, verdicts.json under {args.out}")
    return 0 if result.passed else 1


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynrumor")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="snapshot metrics of one graph file")
    p.add_argument("graphfile")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_metrics)

    p = sub.add_parser("simulate", help="seeded protocol runs over a schedule")
    p.add_argument("--schedule", required=True, help="schedule dir or graph file")
    p.add_argument("--protocol", default="async-push-pull", choices=sorted(PROTOCOLS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--initial", default=None, help="vertex id or 'random'")
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--trace", default=None, help="write the event log (trials=1)")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("generate", help="persist a schedule family as a directory")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("bounds", help="summed-rate bound table of a schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--prefix", type=int, default=64, help="steps to evaluate")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--seed", type=int, default=None, help="realize adaptive schedules")
    p.add_argument("--extend", action="store_true", help="extend past the prefix assuming it freezes")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("experiment", help="run a named Monte Carlo experiment")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--config", default=None, help="TOML config overriding defaults")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
