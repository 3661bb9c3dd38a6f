"""Seeded Monte Carlo experiment harness.

Each experiment is a named recipe: a *runner* turns a config dict into
per-trial raw rows, and a *summarizer* derives aggregate rows plus
pass/fail checks from those raw rows alone.  Every gated check carries its
tolerance; observations recorded without a gate set ``"pass": None``.

Outputs land in an output directory as ``raw.csv``, ``summary.csv`` and
``verdicts.json``.  :func:`load_result` re-reads the raw table, re-derives
summary and verdicts, and refuses to return a result that does not
reproduce the files on disk byte for byte.

Determinism contract: the config (seed included) fully determines all three
artifacts.  Trial ``i`` of sweep point ``p`` always runs with seed
``seed + POINT_STRIDE * p + i``, so any row can be replayed in isolation.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .bounds import bound_report, static_bound_report
from .generators import (
    absolute_lb_schedule,
    bipartite_string,
    diligence_lb_schedule,
    dynamic_star_schedule,
    expander_graph,
    two_clique_schedule,
)
from .graphs import RecordingSchedule, StaticSchedule, star_graph
from .metrics import DEFAULT_CAP, absolute_diligence
from .simulate import SimConfig, run, run_forward_2push

__all__ = [
    "EXPERIMENTS",
    "POINT_STRIDE",
    "WILSON_Z",
    "ExperimentResult",
    "experiment_config",
    "linear_fit",
    "load_result",
    "run_experiment",
    "wilson_interval",
]

#: seed stride between sweep points; trials use consecutive seeds inside it
POINT_STRIDE = 100_000

#: two-sided 99% normal quantile, used by every Wilson interval below
WILSON_Z = 2.576


# ---------------------------------------------------------------------------
# Small statistics helpers


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError(f"need trials >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside 0..{trials}")
    p = successes / trials
    z2 = z * z
    centre = p + z2 / (2 * trials)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4 * trials * trials))
    denom = 1.0 + z2 / trials
    return ((centre - half) / denom, (centre + half) / denom)


def linear_fit(xs, ys) -> dict:
    """Least-squares line with R^2 (1.0 when the ys are all equal)."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two same-length sequences of >= 2 points")
    n = len(xs)
    xbar = math.fsum(xs) / n
    ybar = math.fsum(ys) / n
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    if sxx == 0.0:
        raise ValueError("x values are all equal; no line to fit")
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    ss_res = math.fsum((y - slope * x - intercept) ** 2 for x, y in zip(xs, ys))
    ss_tot = math.fsum((y - ybar) ** 2 for y in ys)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return {"slope": slope, "intercept": intercept, "r2": r2, "points": n}


def _median(values) -> float | None:
    values = [v for v in values if v is not None]
    return float(statistics.median(values)) if values else None


def _mean(values) -> float | None:
    values = [v for v in values if v is not None]
    return math.fsum(values) / len(values) if values else None


def _quantile(values, q: float) -> float | None:
    """Nearest-rank quantile of the non-None values."""
    values = sorted(v for v in values if v is not None)
    if not values:
        return None
    rank = max(1, math.ceil(q * len(values)))
    return float(values[min(rank, len(values)) - 1])


# ---------------------------------------------------------------------------
# CSV round-trip (repr floats, "" for None, newline terminators)


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        raise TypeError("store booleans as 0/1 integers")
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        if any(ch in v for ch in ",\r\n"):
            raise ValueError(f"cell {v!r} needs quoting; keep cells delimiter-free")
        return v
    raise TypeError(f"unsupported cell type {type(v).__name__}")


def _csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _opt_int(s: str):
    return None if s == "" else int(s)


def _opt_float(s: str):
    return None if s == "" else float(s)


def _cell_str(s: str) -> str:
    return s


def _parse_csv(text: str, columns, parsers):
    lines = text.split("\n")
    if lines[-1] != "":
        raise ValueError("raw CSV must end with a newline")
    header = lines[0].split(",")
    if header != list(columns):
        raise ValueError(f"unexpected raw CSV header {header}")
    rows = []
    for line in lines[1:-1]:
        cells = line.split(",")
        if len(cells) != len(parsers):
            raise ValueError(f"row has {len(cells)} cells, expected {len(parsers)}")
        rows.append({c: p(cell) for c, p, cell in zip(columns, parsers, cells)})
    return rows


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class ExperimentResult:
    """Raw rows, derived summary and verdict checks of one experiment run."""

    name: str
    config: dict
    raw_columns: tuple[str, ...]
    raw_rows: tuple[tuple, ...]
    summary_columns: tuple[str, ...]
    summary_rows: tuple[tuple, ...]
    checks: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        """True when no gated check failed (observations don't gate)."""
        return all(c.get("pass") is not False for c in self.checks)

    def check(self, name: str, **fields) -> dict:
        """The unique check matching ``name`` and every given field."""
        hits = [
            c
            for c in self.checks
            if c["check"] == name and all(c.get(k) == v for k, v in fields.items())
        ]
        if len(hits) != 1:
            raise KeyError(f"{len(hits)} checks match {name!r} {fields!r}")
        return hits[0]

    def raw_csv(self) -> str:
        return _csv_text(self.raw_columns, self.raw_rows)

    def summary_csv(self) -> str:
        return _csv_text(self.summary_columns, self.summary_rows)

    def verdicts_json(self) -> str:
        payload = {
            "experiment": self.name,
            "config": self.config,
            "passed": self.passed,
            "checks": list(self.checks),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, outdir) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "raw.csv").write_text(self.raw_csv())
        (outdir / "summary.csv").write_text(self.summary_csv())
        (outdir / "verdicts.json").write_text(self.verdicts_json())
        return outdir


@dataclass(frozen=True)
class _Experiment:
    defaults: dict
    raw_columns: tuple[str, ...]
    parsers: tuple[Callable, ...]
    runner: Callable[[dict], list[dict]]
    summarizer: Callable[[dict, list[dict]], tuple[tuple, list, list]]


EXPERIMENTS: dict[str, _Experiment] = {}


def experiment_config(name: str, overrides: dict | None = None) -> dict:
    """Defaults of ``name`` merged with ``overrides`` (unknown keys rejected)."""
    entry = _entry(name)
    cfg = json.loads(json.dumps(entry.defaults))
    for key, value in (overrides or {}).items():
        if key not in cfg:
            raise ValueError(f"unknown config key {key!r} for experiment {name!r}")
        cfg[key] = json.loads(json.dumps(value))
    return cfg


def _entry(name: str) -> _Experiment:
    if name not in EXPERIMENTS:
        known = ", ".join(sorted(EXPERIMENTS))
        raise ValueError(f"unknown experiment {name!r}; choose from: {known}")
    return EXPERIMENTS[name]


def _assemble(name: str, cfg: dict, dict_rows: list[dict]) -> ExperimentResult:
    entry = _entry(name)
    summary_columns, summary_rows, checks = entry.summarizer(cfg, dict_rows)
    return ExperimentResult(
        name=name,
        config=cfg,
        raw_columns=entry.raw_columns,
        raw_rows=tuple(tuple(r[c] for c in entry.raw_columns) for r in dict_rows),
        summary_columns=tuple(summary_columns),
        summary_rows=tuple(tuple(r[c] for c in summary_columns) for r in summary_rows),
        checks=tuple(checks),
    )


def run_experiment(name: str, config: dict | None = None, outdir=None) -> ExperimentResult:
    """Run ``name`` under its defaults merged with ``config``.

    With ``outdir`` the three artifacts are written there as well.
    """
    cfg = experiment_config(name, config)
    result = _assemble(name, cfg, _entry(name).runner(cfg))
    if outdir is not None:
        result.write(outdir)
    return result


def load_result(outdir) -> ExperimentResult:
    """Re-derive a stored result from its raw rows and verify the artifacts.

    The summary and verdicts are recomputed from ``raw.csv`` + the stored
    config; any byte difference against the files on disk raises.
    """
    outdir = Path(outdir)
    payload = json.loads((outdir / "verdicts.json").read_text())
    name = payload["experiment"]
    entry = _entry(name)
    raw_text = (outdir / "raw.csv").read_text()
    dict_rows = _parse_csv(raw_text, entry.raw_columns, entry.parsers)
    result = _assemble(name, payload["config"], dict_rows)
    if result.raw_csv() != raw_text:
        raise ValueError(f"{outdir}: raw.csv does not round-trip")
    if result.summary_csv() != (outdir / "summary.csv").read_text():
        raise ValueError(f"{outdir}: summary.csv disagrees with the raw rows")
    if result.verdicts_json() != (outdir / "verdicts.json").read_text():
        raise ValueError(f"{outdir}: verdicts.json disagrees with the raw rows")
    return result


# ---------------------------------------------------------------------------
# Shared sweep machinery


def _point_base(cfg: dict, point: int) -> int:
    return int(cfg["seed"]) + POINT_STRIDE * point


def _async_completion(schedule, seed: int) -> float | None:
    trace = run(schedule, SimConfig(seed=seed, record_trace=False))
    return trace.completion_time


def _sync_completion(schedule, seed: int) -> float | None:
    cfgrun = SimConfig(protocol="sync-push-pull", seed=seed, record_trace=False)
    return run(schedule, cfgrun).completion_time


def _group(rows: list[dict], key: str) -> dict:
    out: dict = {}
    for r in rows:
        out.setdefault(r[key], []).append(r)
    return out


def _skipped_points(cfg: dict, by_point: dict, build) -> list[dict]:
    """Notes for (n, rho) grid cells that produced no rows.

    The reason is re-derived from the config by attempting the same
    construction the runner attempted, so it survives a raw-CSV round trip.
    """
    checks = []
    point = 0
    for n in cfg["ns"]:
        for rho in cfg["rhos"]:
            if point not in by_point:
                try:
                    build(int(n), float(rho), _point_base(cfg, point))
                    reason = "no rows recorded"
                except ValueError as err:
                    reason = str(err)
                checks.append(
                    {
                        "check": "point-skipped",
                        "point": point,
                        "n": int(n),
                        "rho": float(rho),
                        "reason": reason,
                        "pass": None,
                    }
                )
            point += 1
    return checks


# ---------------------------------------------------------------------------
# coverage: completions vs. the two summed-rate bounds


_COVERAGE_DEFAULTS = {
    "trials": 1000,
    "seed": 20260814,
    "c": 2.0,
    "cap": DEFAULT_CAP,
    "arms": [
        {"family": "star", "n": 16},
        {"family": "expander", "n": 16},
        {"family": "absolute-lb", "n": 18, "rho": 1.0},
    ],
}


def _run_coverage(cfg: dict) -> list[dict]:
    trials = int(cfg["trials"])
    c = float(cfg["c"])
    cap = int(cfg["cap"])
    rows = []
    for point, arm in enumerate(cfg["arms"]):
        family = str(arm["family"])
        n = int(arm["n"])
        rho = None if arm.get("rho") is None else float(arm["rho"])
        if n > cap:
            continue  # the summary notes the skip; exact metrics stop at the cap
        base = _point_base(cfg, point)
        memo: dict = {}
        proto = None
        if family == "star":
            static = StaticSchedule(star_graph(n))
        elif family == "expander":
            static = StaticSchedule(expander_graph(n, seed=base))
        elif family == "absolute-lb":
            proto = absolute_lb_schedule(n, rho, seed=base)
        else:
            raise ValueError(f"unknown coverage family {family!r}")
        if proto is None:
            static_report = static_bound_report(static.graph_at(0), c=c, cap=cap, memo=memo)
        for trial in range(trials):
            s = base + trial
            if proto is None:
                trace = run(static, SimConfig(seed=s, record_trace=False))
                report = static_report
            else:
                recorder = RecordingSchedule(proto.clone(seed=s))
                trace = run(recorder, SimConfig(seed=s, record_trace=False))
                report = bound_report(
                    recorder.snapshots, c=c, cap=cap, extend_frozen_tail=True, memo=memo
                )
            comp = trace.completion_time
            dil, abso = report.diligence_bound, report.absolute_bound
            rows.append(
                {
                    "point": point,
                    "family": family,
                    "n": n,
                    "rho": rho,
                    "c": c,
                    "trial": trial,
                    "seed": s,
                    "completion": comp,
                    "bound_diligence": dil,
                    "bound_absolute": abso,
                    "within_diligence": int(comp is not None and dil is not None and comp <= dil),
                    "within_absolute": int(comp is not None and abso is not None and comp <= abso),
                }
            )
    return rows


def _summarize_coverage(cfg: dict, rows: list[dict]):
    by_point = _group(rows, "point")
    summary, checks = [], []
    for point, arm in enumerate(cfg["arms"]):
        family = str(arm["family"])
        n = int(arm["n"])
        sub = by_point.get(point, [])
        if not sub:
            checks.append(
                {
                    "check": "coverage-arm-skipped",
                    "point": point,
                    "family": family,
                    "n": n,
                    "reason": f"n={n} exceeds the exact-metric cap {int(cfg['cap'])}",
                    "pass": None,
                }
            )
            continue
        trials = len(sub)
        target = 1.0 - float(n) ** (-float(cfg["c"]))
        completions = [r["completion"] for r in sub]
        fractions = {}
        for kind in ("diligence", "absolute"):
            hits = sum(r[f"within_{kind}"] for r in sub)
            frac = hits / trials
            lo, _hi = wilson_interval(hits, trials)
            slack = frac - lo
            fractions[kind] = frac
            checks.append(
                {
                    "check": f"coverage-{kind}",
                    "point": point,
                    "family": family,
                    "n": n,
                    "trials": trials,
                    "fraction": frac,
                    "target": target,
                    "wilson_slack": slack,
                    "z": WILSON_Z,
                    "pass": frac >= target - slack,
                }
            )
        summary.append(
            {
                "point": point,
                "family": family,
                "n": n,
                "rho": sub[0]["rho"],
                "trials": trials,
                "completed": sum(1 for v in completions if v is not None),
                "median_completion": _median(completions),
                "max_completion": max((v for v in completions if v is not None), default=None),
                "bound_diligence_max": max(
                    (r["bound_diligence"] for r in sub if r["bound_diligence"] is not None),
                    default=None,
                ),
                "bound_absolute_max": max(
                    (r["bound_absolute"] for r in sub if r["bound_absolute"] is not None),
                    default=None,
                ),
                "fraction_diligence": fractions["diligence"],
                "fraction_absolute": fractions["absolute"],
                "target": target,
            }
        )
    columns = (
        "point",
        "family",
        "n",
        "rho",
        "trials",
        "completed",
        "median_completion",
        "max_completion",
        "bound_diligence_max",
        "bound_absolute_max",
        "fraction_diligence",
        "fraction_absolute",
        "target",
    )
    return columns, summary, checks


# ---------------------------------------------------------------------------
# absolute-scaling: bridged-family median vs n over the crossing-rate scale


_ABSOLUTE_DEFAULTS = {
    "trials": 1000,
    "seed": 20260814,
    "ns": [40, 80, 160],
    "rhos": [1.0, 0.5, 0.25],
    "r2_threshold": 0.9,
    "doubling_tolerance": 1.5,
}


def _run_absolute_scaling(cfg: dict) -> list[dict]:
    trials = int(cfg["trials"])
    rows = []
    point = 0
    for n in cfg["ns"]:
        for rho in cfg["rhos"]:
            base = _point_base(cfg, point)
            try:
                proto = absolute_lb_schedule(int(n), float(rho), seed=base)
            except ValueError:
                point += 1  # infeasible grid point; the summary notes the skip
                continue
            g0 = proto.clone(seed=base).graph_at(0, proto.default_initial)
            rho_bar = float(absolute_diligence(g0)[0])
            for trial in range(trials):
                s = base + trial
                rows.append(
                    {
                        "point": point,
                        "n": int(n),
                        "rho": float(rho),
                        "delta": int(proto.delta),
                        "rho_bar": rho_bar,
                        "trial": trial,
                        "seed": s,
                        "completion": _async_completion(proto.clone(seed=s), s),
                    }
                )
            point += 1
    return rows


def _summarize_absolute_scaling(cfg: dict, rows: list[dict]):
    by_point = _group(rows, "point")
    summary = []
    for point in sorted(by_point):
        sub = by_point[point]
        first = sub[0]
        completions = [r["completion"] for r in sub]
        summary.append(
            {
                "point": point,
                "n": first["n"],
                "rho": first["rho"],
                "delta": first["delta"],
                "rho_bar": first["rho_bar"],
                "trials": len(sub),
                "completed": sum(1 for v in completions if v is not None),
                "median_completion": _median(completions),
                "mean_completion": _mean(completions),
                "predictor_achieved": first["n"] / first["rho_bar"],
                "predictor_requested": first["n"] / first["rho"],
            }
        )
    checks = []
    threshold = float(cfg["r2_threshold"])
    if len(summary) >= 2:
        fit_achieved = linear_fit(
            [s["predictor_achieved"] for s in summary],
            [s["median_completion"] for s in summary],
        )
        checks.append(
            {
                "check": "median-linear-in-achieved-ratio",
                "predictor": "n/rho_bar",
                **fit_achieved,
                "threshold": threshold,
                "pass": fit_achieved["r2"] >= threshold,
            }
        )
        fit_requested = linear_fit(
            [s["predictor_requested"] for s in summary],
            [s["median_completion"] for s in summary],
        )
        checks.append(
            {
                "check": "median-linear-in-requested-ratio",
                "predictor": "n/rho",
                **fit_requested,
                "note": (
                    "recorded only: requested rho 1.0 and 0.5 build the same "
                    "even-degree graph, so distinct x share one median"
                ),
                "pass": None,
            }
        )
    else:
        checks.append(
            {
                "check": "median-linear-in-achieved-ratio",
                "reason": "fewer than two feasible points",
                "pass": None,
            }
        )
    tol = float(cfg["doubling_tolerance"])
    for rho in cfg["rhos"]:
        pts = sorted((s for s in summary if s["rho"] == float(rho)), key=lambda s: s["n"])
        ratios = [
            b["median_completion"] / a["median_completion"]
            for a, b in zip(pts, pts[1:])
            if b["n"] == 2 * a["n"]
        ]
        checks.append(
            {
                "check": "median-doubles-with-n",
                "rho": float(rho),
                "ratios": ratios,
                "tolerance": tol,
                "pass": all(2.0 / tol <= r <= 2.0 * tol for r in ratios),
            }
        )
    checks.extend(
        _skipped_points(cfg, by_point, lambda n, rho, base: absolute_lb_schedule(n, rho, seed=base))
    )
    columns = (
        "point",
        "n",
        "rho",
        "delta",
        "rho_bar",
        "trials",
        "completed",
        "median_completion",
        "mean_completion",
        "predictor_achieved",
        "predictor_requested",
    )
    return columns, summary, checks


# ---------------------------------------------------------------------------
# diligence-scaling: low-diligence family sweep + forward-push layer moment


_DILIGENCE_DEFAULTS = {
    "trials": 1000,
    "seed": 20260814,
    "ns": [48, 96, 192],
    "rhos": [1.0, 0.5, 0.25],
    "r2_threshold": 0.8,
    "monotone_tolerance": 0.05,
    "forward_points": [[3, 4], [4, 4], [5, 8]],
    "forward_trials": 1000,
}


def _run_diligence_scaling(cfg: dict) -> list[dict]:
    trials = int(cfg["trials"])
    rows = []
    point = 0
    for n in cfg["ns"]:
        for rho in cfg["rhos"]:
            base = _point_base(cfg, point)
            try:
                proto = diligence_lb_schedule(int(n), float(rho), seed=base)
            except ValueError:
                point += 1  # infeasible grid point; the summary notes the skip
                continue
            for trial in range(trials):
                s = base + trial
                rows.append(
                    {
                        "point": point,
                        "arm": "completion",
                        "n": int(n),
                        "rho": float(rho),
                        "k": int(proto.k),
                        "delta": int(proto.delta),
                        "trial": trial,
                        "seed": s,
                        "completion": _async_completion(proto.clone(seed=s), s),
                        "layer_count": None,
                    }
                )
            point += 1
    for k, delta in cfg["forward_points"]:
        base = _point_base(cfg, point)
        graph, layers = bipartite_string(int(k), int(delta))
        last = layers.layer_of == int(k)
        for trial in range(int(cfg["forward_trials"])):
            s = base + trial
            trace = run_forward_2push(
                graph, layers, SimConfig(protocol="forward-2-push", seed=s, horizon=1.0)
            )
            count = int(np.count_nonzero(trace.replay_informed().astype(bool) & last))
            rows.append(
                {
                    "point": point,
                    "arm": "forward",
                    "n": graph.n,
                    "rho": None,
                    "k": int(k),
                    "delta": int(delta),
                    "trial": trial,
                    "seed": s,
                    "completion": None,
                    "layer_count": count,
                }
            )
        point += 1
    return rows


def _summarize_diligence_scaling(cfg: dict, rows: list[dict]):
    by_point = _group(rows, "point")
    summary, moment_checks = [], []
    scaling = []
    for point in sorted(by_point):
        sub = by_point[point]
        first = sub[0]
        entry = {
            "point": point,
            "arm": first["arm"],
            "n": first["n"],
            "rho": first["rho"],
            "k": first["k"],
            "delta": first["delta"],
            "trials": len(sub),
            "median_completion": None,
            "predictor_proof": None,
            "predictor_statement": None,
            "mean_layer_count": None,
            "moment_bound": None,
        }
        if first["arm"] == "completion":
            entry["median_completion"] = _median(r["completion"] for r in sub)
            entry["predictor_proof"] = first["n"] * first["rho"] / first["k"]
            entry["predictor_statement"] = first["n"] / (first["rho"] * first["k"])
            scaling.append(entry)
        else:
            counts = [r["layer_count"] for r in sub]
            mean = _mean(counts)
            entry["mean_layer_count"] = mean
            entry["moment_bound"] = (2.0 ** first["k"] / math.factorial(first["k"])) * first[
                "delta"
            ]
            se = statistics.pstdev(counts) / math.sqrt(len(counts))
            moment_checks.append(
                {
                    "check": "forward-layer-moment",
                    "k": first["k"],
                    "delta": first["delta"],
                    "trials": len(sub),
                    "mean": mean,
                    "bound": entry["moment_bound"],
                    "stderr": se,
                    "pass": mean <= entry["moment_bound"] + 3.0 * se,
                }
            )
        summary.append(entry)

    threshold = float(cfg["r2_threshold"])
    checks = []
    if len(scaling) >= 2:
        fit_proof = linear_fit(
            [s["predictor_proof"] for s in scaling],
            [s["median_completion"] for s in scaling],
        )
        checks.append(
            {
                "check": "median-linear-in-rate-ratio",
                "predictor": "n*rho/k",
                **fit_proof,
                "threshold": threshold,
                "pass": fit_proof["r2"] >= threshold,
            }
        )
        tol = float(cfg["monotone_tolerance"])
        pooled: dict[float, list[float]] = {}
        for s in scaling:
            pooled.setdefault(s["predictor_proof"], []).append(s["median_completion"])
        seq = [float(statistics.median(pooled[x])) for x in sorted(pooled)]
        checks.append(
            {
                "check": "median-monotone-in-rate-ratio",
                "predictor": "n*rho/k",
                "pooled_medians": seq,
                "tolerance": tol,
                "pass": all(b >= a * (1.0 - tol) for a, b in zip(seq, seq[1:])),
            }
        )
        fit_statement = linear_fit(
            [s["predictor_statement"] for s in scaling],
            [s["median_completion"] for s in scaling],
        )
        checks.append(
            {
                "check": "median-linear-in-stated-ratio",
                "predictor": "n/(rho*k)",
                **fit_statement,
                "note": "recorded only; the rate-ratio predictor explains the data",
                "pass": None,
            }
        )
        slowest = max(scaling, key=lambda s: s["median_completion"])
        checks.append(
            {
                "check": "slowest-at-largest-ratio",
                "predictor": "n*rho/k",
                "slowest_point": slowest["point"],
                "matches": slowest["predictor_proof"]
                == max(s["predictor_proof"] for s in scaling),
                "pass": None,
            }
        )
    else:
        checks.append(
            {
                "check": "median-linear-in-rate-ratio",
                "reason": "fewer than two feasible points",
                "pass": None,
            }
        )
    checks.extend(moment_checks)
    checks.extend(
        _skipped_points(cfg, by_point, lambda n, rho, base: diligence_lb_schedule(n, rho, seed=base))
    )
    columns = (
        "point",
        "arm",
        "n",
        "rho",
        "k",
        "delta",
        "trials",
        "median_completion",
        "predictor_proof",
        "predictor_statement",
        "mean_layer_count",
        "moment_bound",
    )
    return columns, summary, checks


# ---------------------------------------------------------------------------
# dichotomy: sync vs async on the moving star and the bridged cliques


_DICHOTOMY_DEFAULTS = {
    "trials": 1000,
    "seed": 20260814,
    "sync_star_ns": [16, 64, 256],
    "sweep_ns": [16, 32, 64, 128],
    "tail_n": 1024,
    "tail_ks": [4, 6, 8],
    "bridge_n": 64,
    "r2_threshold": 0.9,
    "added_slack": 0.05,
}


def _run_dichotomy(cfg: dict) -> list[dict]:
    trials = int(cfg["trials"])
    rows = []
    point = 0

    def sweep(arm, n, value_of):
        nonlocal point
        base = _point_base(cfg, point)
        for trial in range(trials):
            s = base + trial
            rows.append(
                {"point": point, "arm": arm, "n": int(n), "trial": trial, "seed": s,
                 "value": value_of(s)}
            )
        point += 1

    for n in cfg["sync_star_ns"]:
        proto = dynamic_star_schedule(int(n))
        sweep("star-sync", n, lambda s, p=proto: _sync_completion(p.clone(seed=s), s))
    for n in cfg["sweep_ns"]:
        proto = dynamic_star_schedule(int(n))
        sweep("star-async", n, lambda s, p=proto: _async_completion(p.clone(seed=s), s))
    for n in cfg["sweep_ns"]:
        sched = two_clique_schedule(int(n))
        sweep("two-clique-async", n, lambda s, g=sched: _async_completion(g, s))
    for n in cfg["sweep_ns"]:
        sched = two_clique_schedule(int(n))
        sweep("two-clique-sync", n, lambda s, g=sched: _sync_completion(g, s))
    proto = dynamic_star_schedule(int(cfg["tail_n"]))
    sweep("star-async-tail", cfg["tail_n"], lambda s: _async_completion(proto.clone(seed=s), s))

    bn = int(cfg["bridge_n"])
    bridge_sched = two_clique_schedule(bn)

    def bridge_quiet(s: int) -> float:
        trace = run(bridge_sched, SimConfig(seed=s, horizon=1.0, record_trace=True))
        a, b = np.asarray(trace.callers), np.asarray(trace.callees)
        across = ((a == 0) & (b == bn)) | ((a == bn) & (b == 0))
        return 0.0 if bool(np.any(across & (np.asarray(trace.times) < 1.0))) else 1.0

    sweep("bridge-quiet", bn, bridge_quiet)
    return rows


def _summarize_dichotomy(cfg: dict, rows: list[dict]):
    by_point = _group(rows, "point")
    summary = []
    for point in sorted(by_point):
        sub = by_point[point]
        values = [r["value"] for r in sub]
        summary.append(
            {
                "point": point,
                "arm": sub[0]["arm"],
                "n": sub[0]["n"],
                "trials": len(sub),
                "median_value": _median(values),
                "mean_value": _mean(values),
                "q90_value": _quantile(values, 0.9),
            }
        )
    by_arm = _group(summary, "arm")
    raw_by_point = by_point
    checks = []
    threshold = float(cfg["r2_threshold"])

    for s in by_arm.get("star-sync", []):
        sub = raw_by_point[s["point"]]
        exact = sum(1 for r in sub if r["value"] == float(r["n"]))
        checks.append(
            {
                "check": "sync-star-exact-rounds",
                "n": s["n"],
                "trials": s["trials"],
                "exact": exact,
                "pass": exact == s["trials"],
            }
        )

    def fit_check(name, arm, transform, predictor, gate):
        pts = sorted(by_arm.get(arm, []), key=lambda s: s["n"])
        fit = linear_fit([transform(s["n"]) for s in pts], [s["median_value"] for s in pts])
        checks.append(
            {
                "check": name,
                "arm": arm,
                "predictor": predictor,
                **fit,
                "threshold": threshold if gate else None,
                "pass": fit["r2"] >= threshold if gate else None,
            }
        )

    fit_check("async-star-log-fit", "star-async", math.log, "log n", True)
    fit_check("two-clique-linear-fit", "two-clique-async", float, "n", True)
    fit_check("two-clique-sync-log-fit", "two-clique-sync", math.log, "log n", False)

    slack = float(cfg["added_slack"])
    tail_points = by_arm.get("star-async-tail", [])
    for s in tail_points:
        sub = raw_by_point[s["point"]]
        for k in cfg["tail_ks"]:
            k = int(k)
            exceed = sum(1 for r in sub if r["value"] is None or r["value"] > 2.0 * k)
            freq = exceed / s["trials"]
            _lo, hi = wilson_interval(exceed, s["trials"])
            bound = math.exp(-k / 2.0) + math.exp(-float(k))
            checks.append(
                {
                    "check": "async-star-tail",
                    "n": s["n"],
                    "k": k,
                    "trials": s["trials"],
                    "frequency": freq,
                    "bound": bound,
                    "added_slack": slack,
                    "wilson_upper": hi,
                    "pass": freq <= bound + slack,
                }
            )

    for s in by_arm.get("bridge-quiet", []):
        sub = raw_by_point[s["point"]]
        hits = sum(1 for r in sub if r["value"] == 1.0)
        lo, hi = wilson_interval(hits, s["trials"])
        oracle = math.exp(-(1.0 + 1.0 / s["n"]))
        checks.append(
            {
                "check": "bridge-quiet-first-interval",
                "n": s["n"],
                "trials": s["trials"],
                "frequency": hits / s["trials"],
                "oracle": oracle,
                "wilson_low": lo,
                "wilson_high": hi,
                "z": WILSON_Z,
                "pass": lo <= oracle <= hi,
            }
        )

    columns = ("point", "arm", "n", "trials", "median_value", "mean_value", "q90_value")
    return columns, summary, checks


# ---------------------------------------------------------------------------
# phase-times: moving-star first/second phase and the leaf-contact window


_PHASE_DEFAULTS = {
    "trials": 1000,
    "seed": 20260814,
    "n": 1024,
    "ks": [4, 6, 8],
    "c": 2.0 / 3.0,
    "leaf_trials": 400,
    "added_slack": 0.05,
}


def _run_phase_times(cfg: dict) -> list[dict]:
    n = int(cfg["n"])
    rows = []
    proto = dynamic_star_schedule(n)
    threshold = math.ceil(n / math.log(n))
    base = _point_base(cfg, 0)
    for trial in range(int(cfg["trials"])):
        s = base + trial
        trace = run(proto.clone(seed=s), SimConfig(seed=s))
        rows.append(
            {
                "point": 0,
                "arm": "phases",
                "n": n,
                "param": float(threshold),
                "trial": trial,
                "seed": s,
                "t_first": trace.first_time_count_at_least(threshold),
                "t_second": trace.completion_time,
                "count": None,
            }
        )
    c = float(cfg["c"])
    base = _point_base(cfg, 1)
    for trial in range(int(cfg["leaf_trials"])):
        s = base + trial
        trace = run(proto.clone(seed=s), SimConfig(seed=s, horizon=1.0))
        callers = np.asarray(trace.callers)
        times = np.asarray(trace.times)
        _leaf, first_idx = np.unique(callers, return_index=True)
        first_times = times[first_idx[_leaf != 0]]  # vertex 0 is the segment-0 center
        count = int(np.count_nonzero((first_times >= c) & (first_times < 1.0)))
        rows.append(
            {
                "point": 1,
                "arm": "leaf-contacts",
                "n": n,
                "param": c,
                "trial": trial,
                "seed": s,
                "t_first": None,
                "t_second": None,
                "count": count,
            }
        )
    return rows


def _summarize_phase_times(cfg: dict, rows: list[dict]):
    by_arm = _group(rows, "arm")
    checks, summary = [], []
    slack = float(cfg["added_slack"])
    n = int(cfg["n"])

    phases = by_arm.get("phases", [])
    firsts = [r["t_first"] for r in phases]
    seconds = [r["t_second"] for r in phases]
    gaps = [
        None if (f is None or s is None) else s - f
        for f, s in zip(firsts, seconds)
    ]
    summary.append(
        {
            "arm": "phases",
            "n": n,
            "param": phases[0]["param"] if phases else None,
            "trials": len(phases),
            "median_first": _median(firsts),
            "median_second": _median(seconds),
            "median_gap": _median(gaps),
            "mean_count": None,
        }
    )
    for k in cfg["ks"]:
        k = int(k)
        over_first = sum(1 for v in firsts if v is None or v > k)
        over_gap = sum(1 for v in gaps if v is None or v > k)
        for name, over, bound in (
            ("first-phase-tail", over_first, math.exp(-k / 2.0)),
            ("second-phase-tail", over_gap, math.exp(-float(k))),
        ):
            freq = over / len(phases)
            _lo, hi = wilson_interval(over, len(phases))
            checks.append(
                {
                    "check": name,
                    "n": n,
                    "k": k,
                    "trials": len(phases),
                    "frequency": freq,
                    "bound": bound,
                    "added_slack": slack,
                    "wilson_upper": hi,
                    "pass": freq <= bound + slack,
                }
            )

    leaves = by_arm.get("leaf-contacts", [])
    counts = [r["count"] for r in leaves]
    c = float(cfg["c"])
    expected = n * (math.exp(-c) - math.exp(-1.0))
    mean = _mean(counts)
    se = statistics.pstdev(counts) / math.sqrt(len(counts))
    summary.append(
        {
            "arm": "leaf-contacts",
            "n": n,
            "param": c,
            "trials": len(leaves),
            "median_first": None,
            "median_second": None,
            "median_gap": None,
            "mean_count": mean,
        }
    )
    checks.append(
        {
            "check": "leaf-contact-mean",
            "n": n,
            "c": c,
            "trials": len(leaves),
            "mean": mean,
            "expected": expected,
            "stderr": se,
            "pass": abs(mean - expected) <= 3.0 * se,
        }
    )
    columns = (
        "arm",
        "n",
        "param",
        "trials",
        "median_first",
        "median_second",
        "median_gap",
        "mean_count",
    )
    return columns, summary, checks


# ---------------------------------------------------------------------------
# Registry


def _register(name, defaults, columns, parsers, runner, summarizer):
    EXPERIMENTS[name] = _Experiment(defaults, tuple(columns), tuple(parsers), runner, summarizer)


_register(
    "coverage",
    _COVERAGE_DEFAULTS,
    (
        "point", "family", "n", "rho", "c", "trial", "seed", "completion",
        "bound_diligence", "bound_absolute", "within_diligence", "within_absolute",
    ),
    (int, _cell_str, int, _opt_float, float, int, int, _opt_float,
     _opt_int, _opt_int, int, int),
    _run_coverage,
    _summarize_coverage,
)

_register(
    "absolute-scaling",
    _ABSOLUTE_DEFAULTS,
    ("point", "n", "rho", "delta", "rho_bar", "trial", "seed", "completion"),
    (int, int, float, int, float, int, int, _opt_float),
    _run_absolute_scaling,
    _summarize_absolute_scaling,
)

_register(
    "diligence-scaling",
    _DILIGENCE_DEFAULTS,
    ("point", "arm", "n", "rho", "k", "delta", "trial", "seed", "completion", "layer_count"),
    (int, _cell_str, int, _opt_float, int, int, int, int, _opt_float, _opt_int),
    _run_diligence_scaling,
    _summarize_diligence_scaling,
)

_register(
    "dichotomy",
    _DICHOTOMY_DEFAULTS,
    ("point", "arm", "n", "trial", "seed", "value"),
    (int, _cell_str, int, int, int, _opt_float),
    _run_dichotomy,
    _summarize_dichotomy,
)

_register(
    "phase-times",
    _PHASE_DEFAULTS,
    ("point", "arm", "n", "param", "trial", "seed", "t_first", "t_second", "count"),
    (int, _cell_str, int, float, int, int, _opt_float, _opt_float, _opt_int),
    _run_phase_times,
    _summarize_phase_times,
)
