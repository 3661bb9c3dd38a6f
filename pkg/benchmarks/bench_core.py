"""Compiled core versus pure-Python fallback on the two hot paths.

Workloads:

* ``async``   -- full asynchronous push-pull runs on the two-clique and
                 dynamic-star families (event engine dominated);
* ``scan``    -- exact conductance + diligence subset scans on one
                 4-regular graph (bit-enumeration dominated).

Both implementations consume identical keyed draws, so beyond the timings
the script asserts the outputs agree event for event.

Usage: python benchmarks/bench_core.py [--repeats 3] [--n 256] [--scan-n 16]
"""

import argparse
import time
from contextlib import contextmanager

from dynrumor import _kernels
from dynrumor.generators import dynamic_star_schedule, expander_graph, two_clique_schedule
from dynrumor.metrics import conductance_exact, diligence_exact
from dynrumor.simulate import SimConfig, run

ENTRY_POINTS = ("conductance_scan", "diligence_scan", "async_segment", "rng_u64")


@contextmanager
def pinned(which: str):
    """Rebind the kernel entry points to one implementation."""
    impl = _kernels.get_kernels(which)
    saved = {name: getattr(_kernels, name) for name in ENTRY_POINTS}
    try:
        for name in ENTRY_POINTS:
            setattr(_kernels, name, getattr(impl, name))
        yield
    finally:
        for name, fn in saved.items():
            setattr(_kernels, name, fn)


def bench(fn, repeats: int):
    """Best wall time of ``repeats`` calls and the (stable) return value."""
    best = float("inf")
    value = None
    for _ in range(repeats):
        start = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - start)
    return best, value


def async_workload(n: int, trials: int):
    def body():
        out = []
        for family in (two_clique_schedule(n), dynamic_star_schedule(n)):
            for trial in range(trials):
                sched = family.clone(seed=trial)
                trace = run(sched, SimConfig(seed=trial, record_trace=False))
                out.append(trace.completion_time)
        return out

    return body


def scan_workload(n: int):
    g = expander_graph(n, seed=7)

    def body():
        phi, phi_cut = conductance_exact(g, cap=n)
        rho, rho_cut = diligence_exact(g, cap=n)
        return (phi, phi_cut, rho, rho_cut)

    return body


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3, help="best-of timing")
    parser.add_argument("--n", type=int, default=256, help="async family size")
    parser.add_argument("--trials", type=int, default=20, help="async runs per family")
    parser.add_argument("--scan-n", type=int, default=16, help="subset-scan graph size")
    args = parser.parse_args()

    if not _kernels.HAVE_COMPILED:
        print("compiled core unavailable; timing the pure-Python kernels only")

    workloads = [
        (f"async push-pull (n={args.n}, {2 * args.trials} runs)",
         async_workload(args.n, args.trials)),
        (f"exact metric scans (n={args.scan_n})", scan_workload(args.scan_n)),
    ]
    implementations = ["python"] + (["compiled"] if _kernels.HAVE_COMPILED else [])

    print(f"{'workload':44s} {'impl':9s} {'best [s]':>10s} {'speedup':>8s}")
    for label, body in workloads:
        baseline = None
        reference = None
        for impl in implementations:
            with pinned(impl):
                seconds, value = bench(body, args.repeats)
            if reference is None:
                baseline, reference = seconds, value
                speedup = ""
            else:
                assert value == reference, f"{label}: implementations disagree"
                speedup = f"{baseline / seconds:7.1f}x"
            print(f"{label:44s} {impl:9s} {seconds:10.4f} {speedup:>8s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
