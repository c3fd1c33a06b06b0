"""Compare the compiled and pure-Python DP sweep kernels.

Builds stage programs for generated instances once, then times only the
sweep call with each backend.  Usage::

    python benchmarks/bench_kernels.py --aisles 5 15 30 --items 60 --instances 10
"""
import argparse
import csv
import sys
import time
from statistics import median

from pickroute import kernel
from pickroute import solver_single, solver_two
from pickroute.harness import generate_instance, instance_seed

ALGORITHMS = {1: [("single-original", "original"), ("single-modified", "modified")],
              2: [("two-original", "original"), ("two-mod1", "mod1"), ("two-mod2", "mod2")]}


def build(inst, variant):
    if inst.blocks == 1:
        return solver_single.build_program(inst, variant)
    return solver_two.build_program(inst, variant)


def time_sweep(program, backend, repeats):
    b = program.bundle
    sweep = kernel.get_sweep(backend)
    args = (b.ptr, b.nxt, b.act, b.rank, program.stage_base, program.stage_ctx, program.cost,
            b.n_states, b.n_states - 2)
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        sweep(*args)
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--blocks", type=int, nargs="+", default=[1, 2])
    p.add_argument("--aisles", type=int, nargs="+", default=[5, 10, 20, 30])
    p.add_argument("--items", type=int, default=60)
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write the table to this file")
    args = p.parse_args(argv)

    if "cython" not in kernel.BACKENDS:
        print("compiled kernel not built; only the Python backend is available", file=sys.stderr)
        return 1

    rows = []
    for blocks in args.blocks:
        for m in args.aisles:
            times = {(a, be): [] for a, _ in ALGORITHMS[blocks] for be in ("python", "cython")}
            for i in range(args.instances):
                inst = generate_instance(blocks, m, args.items,
                                         instance_seed(args.seed, blocks, m, args.items, i))
                for algo, variant in ALGORITHMS[blocks]:
                    program = build(inst, variant)
                    for be in ("python", "cython"):
                        times[algo, be].append(time_sweep(program, be, args.repeats))
            for algo, _ in ALGORITHMS[blocks]:
                py = median(times[algo, "python"]) / 1e3
                cy = median(times[algo, "cython"]) / 1e3
                rows.append([algo, m, args.items, f"{py:.1f}", f"{cy:.1f}", f"{py / cy:.1f}"])

    header = ["algorithm", "m", "items", "python_us", "cython_us", "ratio"]
    widths = [max(len(str(r[k])) for r in rows + [header]) for k in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(v).rjust(w) for v, w in zip(r, widths)))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            csv.writer(fh).writerows([header] + rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
