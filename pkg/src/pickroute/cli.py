"""Command-line interface: ``pickroute {solve,verify,gen,bench,tables}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import ALGORITHMS, algorithms_for, solve
from .geometry import InstanceError, dump_instance, instance_to_dict, load_instance
from .harness import ExperimentPlan, generate_instance, run_suite, write_outputs
from .oracle import MAX_REQUIRED, OracleTooLarge, oracle_optimal
from .states import VARIANTS, generate_transition_table

EXIT_DISAGREE = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Bad input file; reported on stderr with exit status 2."""


def _load(path):
    try:
        return load_instance(path)
    except InstanceError as exc:
        raise InputError(f"{path}: {exc}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    if not args.algo.startswith("single" if inst.blocks == 1 else "two"):
        print(f"error: {args.algo} does not apply to a {inst.blocks}-block layout", file=sys.stderr)
        return EXIT_INPUT
    sol = solve(inst, args.algo)
    json.dump(sol.to_json(), sys.stdout, indent=2 if args.pretty else None)
    sys.stdout.write("\n")
    return 0


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    scale = inst.layout.scale()
    results = {a: solve(inst, a).length_units for a in algorithms_for(inst.blocks)}
    try:
        results["oracle"] = oracle_optimal(inst)
    except OracleTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    shown = " ".join(f"{k}={float(scale.to_length(v)):g}" for k, v in results.items())
    if len(set(results.values())) == 1:
        length = scale.to_length(next(iter(results.values())))
        print(f"AGREE length={float(length):g}")
        return 0
    print(f"DISAGREE {shown}")
    return EXIT_DISAGREE


def cmd_gen(args) -> int:
    inst = generate_instance(args.blocks, args.aisles, args.items, args.seed)
    if args.out:
        dump_instance(inst, args.out)
    else:
        json.dump(instance_to_dict(inst), sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def cmd_bench(args) -> int:
    try:
        plan = ExperimentPlan.load(args.plan)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {args.plan}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    env_seed = os.environ.get("PICKROUTE_SEED")
    if env_seed:
        plan = replace(plan, seed=int(env_seed))
    records = run_suite(plan, jobs=args.jobs)
    for p in write_outputs(records, args.out):
        print(p)
    return 0


def cmd_tables(args) -> int:
    finals = {"all": (False, True), "intermediate": (False,), "final": (True,)}[args.stage]
    if "vertical" in args.variant or args.variant.endswith(("lower", "upper")):
        finals = (False,)  # vertical tables are the same at every stage
    tables = [generate_transition_table(args.variant, f, args.depot) for f in finals]
    lines = []
    for i, t in enumerate(tables):
        rows = t.to_csv().splitlines(keepends=True)
        lines += rows if i == 0 else rows[1:]
    sys.stdout.write("".join(lines))
    print(f"# evaluations per intermediate stage: {tables[0].evaluation_count}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pickroute", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance and print the solution as JSON")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGORITHMS, required=True)
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", help=f"compare all variants with the oracle (<= {MAX_REQUIRED - 1} picks)")
    s.add_argument("instance")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="write a random instance")
    s.add_argument("--blocks", type=int, choices=(1, 2), default=1)
    s.add_argument("--aisles", type=int, required=True)
    s.add_argument("--items", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output file (default: stdout)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="run an experiment plan and write CSV results")
    s.add_argument("--plan", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("tables", help="dump a generated transition table as CSV")
    s.add_argument("--variant", choices=VARIANTS, required=True)
    s.add_argument("--stage", choices=("all", "intermediate", "final"), default="all",
                   help="intermediate entries, closing entries, or both")
    s.add_argument("--depot", choices=("front", "middle", "back"), default="front")
    s.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
