"""Random instance generation, instrumented benchmark runs and summaries."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from statistics import mean
from typing import Iterable, Optional

import numpy as np

from . import ALGORITHMS, algorithms_for
from ._dp import run_program
from .geometry import Depot, Pick, PickInstance, WarehouseLayout
from . import solver_single, solver_two

SINGLE_SLOTS = 90
TWO_SLOTS = 45  # per subaisle; the middle cross-aisle sits halfway up each aisle

COMPARISONS = {
    1: [("single-original", "single-modified")],
    2: [("two-original", "two-mod1"), ("two-original", "two-mod2")],
}

RESULT_COLUMNS = ["algorithm", "m", "items", "seed", "length", "evals_vertical",
                  "evals_horizontal", "evals_combined", "stages", "runtime_ns"]


@dataclass
class ExperimentPlan:
    blocks: int = 1
    aisles: tuple = (5, 10, 15, 20, 25, 30)
    items: tuple = (30, 45, 60, 75, 90)
    instances: int = 100
    seed: int = 0
    slot_length: float = 1
    aisle_spacing: float = 1
    # the interpreted kernel matches the usual setting for these timings;
    # the compiled one is dominated by call overhead at this size
    backend: str = "python"
    repeats: int = 1
    algorithms: Optional[tuple] = None

    def __post_init__(self):
        self.aisles = tuple(self.aisles)
        self.items = tuple(self.items)
        if self.blocks not in (1, 2):
            raise ValueError("plan.blocks must be 1 or 2")
        if self.instances < 1 or self.repeats < 1:
            raise ValueError("plan.instances and plan.repeats must be >= 1")
        algos = algorithms_for(self.blocks)
        if self.algorithms is None:
            self.algorithms = algos
        self.algorithms = tuple(self.algorithms)
        bad = [a for a in self.algorithms if a not in algos]
        if bad:
            raise ValueError(f"plan.algorithms: {bad} do not apply to {self.blocks}-block layouts")
        capacity = slots_per_aisle(self.blocks)
        for m in self.aisles:
            for n in self.items:
                if n > m * capacity:
                    raise ValueError(f"{n} picks do not fit in {m} aisles")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentPlan":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown plan fields: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "ExperimentPlan":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def cells(self):
        for m in self.aisles:
            for n in self.items:
                yield m, n


@dataclass
class BenchRecord:
    algorithm: str
    m: int
    items: int
    seed: int
    length: float
    evals_vertical: int
    evals_horizontal: int
    evals_combined: int
    stages: int
    runtime_ns: int
    length_units: int = field(default=0, repr=False)
    precompute_ns: int = field(default=0, repr=False)

    @property
    def evaluations(self) -> int:
        return self.evals_vertical + self.evals_horizontal + self.evals_combined


def slots_per_aisle(blocks: int) -> int:
    return SINGLE_SLOTS if blocks == 1 else 2 * TWO_SLOTS


def instance_seed(plan_seed: int, blocks: int, m: int, items: int, index: int) -> int:
    """Independent 32-bit seed for one instance of a plan cell."""
    return int(np.random.SeedSequence([plan_seed, blocks, m, items, index]).generate_state(1)[0])


def generate_instance(blocks: int, m: int, items: int, seed: int, slot_length=1,
                      aisle_spacing=1) -> PickInstance:
    """Uniform picks without replacement; depot aisle uniform, front or back with equal odds."""
    capacity = m * slots_per_aisle(blocks)
    if items > capacity:
        raise ValueError(f"{items} picks exceed the {capacity} available slots")
    rng = np.random.default_rng(seed)
    if blocks == 1:
        layout = WarehouseLayout(1, m, SINGLE_SLOTS, slot_length, aisle_spacing)
    else:
        layout = WarehouseLayout(2, m, TWO_SLOTS, slot_length, aisle_spacing, slot_length)
    chosen = rng.choice(capacity, size=items, replace=False)
    picks = []
    for c in chosen.tolist():
        aisle, rest = divmod(c, slots_per_aisle(blocks))
        if blocks == 1:
            picks.append(Pick(aisle + 1, rest + 1))
        else:
            block, slot = divmod(rest, TWO_SLOTS)
            picks.append(Pick(aisle + 1, slot + 1, ("lower", "upper")[block]))
    depot = Depot(int(rng.integers(1, m + 1)), "front" if rng.random() < 0.5 else "back")
    return PickInstance(layout, depot, tuple(picks))


def _build(inst: PickInstance, algorithm: str):
    family, _, variant = algorithm.partition("-")
    if family == "single":
        return solver_single.build_program(inst, variant)
    return solver_two.build_program(inst, solver_two.degenerate_guard(inst, variant))


def bench_instance(inst: PickInstance, algorithms: Iterable[str], m: int, items: int, seed: int,
                   backend: Optional[str] = None, repeats: int = 1) -> list[BenchRecord]:
    """Solve one instance with every algorithm; only the DP sweep is timed."""
    out = []
    for algo in algorithms:
        program = _build(inst, algo)
        sols = [run_program(program, algo, backend, reconstruct=False) for _ in range(repeats)]
        sol = sols[0]
        c = sol.counters
        out.append(BenchRecord(algo, m, items, seed, float(sol.length), c["evals_vertical"],
                               c["evals_horizontal"], c["evals_combined"], c["stages"],
                               min(s.counters["runtime_ns"] for s in sols), sol.length_units,
                               program.precompute_ns))
    lengths = {r.length_units for r in out}
    if len(lengths) > 1:
        raise AssertionError(f"variants disagree on m={m} items={items} seed={seed}: "
                             + ", ".join(f"{r.algorithm}={r.length}" for r in out))
    return out


def _run_instance(args):
    plan, m, n, i = args
    seed = instance_seed(plan.seed, plan.blocks, m, n, i)
    inst = generate_instance(plan.blocks, m, n, seed, plan.slot_length, plan.aisle_spacing)
    return bench_instance(inst, plan.algorithms, m, n, seed, plan.backend, plan.repeats)


def run_suite(plan: ExperimentPlan, jobs: int = 1) -> list[BenchRecord]:
    """Run every cell of the plan; any disagreement between variants aborts.

    Instances are executed round-robin over the cells so that slow drift in
    machine speed spreads evenly over all aisle counts instead of biasing
    whichever cells happen to run last.  Records come back in cell order.
    """
    cells = list(plan.cells())
    work = [(plan, m, n, i) for i in range(plan.instances) for m, n in cells]
    if jobs <= 1:
        results = list(map(_run_instance, work))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_instance, work, chunksize=len(cells)))
    by_key = {(m, n, i): recs for (_, m, n, i), recs in zip(work, results)}
    return [r for m, n in cells for i in range(plan.instances) for r in by_key[m, n, i]]


# --------------------------------------------------------------------------
# summaries


def records_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in records:
        d = asdict(r)
        w.writerow([d[c] if c != "length" else repr(r.length) for c in RESULT_COLUMNS])
    return buf.getvalue()


def read_records(text: str) -> list[BenchRecord]:
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        out.append(BenchRecord(row["algorithm"], int(row["m"]), int(row["items"]), int(row["seed"]),
                               float(row["length"]), *(int(row[c]) for c in RESULT_COLUMNS[5:])))
    return out


def _group(records, key):
    groups: dict = {}
    for r in records:
        groups.setdefault(key(r), []).append(r)
    return groups


def linear_fit(xs, ys) -> tuple[float, float, float]:
    """Least-squares slope, intercept and R^2."""
    x, y = np.asarray(xs, float), np.asarray(ys, float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot else 1.0
    return float(slope), float(intercept), r2


@dataclass
class Summary:
    speedups: dict  # (orig, mod) -> {(m, items): speedup}
    eval_ratios: dict  # (orig, mod) -> {m: ratio}
    runtime_series: dict  # algorithm -> {m: mean runtime ns}
    fits: dict  # algorithm -> (slope, intercept, r2)
    overall_speedup: dict  # (orig, mod) -> mean speedup

    def files(self) -> dict[str, str]:
        out = {}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["comparison", "m", "items", "speedup"])
        for (o, mo), cells in self.speedups.items():
            for (m, n), s in sorted(cells.items()):
                w.writerow([f"{o}/{mo}", m, n, f"{s:.4f}"])
        out["speedup.csv"] = buf.getvalue()
        for (o, mo), cells in self.speedups.items():
            ms = sorted({m for m, _ in cells})
            ns = sorted({n for _, n in cells})
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["items", *ms, "average"])
            for n in ns:
                row = [cells[m, n] for m in ms]
                w.writerow([n, *(f"{v:.2f}" for v in row), f"{mean(row):.2f}"])
            cols = [mean(cells[m, n] for n in ns) for m in ms]
            w.writerow(["average", *(f"{v:.2f}" for v in cols), f"{self.overall_speedup[o, mo]:.2f}"])
            out[f"speedup_table_{mo}.csv"] = buf.getvalue()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["comparison", "m", "eval_ratio"])
        for (o, mo), by_m in self.eval_ratios.items():
            for m, r in sorted(by_m.items()):
                w.writerow([f"{o}/{mo}", m, f"{r:.6f}"])
        out["eval_ratio.csv"] = buf.getvalue()
        for algo, series in self.runtime_series.items():
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["m", "mean_runtime_ns"])
            for m, t in sorted(series.items()):
                w.writerow([m, f"{t:.1f}"])
            out[f"runtime_{algo}.csv"] = buf.getvalue()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["algorithm", "slope_ns_per_aisle", "intercept_ns", "r2"])
        for algo, (a, b, r2) in self.fits.items():
            w.writerow([algo, f"{a:.2f}", f"{b:.2f}", f"{r2:.5f}"])
        out["runtime_fit.csv"] = buf.getvalue()
        return out


def summarize(records: list[BenchRecord]) -> Summary:
    """Speedups (ratio of mean runtimes), evaluation ratios, runtime series and linear fits."""
    if not records:
        raise ValueError("no records to summarize")
    algos = [a for a in ALGORITHMS if any(r.algorithm == a for r in records)]
    by_cell = _group(records, lambda r: (r.algorithm, r.m, r.items))
    by_m = _group(records, lambda r: (r.algorithm, r.m))
    speedups, eval_ratios, overall = {}, {}, {}
    for blocks in (1, 2):
        for o, mo in COMPARISONS[blocks]:
            if o not in algos or mo not in algos:
                continue
            cells = {}
            for (a, m, n), rs in by_cell.items():
                if a == o and (mo, m, n) in by_cell:
                    cells[m, n] = (mean(r.runtime_ns for r in rs)
                                   / mean(r.runtime_ns for r in by_cell[mo, m, n]))
            speedups[o, mo] = cells
            overall[o, mo] = mean(cells.values())
            eval_ratios[o, mo] = {
                m: sum(r.evaluations for r in rs) / sum(r.evaluations for r in by_m[mo, m])
                for (a, m), rs in by_m.items() if a == o and (mo, m) in by_m}
    series = {a: {m: mean(r.runtime_ns for r in rs) for (b, m), rs in by_m.items() if b == a}
              for a in algos}
    fits = {}
    for a, s in series.items():
        if len(s) >= 2:
            ms = sorted(s)
            fits[a] = linear_fit(ms, [s[m] for m in ms])
    return Summary(speedups, eval_ratios, series, fits, overall)


def write_outputs(records: list[BenchRecord], out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "results.csv"]
    paths[0].write_text(records_csv(records))
    for name, text in summarize(records).files().items():
        p = out / name
        p.write_text(text)
        paths.append(p)
    return paths
