import csv
import io

import numpy as np
import pytest

from pickroute.harness import (ExperimentPlan, generate_instance, instance_seed, linear_fit,
                               read_records, records_csv, run_suite, summarize, write_outputs)

SMALL = dict(aisles=(2, 4), items=(3, 6), instances=3, seed=11)


def strip_runtime(text):
    rows = list(csv.reader(io.StringIO(text)))
    keep = [i for i, name in enumerate(rows[0]) if name != "runtime_ns"]
    return [[r[i] for i in keep] for r in rows]


def test_generator_is_seeded():
    a = generate_instance(2, 5, 40, seed=3)
    assert a == generate_instance(2, 5, 40, seed=3)
    assert a != generate_instance(2, 5, 40, seed=4)
    assert len(a.picks) == len(set(a.picks)) == 40
    assert a.layout.slots_per_subaisle == 45
    assert a.layout.cross_aisle_width == a.layout.slot_length


def test_generator_rejects_overfull():
    with pytest.raises(ValueError):
        generate_instance(1, 1, 91, seed=0)


def test_instance_seeds_differ_per_cell():
    seeds = {instance_seed(0, b, m, n, i) for b in (1, 2) for m in (5, 10) for n in (30, 60)
             for i in range(5)}
    assert len(seeds) == 40


def test_plan_validation():
    with pytest.raises(ValueError, match="unknown plan fields"):
        ExperimentPlan.from_dict({"blocks": 1, "speed": 3})
    with pytest.raises(ValueError):
        ExperimentPlan(blocks=1, algorithms=("two-mod2",))
    with pytest.raises(ValueError):
        ExperimentPlan(blocks=1, aisles=(1,), items=(100,))


@pytest.mark.parametrize("blocks", [1, 2])
def test_suite_is_reproducible(blocks):
    plan = ExperimentPlan(blocks=blocks, **SMALL)
    first, second = run_suite(plan), run_suite(plan)
    assert strip_runtime(records_csv(first)) == strip_runtime(records_csv(second))
    assert summarize(first).files()["eval_ratio.csv"] == summarize(second).files()["eval_ratio.csv"]
    n_algos = 2 if blocks == 1 else 3
    assert len(first) == 2 * 2 * 3 * n_algos


def test_records_round_trip():
    records = run_suite(ExperimentPlan(blocks=1, **SMALL))
    again = read_records(records_csv(records))
    assert [(r.algorithm, r.seed, r.length, r.evaluations) for r in again] == \
        [(r.algorithm, r.seed, r.length, r.evaluations) for r in records]


def test_outputs(tmp_path):
    records = run_suite(ExperimentPlan(blocks=2, **SMALL))
    names = {p.name for p in write_outputs(records, tmp_path)}
    assert {"results.csv", "speedup.csv", "eval_ratio.csv", "runtime_fit.csv",
            "speedup_table_two-mod1.csv", "speedup_table_two-mod2.csv",
            "runtime_two-mod2.csv"} <= names
    table = list(csv.reader((tmp_path / "speedup_table_two-mod2.csv").open()))
    assert table[0] == ["items", "2", "4", "average"]
    assert table[-1][0] == "average"


def test_eval_ratio_uses_counters():
    records = run_suite(ExperimentPlan(blocks=1, **SMALL))
    ratios = summarize(records).eval_ratios["single-original", "single-modified"]
    for m, ratio in ratios.items():
        o = sum(r.evaluations for r in records if r.m == m and r.algorithm == "single-original")
        mo = sum(r.evaluations for r in records if r.m == m and r.algorithm == "single-modified")
        assert ratio == o / mo


def test_linear_fit():
    slope, intercept, r2 = linear_fit([1, 2, 3, 4], [3, 5, 7, 9])
    assert (slope, intercept) == pytest.approx((2, 1))
    assert r2 == pytest.approx(1)


def test_generator_ranges():
    inst = generate_instance(1, 5, 30, seed=1)
    assert len(set(inst.picks)) == 30
    assert all(1 <= p.aisle <= 5 and 1 <= p.slot <= 90 for p in inst.picks)


def test_generator_spreads_picks_evenly():
    m, per_instance, draws = 5, 20, 500
    counts = np.zeros(m)
    for seed in range(draws):
        for p in generate_instance(1, m, per_instance, seed=seed).picks:
            counts[p.aisle - 1] += 1
    n = per_instance * draws
    sigma = np.sqrt(n * (1 / m) * (1 - 1 / m))
    assert np.all(np.abs(counts - n / m) <= 3 * sigma)
