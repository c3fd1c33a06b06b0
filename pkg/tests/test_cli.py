import csv
import io
import json

import pytest

from pickroute import oracle_optimal
from pickroute.cli import main
from pickroute.geometry import dump_instance


@pytest.fixture
def single_file(tmp_path, single_example):
    path = tmp_path / "single.json"
    dump_instance(single_example, path)
    return path


def test_solve(single_file, single_example, capsys):
    assert main(["solve", str(single_file), "--algo", "single-modified"]) == 0
    doc = json.loads(capsys.readouterr().out)
    optimum = single_example.layout.scale().to_length(oracle_optimal(single_example))
    assert doc["length"] == float(optimum)
    assert doc["walk"][0] == doc["walk"][-1] == "b1"
    assert doc["counters"]["stages"] == 3


def test_solve_wrong_family(single_file, capsys):
    assert main(["solve", str(single_file), "--algo", "two-mod2"]) == 2
    assert "1-block" in capsys.readouterr().err


def test_verify(single_file, single_example, capsys):
    assert main(["verify", str(single_file)]) == 0
    length = single_example.layout.scale().to_length(oracle_optimal(single_example))
    assert capsys.readouterr().out.strip() == f"AGREE length={float(length):g}"


def test_malformed_instance(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"layout": {"blocks": 1, "aisles": 2, "slots_per_subaisle": 3},
                               "depot": {"aisle": 1, "cross": "front"},
                               "picks": [{"aisle": 2, "slot": 4}]}))
    assert main(["verify", str(bad)]) == 2
    assert "picks[0].slot" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.json"), "--algo", "single-original"]) == 2
    assert "No such file" in capsys.readouterr().err


def test_gen_then_solve(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["gen", "--blocks", "2", "--aisles", "4", "--items", "12", "--seed", "5",
                 "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["picks"]) == 12
    lengths = set()
    for algo in ("two-original", "two-mod1", "two-mod2"):
        assert main(["solve", str(out), "--algo", algo]) == 0
        lengths.add(json.loads(capsys.readouterr().out)["length"])
    assert len(lengths) == 1


def test_tables(capsys):
    assert main(["tables", "--variant", "single-combined"]) == 0
    captured = capsys.readouterr()
    rows = list(csv.DictReader(io.StringIO(captured.out)))
    assert len(rows) == 26
    assert "16" in captured.err


def test_bench(tmp_path, capsys, monkeypatch):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"blocks": 1, "aisles": [2, 3], "items": [4], "instances": 2}))
    monkeypatch.setenv("PICKROUTE_SEED", "9")
    assert main(["bench", "--plan", str(plan), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "eval_ratio.csv").exists()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"blocks": 1, "colour": "red"}))
    assert main(["bench", "--plan", str(bad), "--out", str(tmp_path / "o2")]) == 2
