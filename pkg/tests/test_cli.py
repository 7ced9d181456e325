import csv
import json

import pytest

from dqc.cli import main
from dqc.circuit import Circuit, CircuitBuilder
from dqc.generators import draper_with_swaps


@pytest.fixture
def qft6(tmp_path):
    path = tmp_path / "qft6.json"
    assert main(["gen", "--family", "qft", "--n", "6", "-o", str(path)]) == 0
    return path


@pytest.mark.parametrize("args", [
    ["--family", "qft", "--n", "8"],
    ["--family", "cz-fraction", "--n", "16", "--depth", "10", "--p", "0.5", "--seed", "42"],
    ["--family", "draper", "--nprime", "4"],
    ["--family", "rgqft", "--nprime", "2"],
    ["--family", "inner-product", "--n", "8"],
])
def test_gen_families(tmp_path, args):
    out = tmp_path / "c.json"
    assert main(["gen", *args, "-o", str(out)]) == 0
    assert Circuit.load(out).to_json() + "\n" == out.read_text()


def test_gen_missing_width(capsys):
    assert main(["gen", "--family", "draper"]) == 2
    assert "--nprime" in capsys.readouterr().err


def test_distribute_verify_round_trip(tmp_path, qft6):
    alloc = tmp_path / "a.json"
    assert main(["partition", "--canonical", "--k", "3", "--circuit", str(qft6), "-o", str(alloc)]) == 0
    assert json.loads(alloc.read_text()) == {"k": 3, "map": [0, 0, 1, 1, 2, 2]}
    plan = tmp_path / "p.json"
    model = tmp_path / "m.txt"
    assert main(["distribute", "--circuit", str(qft6), "--alloc", str(alloc), "--mode", "msgc",
                 "-o", str(plan), "--emit-model", str(model)]) == 0
    assert json.loads(plan.read_text())["ebit_cost"] == 4
    assert model.exists() and (tmp_path / "m.legend.json").exists()
    report = tmp_path / "r.json"
    assert main(["verify", "--circuit", str(qft6), "--plan", str(plan), "-o", str(report)]) == 0
    assert json.loads(report.read_text()) == {"ok": True, "cost": 4, "failures": []}

    d = json.loads(plan.read_text())
    d["migrations"] = d["migrations"][1:]
    del d["ebit_cost"]
    plan.write_text(json.dumps(d))
    assert main(["verify", "--circuit", str(qft6), "--plan", str(plan)]) == 1


def test_distribute_with_costs(tmp_path, qft6):
    alloc = tmp_path / "a.json"
    alloc.write_text('{"k": 3, "map": [0, 0, 1, 1, 2, 2]}')
    costs = tmp_path / "costs.json"
    costs.write_text('{"matrix": [[0, 2, 2], [2, 0, 2], [2, 2, 0]]}')
    plan = tmp_path / "p.json"
    assert main(["distribute", "--circuit", str(qft6), "--alloc", str(alloc), "--costs", str(costs),
                 "-o", str(plan)]) == 0
    assert json.loads(plan.read_text())["ebit_cost"] == 4


def test_distribute_node_limit_exit(tmp_path):
    c = tmp_path / "q.json"
    main(["gen", "--family", "qft", "--n", "12", "-o", str(c)])
    alloc = tmp_path / "a.json"
    alloc.write_text(json.dumps({"k": 4, "map": [0, 2, 1, 2, 3, 3, 0, 1, 2, 0, 1, 3]}))
    assert main(["distribute", "--circuit", str(c), "--alloc", str(alloc), "--node-limit", "2",
                 "-o", str(tmp_path / "p.json")]) == 3


def test_partition_heuristic(tmp_path, qft6, capsys):
    out = tmp_path / "a.json"
    assert main(["partition", "--circuit", str(qft6), "--k", "3", "--epsilon", "0.0", "--seed", "7",
                 "-o", str(out)]) == 0
    assert sorted(json.loads(out.read_text())["map"]) == [0, 0, 1, 1, 2, 2]
    assert "cut cost" in capsys.readouterr().err


def test_partition_config_errors():
    assert main(["partition", "--canonical", "--k", "4", "--n", "6"]) == 2
    assert main(["partition", "--k", "3"]) == 2


def test_sweep_csv(tmp_path, qft6):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--circuit", str(qft6), "--k", "3", "--mode", "msgc", "-o", str(out)]) == 0
    rows = {r["allocation"]: int(r["msgc"]) for r in csv.DictReader(open(out))}
    assert len(rows) == 15 and rows["112233"] == 4
    assert main(["sweep", "--circuit", str(qft6), "--k", "3", "--cap", "3"]) == 3


def test_compare_seeds(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["compare", "--family", "qft", "--n", "6", "--k", "3", "--seeds", "0..3", "-o", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert [r["seed"] for r in rows] == ["0", "1", "2", "3"]
    assert main(["compare", "--family", "qft", "--n", "6", "--k", "3", "--seeds", "a..b"]) == 2


def test_raw_inputs_are_rewritten(tmp_path):
    path = tmp_path / "raw.json"
    draper_with_swaps(3).save(path)
    out = tmp_path / "a.json"
    assert main(["partition", "--circuit", str(path), "--k", "3", "-o", str(out)]) == 0


def test_bad_inputs_are_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--circuit", str(bad), "--plan", str(bad)]) == 2
    assert main(["verify", "--circuit", str(tmp_path / "absent.json"), "--plan", str(bad)]) == 2
    swap_only = tmp_path / "s.json"
    CircuitBuilder(2).swap(0, 1).build().save(swap_only)
    assert main(["partition", "--circuit", str(swap_only), "--k", "2"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep"])
    assert exc.value.code == 2
