import csv
import json

import pytest
from hypothesis import given, strategies as st

from dqc.allocation import Allocation
from dqc.errors import DqcError, LimitError, ValidationError
from dqc.generators import GenSpec, SeededStream, gen_qft
from dqc.migrations import MSGC, MSHC
from dqc.pipeline import distribute
from dqc.sweep import CompareRecord, compare_pipeline, emit_report, sweep_allocations

from instances import random_instance


@pytest.fixture(scope="module")
def qft6_sweep():
    return sweep_allocations(gen_qft(6), 3, MSGC)


def test_sweep_histogram_and_argmin(qft6_sweep):
    assert sum(qft6_sweep.histogram.values()) == 15
    assert qft6_sweep.argmin == ["112233"]
    assert all(r.mshc >= r.msgc for r in qft6_sweep.records)


def test_sweep_is_deterministic(qft6_sweep):
    assert sweep_allocations(gen_qft(6), 3, MSGC).to_json() == qft6_sweep.to_json()


def test_sweep_mode_switch():
    hc = sweep_allocations(gen_qft(6), 3, MSHC)
    assert hc.optimum == 6 and "112233" in hc.argmin


def test_sweep_cap_and_mode_errors():
    with pytest.raises(LimitError, match="15 .* cap of 10"):
        sweep_allocations(gen_qft(6), 3, cap=10)
    with pytest.raises(ValidationError):
        sweep_allocations(gen_qft(6), 3, mode="nope")


def test_sweep_workers_match_serial(qft6_sweep):
    assert sweep_allocations(gen_qft(6), 3, workers=2) == qft6_sweep


@given(st.integers(0, 10**6), st.permutations(range(4)))
def test_relabelling_modules_keeps_optimum(seed, perm):
    c, a = random_instance(seed, k=4, n_range=(4, 7), d_range=(1, 3))
    for mode in (MSGC, MSHC):
        assert distribute(c, a, mode).ebit_cost == distribute(c, a.relabel(perm), mode).ebit_cost


def test_relabelling_on_qft_sweep_sample(qft6_sweep):
    rng = SeededStream(1)
    for rec in qft6_sweep.records:
        perm = [0, 1, 2]
        rng.shuffle(perm)
        a = Allocation.from_string(rec.allocation).relabel(perm)
        assert distribute(gen_qft(6), a).ebit_cost == rec.msgc


def test_report_files(tmp_path, qft6_sweep):
    summary = emit_report(list(qft6_sweep.records), tmp_path / "s.csv")
    rows = list(csv.DictReader(open(tmp_path / "s.csv")))
    assert len(rows) == 15 and set(rows[0]) == {"allocation", "msgc", "mshc"}
    assert json.loads((tmp_path / "s.summary.json").read_text()) == summary
    g = summary["groups"][0]
    assert g["count"] == 15 and g["msgc"]["min"] == 4 and g["msgc"]["max"] == 6


def test_report_refuses_empty(tmp_path):
    with pytest.raises(ValidationError):
        emit_report([], tmp_path / "x.csv")


def test_report_surfaces_io_errors(tmp_path, qft6_sweep):
    with pytest.raises(DqcError, match="missing"):
        emit_report(list(qft6_sweep.records), tmp_path / "missing" / "x.csv")


def test_compare_batch(tmp_path):
    recs = compare_pipeline([GenSpec("cz-fraction", 8, 4, "1/2")], 3, seeds=range(10))
    assert len(recs) == 10 and len({r.circuit for r in recs}) == 10
    for r in recs:
        assert r.bip_cost <= r.hp_cost and r.mshc_cost >= r.bip_cost
    summary = emit_report(recs, tmp_path / "c.csv", tmp_path / "c.json")
    assert len(list(csv.reader(open(tmp_path / "c.csv")))) == 11
    (g,) = summary["groups"]
    for key in ("hp_cost", "bip_cost", "mshc_cost"):
        assert g[key]["min"] <= g[key]["mean"] <= g[key]["max"]
    assert "canonical_cost" not in g


def test_compare_inner_product_is_free():
    for r in compare_pipeline([GenSpec("inner-product", 4)], 4, seeds=range(3)):
        assert (r.hp_cost, r.bip_cost, r.mshc_cost) == (0, 0, 0)


def test_canonical_beats_heuristic_allocation_on_qft():
    for r in compare_pipeline([GenSpec("qft", 9)], 3, seeds=range(5)):
        assert r.canonical_cost <= r.bip_cost


def test_compare_record_fields():
    names = list(CompareRecord.__dataclass_fields__)
    assert names[:3] == ["circuit", "family", "k"] and "seed" in names
