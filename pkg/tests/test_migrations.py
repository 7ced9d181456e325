import json

import pytest
from hypothesis import given, strategies as st

from dqc.allocation import Allocation, canonical_partition
from dqc.circuit import CircuitBuilder
from dqc.errors import ValidationError
from dqc.generators import SeededStream, gen_qft
from dqc.migrations import (MSGC, MSHC, Migration, MigrationPair, MigrationPlan, brute_force_min_cover,
                            enumerate_candidates, gate_coverable_by, relevant_migrations, subset_min_cover,
                            uncovered_gates, verify_plan)
from dqc.pipeline import distribute

from instances import random_instance


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_candidate_count(seed, k):
    c, a = random_instance(seed, k=k)
    cands = enumerate_candidates(c, a)
    assert len(cands.M) == (k - 1) * (len(c.unary_events) + c.num_qubits)
    assert set(cands.M1) <= set(cands.M)
    assert list(cands.M) == sorted(cands.M) and list(cands.M1) == sorted(cands.M1)
    assert len(set(cands.M2)) == len(cands.M2)
    for g, gate in enumerate(cands.gates):
        assert len(cands.gate_m2[g]) == k - 2
        for p in cands.gate_m2[g]:
            pair = cands.M2[p]
            assert pair.first.module == pair.second.module not in (a[gate.qubits[0]], a[gate.qubits[1]])
            assert pair.first.qubit != pair.second.qubit
    assert enumerate_candidates(c, a, MSHC).M2 == ()


def test_qft6_gate_sets():
    c = gen_qft(6)
    a = Allocation.from_string("112233")
    cands = enumerate_candidates(c, a)
    t_h0 = c.events[0].t
    g = next(i for i, e in enumerate(cands.gates) if e.qubits == (0, 2))
    # the gate precedes H on qubit 2, so qubit 2's slot is the initial one
    assert set(cands.gate_m1[g]) == {Migration(0, 1, t_h0), Migration(2, 0, 0)}
    (p,) = cands.gate_m2[g]
    assert cands.M2[p] == MigrationPair(Migration(0, 2, t_h0), Migration(2, 2, 0))


def test_gate_coverable_by():
    c = gen_qft(6)
    a = Allocation.from_string("112233")
    gate = next(e for e in c.binary_events if e.qubits == (0, 2))
    assert gate_coverable_by(gate, Migration(0, 1, 1), c, a)
    assert gate_coverable_by(gate, Migration(2, 0, 0), c, a)
    assert gate_coverable_by(gate, MigrationPair(Migration(0, 2, 1), Migration(2, 2, 0)), c, a)
    # the migration must sit in the slot opened by the latest unary
    assert not gate_coverable_by(gate, Migration(0, 1, 0), c, a)
    assert not gate_coverable_by(gate, MigrationPair(Migration(0, 1, 1), Migration(2, 1, 0)), c, a)


def test_qft6_plans_verify():
    c = gen_qft(6)
    for text, gc in [("112233", 4), ("122331", 5)]:
        a = Allocation.from_string(text)
        d = distribute(c, a, MSGC)
        assert d.ebit_cost == gc and verify_plan(c, d.plan) == d.report and d.report.ok
        h = distribute(c, a, MSHC)
        assert h.ebit_cost == 6 and not uncovered_gates(c, a, h.plan.selected, allow_pairs=False)


def test_empty_plan_reports_gate():
    c = CircuitBuilder(2).h(0).cz(0, 1).build()
    rep = verify_plan(c, MigrationPlan(Allocation([0, 1], 2), frozenset()))
    assert not rep.ok and rep.failures == ((2, (0, 1)),)
    assert rep.to_dict() == {"ok": False, "cost": 0, "failures": [{"gate_t": 2, "qubits": [0, 1]}]}


def test_invalid_migrations_rejected():
    c = CircuitBuilder(2).h(0).cz(0, 1).build()
    a = Allocation([0, 1], 2)
    for bad in [Migration(0, 1, 2), Migration(0, 0, 1), Migration(0, 5, 1), Migration(3, 1, 0)]:
        with pytest.raises(ValidationError):
            verify_plan(c, MigrationPlan(a, frozenset([bad])))


def test_unary_gate_dissolves_copies():
    c = CircuitBuilder(2).cz(0, 1).h(0).cz(0, 1).build()
    a = Allocation([0, 1], 2)
    early = MigrationPlan(a, frozenset([Migration(0, 1, 0)]))
    assert verify_plan(c, early).failures == ((3, (0, 1)),)
    both = early.with_(Migration(0, 1, 2))
    assert verify_plan(c, both).ok


def random_plan(cands, rng, density=2):
    return frozenset(m for m in cands.M if rng.below(density * 2) == 0)


@given(st.integers(0, 10**6), st.sampled_from([3, 4]))
def test_verifier_agrees_with_coverage_definition(seed, k):
    c, a = random_instance(seed, k=k)
    cands = enumerate_candidates(c, a)
    rng = SeededStream(seed)
    for _ in range(5):
        sel = random_plan(cands, rng)
        rep = verify_plan(c, MigrationPlan(a, sel))
        missing = uncovered_gates(c, a, sel)
        assert rep.ok == (not missing)
        assert [t for t, _ in rep.failures] == [g.t for g in missing]


@given(st.integers(0, 10**6))
def test_coverage_is_monotone(seed):
    c, a = random_instance(seed)
    cands = enumerate_candidates(c, a)
    plan = distribute(c, a).plan
    rng = SeededStream(seed)
    extra = cands.M[rng.below(len(cands.M))]
    assert verify_plan(c, plan.with_(extra)).ok
    assert verify_plan(c, MigrationPlan(a, frozenset(cands.M))).ok


@given(st.integers(0, 10**6))
def test_shifting_an_essential_migration_breaks_coverage(seed):
    c, a = random_instance(seed)
    plan = distribute(c, a).plan
    tix = c.time_index
    for m in plan.selected:
        reduced = plan.without(m)
        if verify_plan(c, reduced).ok:
            continue
        for t in tix.slots(m.qubit):
            if t != m.time:
                assert not verify_plan(c, reduced.with_(Migration(m.qubit, m.module, t))).ok


@given(st.integers(0, 10**6))
def test_home_coverage_plans_use_home_modules_only(seed):
    c, a = random_instance(seed)
    plan = distribute(c, a, MSHC).plan
    assert set(plan.selected) <= set(enumerate_candidates(c, a, MSHC).M1)
    assert not uncovered_gates(c, a, plan.selected, allow_pairs=False)


@given(st.integers(0, 10**6))
def test_min_cover_oracle_matches_literal_subsets(seed):
    c, a = random_instance(seed, n_range=(3, 5), d_range=(1, 2))
    pool = relevant_migrations(c, a)
    if len(pool) > 14:
        return
    for pairs in (True, False):
        cost, chosen = brute_force_min_cover(c, a, pairs)
        assert cost == len(chosen) == subset_min_cover(c, a, pool, pairs)
        assert not uncovered_gates(c, a, chosen, pairs)


def test_plan_json(tmp_path):
    plan = distribute(gen_qft(6), canonical_partition(6, 3)).plan
    d = plan.to_dict()
    assert set(d) == {"allocation", "migrations", "ebit_cost"} and d["ebit_cost"] == 4
    assert set(d["migrations"][0]) == {"q", "module", "t"}
    plan.save(tmp_path / "p.json")
    assert MigrationPlan.load(tmp_path / "p.json") == plan
    d["ebit_cost"] = 3
    (tmp_path / "bad.json").write_text(json.dumps(d))
    with pytest.raises(ValidationError):
        MigrationPlan.load(tmp_path / "bad.json")
