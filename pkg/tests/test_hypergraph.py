from collections import Counter

import pytest
from hypothesis import given, strategies as st

from dqc.circuit import Circuit, CircuitBuilder, unary
from dqc.errors import ConfigError, ValidationError
from dqc.generators import gen_cz_fraction, gen_draper_adder, gen_qft
from dqc.hypergraph import build_hypergraph, cut_cost, heuristic_partition
from dqc.migrations import MSGC, MSHC, verify_plan
from dqc.pipeline import distribute


def interval_edges(circuit):
    """Brute-force scan: split each qubit's timeline at its unary gates."""
    edges = set()
    n = circuit.num_qubits
    horizon = len(circuit.events) + 1
    for q in range(n):
        cuts = [0] + [e.t for e in circuit.unary_events if e.qubits[0] == q] + [horizon]
        for lo, hi in zip(cuts, cuts[1:]):
            gates = frozenset(g for g, e in enumerate(circuit.binary_events) if q in e.qubits and lo < e.t < hi)
            if gates:
                edges.add((q, gates))
    return edges


def as_sets(hg):
    return {(pins[0], frozenset(v - hg.num_qubits for v in pins[1:])) for pins in hg.hyperedges}


@pytest.mark.parametrize("n", range(2, 9))
def test_qft_hyperedge_count(n):
    c = gen_qft(n)
    hg = build_hypergraph(c)
    assert len(hg.hyperedges) == 2 * n - 2
    assert as_sets(hg) == interval_edges(c)


def test_no_binary_gates_no_edges():
    hg = build_hypergraph(Circuit(3, [unary(0, 1), unary(2, 2)]))
    assert hg.hyperedges == () and hg.num_nodes == 3
    part = heuristic_partition(hg, 3)
    assert part.cut_cost == 0 and part.allocation.sizes == [1, 1, 1]


@given(st.integers(0, 2**32))
def test_hyperedges_match_interval_scan(seed):
    c = gen_cz_fraction(6, 4, "1/2", seed)
    hg = build_hypergraph(c)
    assert as_sets(hg) == interval_edges(c)
    seen = Counter()
    per_qubit = {}
    for pins in hg.hyperedges:
        q, gates = pins[0], pins[1:]
        assert hg.is_qubit_node(q) and gates and not any(hg.is_qubit_node(v) for v in gates)
        assert per_qubit.setdefault(q, set()).isdisjoint(gates)
        per_qubit[q].update(gates)
        seen.update(gates)
    assert all(seen[hg.gate_node(g)] == 2 for g in range(len(c.binary_events)))


def test_rejects_unnormalized_or_swaps():
    with pytest.raises(ValidationError):
        build_hypergraph(CircuitBuilder(2).swap(0, 1).build())


def triangle():
    return CircuitBuilder(3).cz(0, 1).cz(0, 2).cz(1, 2).build()


def test_triangle_toy():
    # one qubit per module; all three gates executed in module 1 costs 2
    c = triangle()
    hg = build_hypergraph(c)
    blocks = [0, 1, 2] + [1, 1, 1]
    assert cut_cost(hg, blocks) == 2
    part = heuristic_partition(hg, 3, 0, seed=0)
    assert part.cut_cost == 2
    plan = part.to_plan(hg)
    assert verify_plan(c, plan).ok and plan.ebit_cost == 2
    assert distribute(c, part.allocation, MSGC).ebit_cost == 2
    assert distribute(c, part.allocation, MSHC).ebit_cost == 3


@given(st.integers(0, 2**32), st.integers(0, 50), st.sampled_from([2, 3, 4]))
def test_heuristic_invariants(cseed, pseed, k):
    c = gen_cz_fraction(8, 4, "1/2", cseed)
    hg = build_hypergraph(c)
    part = heuristic_partition(hg, k, None, pseed)
    cap = -(-8 // k)
    assert max(part.allocation.sizes) <= cap
    assert part.cut_cost == cut_cost(hg, list(part.node_blocks)) <= part.initial_cut_cost
    assert part == heuristic_partition(hg, k, None, pseed)
    plan = part.to_plan(hg)
    report = verify_plan(c, plan)
    assert report.ok and report.cost == part.cut_cost
    assert distribute(c, part.allocation).ebit_cost <= part.cut_cost


def test_heuristic_balance_errors():
    hg = build_hypergraph(gen_qft(7))
    with pytest.raises(ConfigError):
        heuristic_partition(hg, 3, 0)
    with pytest.raises(ConfigError):
        heuristic_partition(hg, 1)
    with pytest.raises(ConfigError):
        heuristic_partition(hg, 3, -1)


def test_qft6_cut_cannot_beat_exact_optimum():
    hg = build_hypergraph(gen_qft(6))
    for seed in range(10):
        part = heuristic_partition(hg, 3, 0, seed)
        assert part.allocation.sizes == [2, 2, 2]
        assert part.cut_cost >= 4


def test_draper_partition_plan_replays():
    c = gen_draper_adder(4)
    hg = build_hypergraph(c)
    part = heuristic_partition(hg, 3, None, 7)
    assert verify_plan(c, part.to_plan(hg)).ok
