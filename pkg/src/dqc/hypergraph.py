"""Hypergraph view of a circuit and a greedy + local-search partitioner.

Nodes ``0..n-1`` are qubits and ``n + g`` is the ``g``-th binary gate.  For
each qubit, every stretch between consecutive unary gates (or the circuit
boundaries) that contains at least one binary gate becomes a hyperedge
joining the qubit to those gates.  With qubits and gates assigned to blocks,
a hyperedge spanning ``s`` blocks costs ``s - 1`` ebits: one linked copy of
the qubit per foreign block, created at the start of the stretch.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .allocation import Allocation, default_epsilon
from .circuit import Circuit
from .errors import ConfigError, ValidationError
from .generators import SeededStream, as_fraction
from .migrations import Migration, MigrationPlan


@dataclass(frozen=True)
class Hypergraph:
    num_qubits: int
    gate_times: tuple[int, ...]
    gate_qubits: tuple[tuple[int, int], ...]
    hyperedges: tuple[tuple[int, ...], ...]
    # (qubit, time the stretch opens) for each hyperedge
    edge_slots: tuple[tuple[int, int], ...]

    @property
    def num_nodes(self) -> int:
        return self.num_qubits + len(self.gate_times)

    def gate_node(self, g: int) -> int:
        return self.num_qubits + g

    def is_qubit_node(self, v: int) -> bool:
        return v < self.num_qubits

    def incidence(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for e, pins in enumerate(self.hyperedges):
            for v in pins:
                out[v].append(e)
        return out


def build_hypergraph(circuit: Circuit) -> Hypergraph:
    if circuit.has_swaps:
        raise ValidationError("circuit still contains SWAP events; run eliminate_swap_cp_swap first")
    if not circuit.is_normalized:
        raise ValidationError("circuit has repeated time stamps; call normalize_times first")
    binaries = circuit.binary_events
    gate_id = {ev.t: g for g, ev in enumerate(binaries)}
    n = circuit.num_qubits
    opened = [0] * n
    pending: list[list[int]] = [[] for _ in range(n)]
    edges: list[tuple[int, ...]] = []
    slots: list[tuple[int, int]] = []

    def close(q):
        if pending[q]:
            edges.append((q,) + tuple(n + g for g in pending[q]))
            slots.append((q, opened[q]))
            pending[q] = []

    for ev in circuit.events:
        if ev.is_unary:
            q = ev.qubits[0]
            close(q)
            opened[q] = ev.t
        else:
            for q in ev.qubits:
                pending[q].append(gate_id[ev.t])
    for q in range(n):
        close(q)
    order = sorted(range(len(edges)), key=lambda e: slots[e])
    return Hypergraph(n, tuple(ev.t for ev in binaries), tuple(ev.qubits for ev in binaries),
                      tuple(edges[e] for e in order), tuple(slots[e] for e in order))


def cut_cost(hg: Hypergraph, blocks: list[int]) -> int:
    return sum(len({blocks[v] for v in pins}) - 1 for pins in hg.hyperedges)


@dataclass(frozen=True)
class HpDistribution:
    allocation: Allocation
    node_blocks: tuple[int, ...]
    cut_cost: int
    initial_cut_cost: int

    def to_plan(self, hg: Hypergraph) -> MigrationPlan:
        """One migration per (hyperedge, foreign block it spans)."""
        migs = set()
        for pins, (q, t) in zip(hg.hyperedges, hg.edge_slots):
            home = self.node_blocks[q]
            for b in {self.node_blocks[v] for v in pins} - {home}:
                migs.add(Migration(q, b, t))
        return MigrationPlan(self.allocation, frozenset(migs))


class _Partition:
    """Block assignment with per-hyperedge pin counts for O(degree) moves."""

    def __init__(self, hg: Hypergraph, k: int, blocks: list[int]):
        self.hg = hg
        self.k = k
        self.blocks = blocks
        self.inc = hg.incidence()
        self.pins = [[0] * k for _ in hg.hyperedges]
        for e, pins in enumerate(hg.hyperedges):
            for v in pins:
                self.pins[e][blocks[v]] += 1
        self.load = [0] * k
        for q in range(hg.num_qubits):
            self.load[blocks[q]] += 1

    def cost(self) -> int:
        return sum(sum(1 for c in row if c) - 1 for row in self.pins)

    def move(self, v: int, b: int) -> int:
        """Move ``v`` to block ``b``; returns the change in cut cost."""
        a = self.blocks[v]
        if a == b:
            return 0
        delta = 0
        for e in self.inc[v]:
            row = self.pins[e]
            row[a] -= 1
            if row[a] == 0:
                delta -= 1
            if row[b] == 0:
                delta += 1
            row[b] += 1
        self.blocks[v] = b
        if v < self.hg.num_qubits:
            self.load[a] -= 1
            self.load[b] += 1
        return delta

    def move_delta(self, v: int, b: int) -> int:
        a = self.blocks[v]
        if a == b:
            return 0
        delta = 0
        for e in self.inc[v]:
            row = self.pins[e]
            if row[a] == 1:
                delta -= 1
            if row[b] == 0:
                delta += 1
        return delta


def _initial_blocks(hg: Hypergraph, k: int, cap: int, rng: SeededStream) -> list[int]:
    n = hg.num_qubits
    weight = [[0] * n for _ in range(n)]
    for i, j in hg.gate_qubits:
        weight[i][j] += 1
        weight[j][i] += 1
    order = list(range(n))
    rng.shuffle(order)
    blocks = [-1] * hg.num_nodes
    load = [0] * k
    for q in order:
        aff = [0] * k
        for r in range(n):
            if blocks[r] >= 0:
                aff[blocks[r]] += weight[q][r]
        b = max((b for b in range(k) if load[b] < cap), key=lambda b: (aff[b], -load[b], -b))
        blocks[q] = b
        load[b] += 1
    for g, (i, j) in enumerate(hg.gate_qubits):
        blocks[n + g] = blocks[i]
    return blocks


def heuristic_partition(hg: Hypergraph, k: int, epsilon=None, seed: int = 0,
                        max_passes: int = 100) -> HpDistribution:
    """Balanced k-way partition of the hypergraph minimizing the cut cost.

    Greedy start: qubits in seeded random order, each placed in the
    non-full block it shares the most gates with; every gate node starts in
    its first qubit's block.  Then repeated passes of the best improving
    single-node move (gate nodes anywhere, qubits into non-full blocks) or
    qubit-qubit swap, until a pass finds nothing that lowers the cut.
    """
    n = hg.num_qubits
    if k < 2:
        raise ConfigError(f"partitioning needs k >= 2, got {k}")
    eps = default_epsilon(n, k) if epsilon is None else as_fraction(epsilon)
    if eps < 0:
        raise ConfigError(f"epsilon must be >= 0, got {eps}")
    cap = int((1 + eps) * Fraction(n, k))
    if cap * k < n:
        raise ConfigError(f"no ({k}, {eps})-balanced allocation of {n} qubits exists (cap {cap} per module)")
    rng = SeededStream(seed)
    part = _Partition(hg, k, _initial_blocks(hg, k, cap, rng))
    initial = part.cost()
    nodes = list(range(hg.num_nodes))
    for _ in range(max_passes):
        improved = False
        rng.shuffle(nodes)
        for v in nodes:
            best_gain, best_move = 0, None
            for b in range(k):
                if b == part.blocks[v] or (v < n and part.load[b] >= cap):
                    continue
                gain = -part.move_delta(v, b)
                if gain > best_gain:
                    best_gain, best_move = gain, ("move", b)
            if v < n:
                for u in range(n):
                    if part.blocks[u] == part.blocks[v]:
                        continue
                    a, b = part.blocks[v], part.blocks[u]
                    d = part.move(v, b) + part.move(u, a)
                    part.move(u, b)
                    part.move(v, a)
                    if -d > best_gain:
                        best_gain, best_move = -d, ("swap", u)
            if best_move is None:
                continue
            kind, arg = best_move
            if kind == "move":
                part.move(v, arg)
            else:
                a, b = part.blocks[v], part.blocks[arg]
                part.move(v, b)
                part.move(arg, a)
            improved = True
        if not improved:
            break
    blocks = part.blocks
    final = part.cost()
    alloc = Allocation(blocks[:n], k, eps)
    return HpDistribution(alloc, tuple(blocks), final, initial)
