"""Candidate migrations, coverage, and plan verification.

A migration ``(qubit, module, time)`` creates a linked copy of ``qubit`` in a
foreign ``module`` right after the qubit's unary gate at ``time`` (or at the
start of the circuit when ``time == 0``).  The copy lives until the qubit's
next unary gate.  A non-local controlled-phase gate runs if one qubit has a
live copy in the other's module, or both have live copies in a common third
module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, NamedTuple

from .allocation import Allocation
from .circuit import Circuit, GateEvent, TimeIndex, latest_unary_before, nonlocal_gates
from .errors import DqcError, ValidationError

MSGC = "msgc"
MSHC = "mshc"
MODES = (MSGC, MSHC)


class Migration(NamedTuple):
    qubit: int
    module: int
    time: int


class MigrationPair(NamedTuple):
    """Two migrations of different qubits into the same third module."""

    first: Migration
    second: Migration

    @property
    def module(self) -> int:
        return self.first.module


def _check_circuit(circuit: Circuit) -> TimeIndex:
    if circuit.has_swaps:
        raise ValidationError("circuit still contains SWAP events; run eliminate_swap_cp_swap first")
    return circuit.time_index


def home_migrations(gate: GateEvent, tix: TimeIndex, alloc: Allocation) -> tuple[Migration, Migration]:
    """The two single migrations that cover ``gate`` through a home module."""
    i, j = gate.qubits
    return (Migration(i, alloc[j], latest_unary_before(tix, i, gate.t)),
            Migration(j, alloc[i], latest_unary_before(tix, j, gate.t)))


def third_module_pairs(gate: GateEvent, tix: TimeIndex, alloc: Allocation) -> list[MigrationPair]:
    i, j = gate.qubits
    fi = latest_unary_before(tix, i, gate.t)
    fj = latest_unary_before(tix, j, gate.t)
    homes = (alloc[i], alloc[j])
    return [MigrationPair(Migration(i, p, fi), Migration(j, p, fj))
            for p in range(alloc.k) if p not in homes]


@dataclass(frozen=True)
class CandidateSets:
    """All candidate migrations plus the per-gate views used by the models.

    ``M`` and ``M1`` are sorted by ``(qubit, module, time)``; ``M2`` is in
    order of first use, i.e. by ``(gate time, module)``.  ``gate_m1[g]`` holds
    the two home migrations of ``gates[g]`` and ``gate_m2[g]`` the indices of
    its third-module pairs in ``M2``.
    """

    circuit: Circuit
    allocation: Allocation
    mode: str
    M: tuple[Migration, ...]
    M1: tuple[Migration, ...]
    M2: tuple[MigrationPair, ...]
    gates: tuple[GateEvent, ...]
    gate_m1: tuple[tuple[Migration, Migration], ...]
    gate_m2: tuple[tuple[int, ...], ...]
    _m_index: dict = field(repr=False, compare=False)
    _m1_index: dict = field(repr=False, compare=False)

    @property
    def k(self) -> int:
        return self.allocation.k

    def m_index(self, mig: Migration) -> int:
        return self._m_index[mig]

    def m1_index(self, mig: Migration) -> int | None:
        return self._m1_index.get(mig)

    def gate_m1_indices(self, g: int) -> tuple[int, int]:
        a, b = self.gate_m1[g]
        return self._m1_index[a], self._m1_index[b]


def enumerate_candidates(circuit: Circuit, allocation: Allocation, mode: str = MSGC) -> CandidateSets:
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    tix = _check_circuit(circuit)
    if allocation.n != circuit.num_qubits:
        raise ValidationError(f"allocation covers {allocation.n} qubits, circuit has {circuit.num_qubits}")
    M = tuple(Migration(q, p, t)
              for q in range(circuit.num_qubits)
              for p in range(allocation.k) if p != allocation[q]
              for t in tix.slots(q))
    gates = tuple(nonlocal_gates(circuit, allocation))
    gate_m1 = []
    gate_m2 = []
    m1: set[Migration] = set()
    m2_index: dict[MigrationPair, int] = {}
    for g in gates:
        home = home_migrations(g, tix, allocation)
        if home[0].module == allocation[home[0].qubit]:
            raise DqcError(f"gate at t={g.t} is local but was classified non-local")
        gate_m1.append(home)
        m1.update(home)
        idx = []
        if mode == MSGC:
            for pair in third_module_pairs(g, tix, allocation):
                idx.append(m2_index.setdefault(pair, len(m2_index)))
        gate_m2.append(tuple(idx))
    M1 = tuple(sorted(m1))
    return CandidateSets(
        circuit=circuit, allocation=allocation, mode=mode,
        M=M, M1=M1, M2=tuple(m2_index), gates=gates,
        gate_m1=tuple(gate_m1), gate_m2=tuple(gate_m2),
        _m_index={m: i for i, m in enumerate(M)},
        _m1_index={m: i for i, m in enumerate(M1)},
    )


def gate_coverable_by(gate: GateEvent, mig: Migration | MigrationPair, circuit: Circuit,
                      allocation: Allocation) -> bool:
    """Whether a single migration or a pair covers ``gate`` on its own."""
    tix = _check_circuit(circuit)
    if isinstance(mig, MigrationPair):
        i, j = gate.qubits
        a, b = mig
        if {a.qubit, b.qubit} != {i, j} or a.module != b.module:
            return False
        if a.module in (allocation[i], allocation[j]):
            return False
        return (a.time == latest_unary_before(tix, a.qubit, gate.t)
                and b.time == latest_unary_before(tix, b.qubit, gate.t))
    return mig in home_migrations(gate, tix, allocation)


def uncovered_gates(circuit: Circuit, allocation: Allocation, selected: Iterable[Migration],
                    allow_pairs: bool = True) -> list[GateEvent]:
    """Non-local gates that ``selected`` does not cover, straight from the
    coverage conditions (home module either way, or a shared third module)."""
    tix = _check_circuit(circuit)
    chosen = set(selected)
    missing = []
    for g in nonlocal_gates(circuit, allocation):
        a, b = home_migrations(g, tix, allocation)
        if a in chosen or b in chosen:
            continue
        if allow_pairs and any(p.first in chosen and p.second in chosen
                               for p in third_module_pairs(g, tix, allocation)):
            continue
        missing.append(g)
    return missing


@dataclass(frozen=True)
class MigrationPlan:
    allocation: Allocation
    selected: frozenset[Migration]

    def __post_init__(self):
        object.__setattr__(self, "selected", frozenset(Migration(*m) for m in self.selected))

    @property
    def ebit_cost(self) -> int:
        return len(self.selected)

    def sorted_migrations(self) -> list[Migration]:
        return sorted(self.selected)

    def with_(self, *extra: Migration) -> "MigrationPlan":
        return MigrationPlan(self.allocation, self.selected | set(extra))

    def without(self, mig: Migration) -> "MigrationPlan":
        return MigrationPlan(self.allocation, self.selected - {mig})

    def to_dict(self) -> dict:
        return {
            "allocation": self.allocation.to_dict(),
            "migrations": [{"q": m.qubit, "module": m.module, "t": m.time} for m in self.sorted_migrations()],
            "ebit_cost": self.ebit_cost,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MigrationPlan":
        plan = cls(Allocation.from_dict(d["allocation"]),
                   frozenset(Migration(int(m["q"]), int(m["module"]), int(m["t"])) for m in d["migrations"]))
        if "ebit_cost" in d and int(d["ebit_cost"]) != plan.ebit_cost:
            raise ValidationError(f"plan lists ebit_cost {d['ebit_cost']} but selects {plan.ebit_cost} migrations")
        return plan

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "MigrationPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    cost: int
    failures: tuple[tuple[int, tuple[int, int]], ...]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "cost": self.cost,
                "failures": [{"gate_t": t, "qubits": list(qs)} for t, qs in self.failures]}


def verify_plan(circuit: Circuit, plan: MigrationPlan) -> VerifyReport:
    """Replay the circuit tracking where each qubit has live linked copies.

    A unary gate on ``q`` first dissolves every copy of ``q`` and then creates
    the copies scheduled right after it; time-0 migrations are in place before
    the first gate.  A non-local gate passes when one qubit has a copy in the
    other's home module or both have copies in a common module.
    """
    tix = _check_circuit(circuit)
    alloc = plan.allocation
    if alloc.n != circuit.num_qubits:
        raise ValidationError(f"plan allocation covers {alloc.n} qubits, circuit has {circuit.num_qubits}")
    scheduled: dict[tuple[int, int], list[int]] = {}
    for m in plan.selected:
        if not 0 <= m.qubit < circuit.num_qubits:
            raise ValidationError(f"{m}: qubit out of range")
        if not 0 <= m.module < alloc.k or m.module == alloc[m.qubit]:
            raise ValidationError(f"{m}: module must be a foreign module in [0, {alloc.k})")
        if m.time not in tix.slots(m.qubit):
            raise ValidationError(f"{m}: time must be 0 or a unary-gate time of qubit {m.qubit}")
        scheduled.setdefault((m.qubit, m.time), []).append(m.module)

    live = [set(scheduled.get((q, 0), ())) for q in range(circuit.num_qubits)]
    failures = []
    for ev in circuit.events:
        if ev.is_unary:
            q = ev.qubits[0]
            live[q].clear()
            live[q].update(scheduled.get((q, ev.t), ()))
            continue
        i, j = ev.qubits
        pi, pj = alloc[i], alloc[j]
        if pi == pj:
            continue
        if pj in live[i] or pi in live[j] or live[i] & live[j]:
            continue
        failures.append((ev.t, (i, j)))
    return VerifyReport(ok=not failures, cost=plan.ebit_cost, failures=tuple(failures))


def _gate_options(circuit: Circuit, allocation: Allocation, allow_pairs: bool):
    tix = _check_circuit(circuit)
    out = []
    for g in nonlocal_gates(circuit, allocation):
        opts = [frozenset([m]) for m in home_migrations(g, tix, allocation)]
        if allow_pairs:
            opts += [frozenset(p) for p in third_module_pairs(g, tix, allocation)]
        out.append(opts)
    return out


def _components(options: list[list[frozenset]]) -> list[list[int]]:
    """Group gates that can share a migration, i.e. touch a common (qubit, time) slot."""
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g, opts in enumerate(options):
        for opt in opts:
            for m in opt:
                parent.setdefault(("g", g), ("g", g))
                ra, rb = find(("g", g)), find(("s", m.qubit, m.time))
                if ra != rb:
                    parent[ra] = rb
    groups: dict = {}
    for g in range(len(options)):
        groups.setdefault(find(("g", g)), []).append(g)
    return list(groups.values())


def brute_force_min_cover(circuit: Circuit, allocation: Allocation,
                          allow_pairs: bool = True) -> tuple[int, frozenset[Migration]]:
    """Smallest set of migrations covering every non-local gate, by exhaustive
    search that never consults an integer program.

    Gates that share no (qubit, time) slot are independent, so each connected
    group is solved separately by iterative deepening: with a budget of ``b``
    migrations, take the first uncovered gate and try each way of covering it
    (either home migration, or a pair into any third module).  Every migration
    able to cover anything appears in some gate's options, so the search
    ranges over all useful subsets of the full candidate set.
    """
    options = _gate_options(circuit, allocation, allow_pairs)
    total: set[Migration] = set()
    for comp in _components(options):
        opts = [options[g] for g in comp]
        chosen: set[Migration] = set()

        def dfs(budget: int) -> bool:
            for gate_opts in opts:
                if not any(o <= chosen for o in gate_opts):
                    break
            else:
                return True
            for o in gate_opts:
                new = o - chosen
                if len(new) <= budget:
                    chosen.update(new)
                    if dfs(budget - len(new)):
                        return True
                    chosen.difference_update(new)
            return False

        budget = 0
        while not dfs(budget):
            budget += 1
        total |= chosen
    return len(total), frozenset(total)


def relevant_migrations(circuit: Circuit, allocation: Allocation, allow_pairs: bool = True) -> list[Migration]:
    return sorted({m for opts in _gate_options(circuit, allocation, allow_pairs) for o in opts for m in o})


def subset_min_cover(circuit: Circuit, allocation: Allocation, pool: Iterable[Migration],
                     allow_pairs: bool = True) -> int:
    """Literal enumeration of subsets of ``pool`` by increasing size."""
    pool = list(pool)
    for size in range(len(pool) + 1):
        for combo in combinations(pool, size):
            if not uncovered_gates(circuit, allocation, combo, allow_pairs):
                return size
    raise DqcError("no subset of the pool covers every gate")
