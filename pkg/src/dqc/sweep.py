"""Experiment drivers: exhaustive allocation sweeps, heuristic-vs-BIP
comparisons, and CSV/JSON reporting."""
from __future__ import annotations

import csv
import json
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from .allocation import Allocation, canonical_partition, count_balanced_allocations, enumerate_balanced_allocations
from .circuit import Circuit
from .errors import DqcError, InvariantViolation, LimitError, ValidationError
from .generators import GenSpec, gen_qft, generate
from .hypergraph import build_hypergraph, heuristic_partition
from .migrations import MSGC, MSHC, MODES, verify_plan
from .pipeline import distribute
from .solver import SolverConfig

DEFAULT_SWEEP_CAP = 10**6


@dataclass(frozen=True)
class SweepRecord:
    allocation: str
    msgc: int
    mshc: int


@dataclass(frozen=True)
class SweepResult:
    k: int
    mode: str
    records: tuple[SweepRecord, ...]

    def cost(self, rec: SweepRecord) -> int:
        return rec.msgc if self.mode == MSGC else rec.mshc

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.cost(r) for r in self.records).items()))

    @property
    def optimum(self) -> int:
        return min(self.cost(r) for r in self.records)

    @property
    def argmin(self) -> list[str]:
        best = self.optimum
        return [r.allocation for r in self.records if self.cost(r) == best]

    def by_allocation(self) -> dict[str, SweepRecord]:
        return {r.allocation: r for r in self.records}

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "mode": self.mode,
                           "records": [asdict(r) for r in self.records],
                           "histogram": {str(c): v for c, v in self.histogram.items()},
                           "argmin": self.argmin}, separators=(",", ":"))


def _solve_both(args) -> SweepRecord:
    circuit, alloc, config = args
    gc = distribute(circuit, alloc, MSGC, config=config)
    hc = distribute(circuit, alloc, MSHC, config=config)
    if not (gc.optimal and hc.optimal):
        raise LimitError(f"solver limit hit on allocation {alloc}")
    if hc.ebit_cost < gc.ebit_cost:
        raise InvariantViolation(f"{alloc}: home-coverage optimum {hc.ebit_cost} below general {gc.ebit_cost}")
    return SweepRecord(str(alloc), gc.ebit_cost, hc.ebit_cost)


def sweep_allocations(circuit: Circuit, k: int, mode: str = MSGC, cap: int = DEFAULT_SWEEP_CAP,
                      workers: int = 1, config: SolverConfig | None = None) -> SweepResult:
    """Solve both coverage variants for every balanced allocation (one per
    module relabelling) and rank them by ``mode``."""
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    total = count_balanced_allocations(circuit.num_qubits, k)
    if total > cap:
        raise LimitError(f"{total} balanced allocations exceed the sweep cap of {cap}")
    jobs = [(circuit, a, config) for a in enumerate_balanced_allocations(circuit.num_qubits, k)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_solve_both, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        records = [_solve_both(j) for j in jobs]
    result = SweepResult(k, mode, tuple(records))
    n = circuit.num_qubits
    if circuit == gen_qft(n):
        m = n // k
        canon = result.by_allocation()[str(canonical_partition(n, k))]
        if canon.mshc != m * k * (k - 1) // 2:
            raise InvariantViolation(f"QFT({n}) canonical home-coverage cost {canon.mshc} != {m * k * (k - 1) // 2}")
    return result


@dataclass(frozen=True)
class CompareRecord:
    circuit: str
    family: str
    k: int
    seed: int
    num_qubits: int
    allocation: str
    hp_cost: int
    bip_cost: int
    mshc_cost: int
    # BIP cost under the contiguous-block allocation; -1 when not applicable
    canonical_cost: int = -1


def _compare_one(spec: GenSpec, k: int, epsilon, seed: int, config: SolverConfig | None) -> CompareRecord:
    if spec.is_random:
        spec = replace(spec, seed=seed)
    try:
        circuit = generate(spec)
        hg = build_hypergraph(circuit)
        hp = heuristic_partition(hg, k, epsilon, seed)
        hp_report = verify_plan(circuit, hp.to_plan(hg))
        if not hp_report.ok or hp_report.cost != hp.cut_cost:
            raise InvariantViolation(f"{spec.name}: hypergraph distribution does not replay as a valid plan")
        gc = distribute(circuit, hp.allocation, MSGC, config=config)
        hc = distribute(circuit, hp.allocation, MSHC, config=config)
        canon = -1
        if spec.family == "qft" and circuit.num_qubits % k == 0:
            canon = distribute(circuit, canonical_partition(circuit.num_qubits, k), MSGC, config=config).ebit_cost
    except DqcError as exc:
        raise type(exc)(f"[{spec.name}, seed {seed}] {exc}") from exc
    rec = CompareRecord(spec.name, spec.family, k, seed, circuit.num_qubits, str(hp.allocation),
                        hp.cut_cost, gc.ebit_cost, hc.ebit_cost, canon)
    if rec.bip_cost > rec.hp_cost:
        raise InvariantViolation(f"{rec.circuit} seed {seed}: BIP cost {rec.bip_cost} > heuristic cut {rec.hp_cost}")
    if rec.mshc_cost < rec.bip_cost:
        raise InvariantViolation(f"{rec.circuit} seed {seed}: home-coverage cost {rec.mshc_cost} < BIP {rec.bip_cost}")
    return rec


def compare_pipeline(specs: Iterable[GenSpec], k: int, epsilon=None, seeds: Sequence[int] = range(10),
                     config: SolverConfig | None = None) -> list[CompareRecord]:
    """For each spec and seed: heuristic partition, then re-solve the
    migration selection exactly on the heuristic's qubit allocation.

    Random families are regenerated per seed; the same seed drives the
    partitioner.
    """
    return [_compare_one(spec, k, epsilon, seed, config) for spec in specs for seed in seeds]


_GROUP_KEYS = ("family", "k")
_SKIP = {"seed", "k", "num_qubits"}


def summarize(records: Sequence) -> dict:
    names = [f.name for f in fields(records[0])]
    keys = [n for n in _GROUP_KEYS if n in names]
    numeric = [n for n in names if n not in _SKIP and n not in keys
               and isinstance(getattr(records[0], n), int)]
    groups: dict[tuple, list] = {}
    for r in records:
        groups.setdefault(tuple(getattr(r, n) for n in keys), []).append(r)
    out = []
    for key in sorted(groups):
        rs = groups[key]
        entry = dict(zip(keys, key))
        entry["count"] = len(rs)
        for n in numeric:
            vals = [getattr(r, n) for r in rs if getattr(r, n) >= 0]
            if vals:
                entry[n] = {"mean": statistics.fmean(vals), "min": min(vals), "max": max(vals)}
        out.append(entry)
    return {"groups": out}


def emit_report(records: Sequence, csv_path: str | Path, json_path: str | Path | None = None) -> dict:
    """Write one CSV row per record and a JSON summary (mean/min/max of each
    cost column per family and k).  Returns the summary."""
    if not records:
        raise ValidationError("no records to report")
    csv_path = Path(csv_path)
    json_path = Path(json_path) if json_path else csv_path.with_suffix(".summary.json")
    names = [f.name for f in fields(records[0])]
    summary = summarize(records)
    try:
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for r in records:
                w.writerow([getattr(r, n) for n in names])
        json_path.write_text(json.dumps(summary, indent=1) + "\n")
    except OSError as exc:
        raise DqcError(f"cannot write report to {csv_path} / {json_path}: {exc}") from exc
    return summary
