"""``dqc`` command line.

Exit codes: 0 ok, 1 verification failure, 2 configuration or input error,
3 a size or solver limit was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .allocation import Allocation, canonical_partition
from .bip import CostVector, write_model
from .circuit import Circuit, eliminate_swap_cp_swap, normalize_times
from .errors import ConfigError, DqcError, InvariantViolation, LimitError
from .generators import FAMILIES, GenSpec, as_fraction, generate
from .hypergraph import build_hypergraph, heuristic_partition
from .migrations import MODES, MSGC, MigrationPlan, verify_plan
from .pipeline import distribute
from .solver import SolverConfig
from .sweep import DEFAULT_SWEEP_CAP, compare_pipeline, emit_report, sweep_allocations

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_LIMIT = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_circuit(path: str) -> Circuit:
    """Accepts raw inputs too: SWAP patterns are rewritten and tied time
    stamps relabelled."""
    c = Circuit.load(path)
    if c.has_swaps:
        c = eliminate_swap_cp_swap(c)
    if not c.is_normalized:
        c = normalize_times(c)
    return c


def _parse_seeds(text: str) -> list[int]:
    """``"0..9"`` (inclusive) or a comma list."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse seeds {text!r}; use 0..9 or 1,2,3") from None


def _spec_from_args(a, seed=None) -> GenSpec:
    n = a.nprime if a.family in ("draper", "rgqft") else a.n
    if n is None:
        flag = "--nprime" if a.family in ("draper", "rgqft") else "--n"
        raise ConfigError(f"family {a.family} needs {flag}")
    return GenSpec(a.family, n, a.depth, as_fraction(a.p), a.seed if seed is None else seed)


def _solver_config(a) -> SolverConfig:
    return SolverConfig(node_limit=a.node_limit)


def cmd_gen(a) -> int:
    _emit(generate(_spec_from_args(a)).to_json(), a.output)
    return EXIT_OK


def cmd_partition(a) -> int:
    if a.canonical:
        if a.circuit:
            n = _load_circuit(a.circuit).num_qubits
        elif a.n:
            n = a.n
        else:
            raise ConfigError("--canonical needs --circuit or --n")
        alloc = canonical_partition(n, a.k)
        _emit(json.dumps(alloc.to_dict()), a.output)
        return EXIT_OK
    if not a.circuit:
        raise ConfigError("partition needs --circuit (or --canonical)")
    hg = build_hypergraph(_load_circuit(a.circuit))
    hp = heuristic_partition(hg, a.k, a.epsilon, a.seed)
    _emit(json.dumps(hp.allocation.to_dict()), a.output)
    print(f"cut cost {hp.cut_cost} (greedy start {hp.initial_cut_cost})", file=sys.stderr)
    return EXIT_OK


def cmd_distribute(a) -> int:
    circuit = _load_circuit(a.circuit)
    alloc = Allocation.load(a.alloc)
    costs = CostVector.load(a.costs) if a.costs else None
    dist = distribute(circuit, alloc, a.mode, costs, _solver_config(a))
    if a.emit_model:
        write_model(dist.model, a.emit_model)
    print(dist.result.to_json() if a.verbose else
          f"{dist.result.status}: objective {dist.result.objective}, {dist.result.nodes} nodes", file=sys.stderr)
    if dist.plan is None:
        return EXIT_LIMIT if dist.result.status == "timeout" else EXIT_VERIFY
    _emit(json.dumps(dist.plan.to_dict(), indent=1), a.output)
    return EXIT_OK if dist.optimal else EXIT_LIMIT


def cmd_verify(a) -> int:
    report = verify_plan(_load_circuit(a.circuit), MigrationPlan.load(a.plan))
    _emit(json.dumps(report.to_dict()), a.output)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_sweep(a) -> int:
    res = sweep_allocations(_load_circuit(a.circuit), a.k, a.mode, a.cap, a.workers, _solver_config(a))
    if a.output:
        emit_report(list(res.records), a.output)
    else:
        for r in res.records:
            print(f"{r.allocation} {r.msgc} {r.mshc}")
    print(f"histogram {res.histogram}; argmin {' '.join(res.argmin)}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(a) -> int:
    seeds = _parse_seeds(a.seeds)
    spec = _spec_from_args(a, seed=seeds[0])
    recs = compare_pipeline([spec], a.k, a.epsilon, seeds, _solver_config(a))
    if a.output:
        summary = emit_report(recs, a.output)
        print(json.dumps(summary), file=sys.stderr)
    else:
        for r in recs:
            print(f"{r.circuit} seed={r.seed} hp={r.hp_cost} bip={r.bip_cost} mshc={r.mshc_cost}")
    return EXIT_OK


def _add_family_args(p) -> None:
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, help="qubit count (qft, cz-fraction) or vector length (inner-product)")
    p.add_argument("--nprime", type=int, help="register width for draper and rgqft")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--p", default="1/2", help="CZ probability, e.g. 0.5 or 4/7")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dqc", description="Minimum-ebit distribution of CP circuits over k modules.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="generate a benchmark circuit as JSON")
    _add_family_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("partition", help="heuristic or canonical qubit allocation")
    p.add_argument("--circuit")
    p.add_argument("--n", type=int, help="qubit count for --canonical without a circuit")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=as_fraction, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--canonical", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("distribute", help="optimal migration plan for a fixed allocation")
    p.add_argument("--circuit", required=True)
    p.add_argument("--alloc", required=True)
    p.add_argument("--mode", choices=MODES, default=MSGC)
    p.add_argument("--costs", help='JSON link-cost matrix, {"matrix": [[...], ...]}')
    p.add_argument("--emit-model", help="write the BIP as a triplet text file plus legend JSON")
    p.add_argument("--node-limit", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_distribute)

    p = sub.add_parser("verify", help="replay a plan against a circuit")
    p.add_argument("--circuit", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="solve every balanced allocation")
    p.add_argument("--circuit", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default=MSGC)
    p.add_argument("--cap", type=int, default=DEFAULT_SWEEP_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--node-limit", type=int)
    p.add_argument("-o", "--output", help="CSV path; a .summary.json is written beside it")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="heuristic partition vs exact re-solve over seeds")
    _add_family_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=as_fraction, default=None)
    p.add_argument("--seeds", default="0..9")
    p.add_argument("--node-limit", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.func(a)
    except LimitError as exc:
        print(f"dqc: limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InvariantViolation as exc:
        print(f"dqc: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (DqcError, ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"dqc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
