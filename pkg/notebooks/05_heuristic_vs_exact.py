"""
Hypergraph heuristic versus exact re-solve
==========================================

Partition with the hypergraph heuristic, then keep its qubit allocation and
re-solve the migration choice exactly.
"""

# %%
import tempfile
from pathlib import Path

from dqc import GenSpec, build_hypergraph, compare_pipeline, emit_report, gen_draper_adder, heuristic_partition

hg = build_hypergraph(gen_draper_adder(3))
part = heuristic_partition(hg, 3, seed=0)
print(len(hg.hyperedges), "hyperedges; cut", part.cut_cost, "from greedy start", part.initial_cut_cost)
print("allocation", part.allocation)

# %%
specs = [GenSpec("qft", 9), GenSpec("draper", 3), GenSpec("rgqft", 1), GenSpec("cz-fraction", 10, 4, "1/2")]
records = compare_pipeline(specs, 3, seeds=range(5))
for r in records:
    print(f"{r.circuit:28s} seed={r.seed} heuristic={r.hp_cost:3d} exact={r.bip_cost:3d} "
          f"home-only={r.mshc_cost:3d} canonical={r.canonical_cost}")

# %%
out = Path(tempfile.mkdtemp()) / "compare.csv"
summary = emit_report(records, out)
for g in summary["groups"]:
    print(g["family"], g["count"], g["hp_cost"], g["bip_cost"])
