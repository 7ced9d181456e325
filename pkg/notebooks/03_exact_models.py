"""
Exact models and the branch-and-bound solver
============================================

The same instance through the general model, the three-module compact model
and the home-only model, then with heterogeneous link costs.
"""

# %%
import tempfile
from pathlib import Path

from dqc import (Allocation, CostVector, apply_cost_vector, build_msgc_general, build_msgc_k3, build_mshc,
                 enumerate_candidates, gen_qft, solution_to_plan, solve, verify_plan, write_model)
from dqc.migrations import MSHC

c = gen_qft(6)
a = Allocation.from_string("112233")
cands = enumerate_candidates(c, a)

for name, model in [("general", build_msgc_general(cands)), ("compact", build_msgc_k3(cands)),
                    ("home-only", build_mshc(enumerate_candidates(c, a, MSHC)))]:
    res = solve(model)
    print(f"{name:9s} vars={model.num_vars:3d} rows={model.num_rows:3d} nnz={model.nnz:3d} "
          f"optimum={res.objective} nodes={res.nodes}")

# %%
model = build_msgc_k3(cands)
res = solve(model)
plan = solution_to_plan(model, res.assignment, cands)
print(sorted(plan.selected))
print(verify_plan(c, plan))

# %% [markdown]
# Link costs: make module pair (0, 2) ten times dearer.

# %%
costs = CostVector.from_matrix([[0, 1, 10], [1, 0, 1], [10, 1, 0]])
weighted = apply_cost_vector(model, costs, cands)
wres = solve(weighted)
print("weighted optimum", wres.objective, sorted(solution_to_plan(weighted, wres.assignment, cands).selected))

# %%
# export for an external solver
out = Path(tempfile.mkdtemp()) / "qft6.txt"
write_model(model, out)
print(out.read_text().splitlines()[2])
print(model.to_csr().toarray()[:4])
