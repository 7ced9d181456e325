"""
Migrations and coverage
=======================

Fix a qubit allocation, list candidate migrations, and replay a plan through
the verifier to see which gates it makes executable.
"""

# %%
from dqc import Allocation, CircuitBuilder, Migration, MigrationPlan, enumerate_candidates, verify_plan

# three CZs in a triangle, one qubit per module
tri = CircuitBuilder(3).cz(0, 1).cz(0, 2).cz(1, 2).build()
alloc = Allocation([0, 1, 2], 3)
cands = enumerate_candidates(tri, alloc)
print("all candidates:", len(cands.M))
print("home migrations per gate:", cands.gate_m1)
print("third-module pairs:", cands.M2)

# %% [markdown]
# Moving qubits 0 and 2 into module 1 covers all three gates: two directly,
# and the 0-2 gate because both qubits now have copies in module 1.

# %%
plan = MigrationPlan(alloc, frozenset({Migration(0, 1, 0), Migration(2, 1, 0)}))
print(verify_plan(tri, plan))

# %%
# a copy lives only until the qubit's next unary gate
c = CircuitBuilder(2).cz(0, 1).h(0).cz(0, 1).build()
early = MigrationPlan(Allocation([0, 1], 2), frozenset({Migration(0, 1, 0)}))
print(verify_plan(c, early).to_dict())
print(verify_plan(c, early.with_(Migration(0, 1, 2))).to_dict())
