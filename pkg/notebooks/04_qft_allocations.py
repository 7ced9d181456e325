"""
Which allocation is best for QFT?
=================================

Solve every balanced allocation of a QFT circuit and look at the spread.
"""

# %%
from dqc import canonical_partition, gen_qft, sweep_allocations

res = sweep_allocations(gen_qft(6), 3)
for r in sorted(res.records, key=lambda r: (r.msgc, r.allocation)):
    print(r.allocation, r.msgc, r.mshc)
print("histogram", res.histogram, "argmin", res.argmin)

# %% [markdown]
# Larger cases.  The contiguous-block allocation keeps coming out on top.

# %%
for n, k in [(8, 4), (9, 3)]:
    res = sweep_allocations(gen_qft(n), k)
    canon = str(canonical_partition(n, k))
    print(f"QFT({n}) k={k}: {len(res.records)} allocations, histogram {res.histogram}, "
          f"{canon} optimal: {canon in res.argmin}")

# %%
# home-only coverage on the canonical partition costs m*k(k-1)/2
from dqc import distribute
from dqc.migrations import MSHC

for k, m in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)]:
    d = distribute(gen_qft(k * m), canonical_partition(k * m, k), MSHC)
    print(k, m, d.ebit_cost, m * k * (k - 1) // 2)
