"""
Circuits, generators and the SWAP rewrite
=========================================

Every benchmark circuit is a list of timed events: single-qubit gates and
controlled-phase gates.  This script builds a few and looks at their shape.
"""

# %%
from collections import Counter

from dqc import CircuitBuilder, eliminate_swap_cp_swap, gen_cz_fraction, gen_draper_adder, gen_qft
from dqc.generators import draper_with_swaps

qft = gen_qft(5)
print(qft.num_qubits, "qubits,", len(qft.unary_events), "unary,", len(qft.binary_events), "CP")
for ev in qft.events[:6]:
    print(ev.t, ev.kind, ev.qubits, ev.theta)

# %% [markdown]
# Random layered circuits: each qubit gets a unary gate with probability
# ``1 - p``; the rest are paired up with CZs.  The same seed gives the same
# bytes everywhere.

# %%
c = gen_cz_fraction(7, 3, "4/7", seed=1)
print(Counter(ev.kind for ev in c.events))
assert c.to_json() == gen_cz_fraction(7, 3, "4/7", seed=1).to_json()

# %% [markdown]
# The adder is first written with bit-reversal SWAPs around the phase ladder.
# Conjugating by a SWAP just exchanges two labels, so each sandwich collapses.

# %%
raw = draper_with_swaps(3)
clean = gen_draper_adder(3)
print("with swaps:", Counter(e.kind for e in raw.events))
print("rewritten: ", Counter(e.kind for e in clean.events))

tiny = CircuitBuilder(3).swap(1, 2).cp(0, 2, 0.7).swap(1, 2).build()
print(eliminate_swap_cp_swap(tiny).events)
