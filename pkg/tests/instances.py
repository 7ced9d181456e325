"""Seeded small instances shared by the test modules."""
from fractions import Fraction

from dqc.allocation import Allocation, default_epsilon
from dqc.generators import SeededStream, gen_cz_fraction

P_CHOICES = (Fraction(3, 10), Fraction(1, 2), Fraction(9, 10))


def random_balanced_allocation(n, k, rng):
    labels = [i % k for i in range(n)]
    rng.shuffle(labels)
    return Allocation(labels, k, default_epsilon(n, k))


def random_instance(seed, k=3, n_range=(3, 8), d_range=(1, 4)):
    """(circuit, allocation) with a random CZ-fraction circuit."""
    rng = SeededStream(10_000 + seed)
    n = n_range[0] + rng.below(n_range[1] - n_range[0] + 1)
    n = max(n, k)
    d = d_range[0] + rng.below(d_range[1] - d_range[0] + 1)
    p = P_CHOICES[rng.below(len(P_CHOICES))]
    circuit = gen_cz_fraction(n, d, p, seed)
    return circuit, random_balanced_allocation(n, k, rng)
