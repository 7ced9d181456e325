"""Benchmark circuit families: QFT, CZ-fraction, Draper adder, QFT multiplier,
inner product.

Every generator returns a normalized :class:`~dqc.circuit.Circuit` containing
only unary and controlled-phase events.  Qubit 0 is the most significant bit
of every register, and QFT blocks are built without their final bit-reversal
SWAPs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuit import Circuit, CircuitBuilder, eliminate_swap_cp_swap
from .errors import ConfigError

FAMILIES = ("qft", "cz-fraction", "draper", "rgqft", "inner-product")

_TWO53 = 1 << 53
_TWO64 = 1 << 64


class SeededStream:
    """Portable random stream: PCG64 raw 64-bit words plus pinned derivations.

    Only :meth:`numpy.random.PCG64.random_raw` is taken from numpy (its bit
    stream is covered by numpy's stability policy).  Bounded integers use
    rejection sampling and Bernoulli draws compare a 53-bit word against an
    exact rational, so the sequence of decisions is reproducible from the
    seed alone.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < _TWO64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self._bits = np.random.PCG64(seed)

    def raw(self) -> int:
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        limit = _TWO64 - _TWO64 % n
        while True:
            r = self.raw()
            if r < limit:
                return r % n

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability ``p`` (exact rational threshold)."""
        u = self.raw() >> 11
        return u * p.denominator < p.numerator * _TWO53

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def as_fraction(p) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, float):
        return Fraction(repr(p))
    return Fraction(p)


def _qft_block(b: CircuitBuilder, qubits: list[int]) -> None:
    for a, qa in enumerate(qubits):
        b.h(qa)
        for c in range(a + 1, len(qubits)):
            b.cp(qa, qubits[c], 2 * math.pi / 2 ** (c - a + 1))


def _iqft_block(b: CircuitBuilder, qubits: list[int]) -> None:
    for a in reversed(range(len(qubits))):
        for c in reversed(range(a + 1, len(qubits))):
            b.cp(qubits[a], qubits[c], -2 * math.pi / 2 ** (c - a + 1))
        b.h(qubits[a])


def gen_qft(n: int) -> Circuit:
    """QFT on ``n`` qubits without the final SWAPs.

    For each qubit ``i`` top to bottom: ``H(i)`` followed by
    ``CP(i, j, 2*pi/2**(j-i+1))`` for ``j = i+1 .. n-1``.
    """
    if n < 1:
        raise ConfigError(f"QFT needs n >= 1, got {n}")
    b = CircuitBuilder(n)
    _qft_block(b, list(range(n)))
    return b.build()


def gen_cz_fraction(n: int, d: int, p, seed: int) -> Circuit:
    """Random layered circuit: each layer gives every qubit a unary gate with
    probability ``1 - p`` and randomly pairs the rest with CZ gates.

    Within a layer the unaries come first (qubit order), then the CZs in
    pairing order.  Pairing shuffles the idle qubits and pairs neighbours; an
    odd one out stays idle.
    """
    p = as_fraction(p)
    if n < 2 or d < 1 or not 0 <= p <= 1:
        raise ConfigError(f"cz-fraction needs n >= 2, d >= 1, 0 <= p <= 1 (got n={n}, d={d}, p={p})")
    rng = SeededStream(seed)
    keep_unary = 1 - p
    b = CircuitBuilder(n)
    for _ in range(d):
        idle = []
        for q in range(n):
            if rng.bernoulli(keep_unary):
                b.u(q, "U")
            else:
                idle.append(q)
        rng.shuffle(idle)
        for i in range(0, len(idle) - 1, 2):
            b.cz(idle[i], idle[i + 1])
    return b.build()


def _draper_ladder(n_prime: int, b_of) -> list[tuple[int, int, float]]:
    # a-qubit outer loop, b-qubit inner loop (top to bottom)
    return [(j, b_of(i), 2 * math.pi / 2 ** (j - i + 1))
            for j in range(n_prime) for i in range(j + 1)]


def draper_with_swaps(n_prime: int) -> Circuit:
    """Draper adder written with full QFT blocks, before SWAP elimination.

    ``QFT_b`` with its bit-reversal SWAPs, the ``a -> b`` phase ladder in the
    reversed labelling, then ``QFT_b^-1`` (whose leading SWAPs mirror the
    first ones).  Each ladder gate therefore sits inside a
    ``SWAP CP SWAP`` sandwich.
    """
    if n_prime < 1:
        raise ConfigError(f"register width must be >= 1, got {n_prime}")
    a = list(range(n_prime))
    breg = list(range(n_prime, 2 * n_prime))
    b = CircuitBuilder(2 * n_prime)
    _qft_block(b, breg)
    reversal = [(breg[i], breg[n_prime - 1 - i]) for i in range(n_prime // 2)]
    for q1, q2 in reversal:
        b.swap(q1, q2)
    for j, bq, theta in _draper_ladder(n_prime, lambda i: breg[n_prime - 1 - i]):
        b.cp(a[j], bq, theta)
    for q1, q2 in reversal:
        b.swap(q1, q2)
    _iqft_block(b, breg)
    return b.build()


def gen_draper_adder(n_prime: int) -> Circuit:
    """In-place ``b <- a + b mod 2**n_prime``; register a is qubits
    ``0..n'-1`` and b is ``n'..2n'-1``.  Contains no SWAPs."""
    return eliminate_swap_cp_swap(draper_with_swaps(n_prime))


def ccp(b: CircuitBuilder, c1: int, c2: int, tgt: int, theta: float) -> None:
    """Doubly-controlled phase as 5 CPs and 4 Hadamards.

    ``CP(c2,t,theta/2) CX(c1,c2) CP(c2,t,-theta/2) CX(c1,c2) CP(c1,t,theta/2)``
    with each CX written as ``H(c2) CP(c1,c2,pi) H(c2)``.
    """
    half = theta / 2
    b.cp(c2, tgt, half)
    b.h(c2).cp(c1, c2, math.pi).h(c2)
    b.cp(c2, tgt, -half)
    b.h(c2).cp(c1, c2, math.pi).h(c2)
    b.cp(c1, tgt, half)


def gen_rgqft_multiplier(n_prime: int) -> Circuit:
    """Out-of-place multiplier ``out <- out + a*b mod 2**(2n')``.

    Qubits: a = ``0..n'-1``, b = ``n'..2n'-1``, out = ``2n'..4n'-1``.
    Doubly-controlled rotations whose angle is a multiple of ``2*pi`` are
    identities and are not emitted.
    """
    if n_prime < 1:
        raise ConfigError(f"register width must be >= 1, got {n_prime}")
    a = list(range(n_prime))
    breg = list(range(n_prime, 2 * n_prime))
    out = list(range(2 * n_prime, 4 * n_prime))
    b = CircuitBuilder(4 * n_prime)
    _qft_block(b, out)
    for j in range(n_prime):
        for l in range(n_prime):
            for i in range(2 * n_prime):
                k = j + l + 2 - i
                if k >= 1:
                    ccp(b, a[j], breg[l], out[i], 2 * math.pi / 2 ** k)
    _iqft_block(b, out)
    return b.build()


def gen_inner_product(n: int) -> Circuit:
    """Phase oracle ``(-1)**(x.y)`` on ``2n`` qubits: ``CZ(i, n+i)``."""
    if n < 1:
        raise ConfigError(f"inner product needs n >= 1, got {n}")
    b = CircuitBuilder(2 * n)
    for i in range(n):
        b.cz(i, n + i)
    return b.build()


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int = 0
    depth: int = 1
    p: Fraction = Fraction(1, 2)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "p", as_fraction(self.p))

    @property
    def is_random(self) -> bool:
        return self.family == "cz-fraction"

    @property
    def name(self) -> str:
        if self.family == "cz-fraction":
            return f"cz-fraction-n{self.n}-d{self.depth}-p{self.p}-s{self.seed}"
        return f"{self.family}-{self.n}"

    def build(self) -> Circuit:
        return generate(self)


def generate(spec: GenSpec) -> Circuit:
    """Dispatch on ``spec.family``.  ``n`` is the register width ``n'`` for
    the draper and rgqft families."""
    if spec.family == "qft":
        return gen_qft(spec.n)
    if spec.family == "cz-fraction":
        return gen_cz_fraction(spec.n, spec.depth, spec.p, spec.seed)
    if spec.family == "draper":
        return gen_draper_adder(spec.n)
    if spec.family == "rgqft":
        return gen_rgqft_multiplier(spec.n)
    return gen_inner_product(spec.n)
