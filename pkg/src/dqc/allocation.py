"""Module allocations: which module each qubit lives in."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from .errors import ConfigError, ValidationError


def default_epsilon(n: int, k: int) -> Fraction:
    """Tightest imbalance that still admits ``ceil(n/k)`` qubits per module."""
    return Fraction(k * -(-n // k), n) - 1


@dataclass(frozen=True)
class Allocation:
    """Total map ``qubit -> module`` over ``k`` modules.

    ``epsilon`` is the imbalance bound: no module may hold more than
    ``(1 + epsilon) * n / k`` qubits.  Left as ``None`` it is derived from the
    map itself (the smallest epsilon the map satisfies).
    """

    map: tuple[int, ...]
    k: int
    epsilon: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(m) for m in self.map))
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not self.map:
            raise ValidationError("allocation must cover at least one qubit")
        bad = [m for m in self.map if not 0 <= m < self.k]
        if bad:
            raise ValidationError(f"module index {bad[0]} outside [0, {self.k})")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", Fraction(max(self.sizes) * self.k, self.n) - 1)
        else:
            eps = Fraction(self.epsilon)
            object.__setattr__(self, "epsilon", eps)
            cap = (1 + eps) * Fraction(self.n, self.k)
            if max(self.sizes) > cap:
                raise ValidationError(f"allocation {self} exceeds the ({self.k}, {eps}) balance cap of {cap} qubits")

    @property
    def n(self) -> int:
        return len(self.map)

    @property
    def sizes(self) -> list[int]:
        out = [0] * self.k
        for m in self.map:
            out[m] += 1
        return out

    def __getitem__(self, q: int) -> int:
        return self.map[q]

    def __len__(self):
        return len(self.map)

    def __str__(self):
        if self.k <= 9:
            return "".join(str(m + 1) for m in self.map)
        return "-".join(str(m + 1) for m in self.map)

    def canonical(self) -> "Allocation":
        """Relabel modules in order of first appearance."""
        return Allocation(canonical_labels(self.map), self.k, self.epsilon)

    def relabel(self, perm: Sequence[int]) -> "Allocation":
        return Allocation([perm[m] for m in self.map], self.k, self.epsilon)

    @classmethod
    def from_string(cls, s: str, k: int | None = None) -> "Allocation":
        """Parse the 1-based digit form used in tables, e.g. ``"112233"``."""
        parts = s.split("-") if "-" in s else list(s)
        mods = [int(c) - 1 for c in parts]
        return cls(mods, k if k is not None else max(mods) + 1)

    def to_dict(self) -> dict:
        return {"k": self.k, "map": list(self.map)}

    @classmethod
    def from_dict(cls, d: dict) -> "Allocation":
        eps = d.get("epsilon")
        return cls(d["map"], int(d["k"]), None if eps is None else Fraction(str(eps)))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Allocation":
        return cls.from_dict(json.loads(Path(path).read_text()))


def canonical_labels(labels: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(m, len(seen)) for m in labels)


def canonical_partition(n: int, k: int) -> Allocation:
    """Qubit ``i`` goes to module ``i // (n/k)``: contiguous blocks of equal size."""
    if k < 1 or n % k:
        raise ConfigError(f"canonical partition needs k | n (n={n}, k={k})")
    m = n // k
    return Allocation([i // m for i in range(n)], k, Fraction(0))


def count_balanced_allocations(n: int, k: int) -> int:
    if n % k:
        raise ConfigError(f"balanced enumeration needs k | n (n={n}, k={k})")
    m = n // k
    return math.factorial(n) // (math.factorial(m) ** k * math.factorial(k))


def enumerate_balanced_allocations(n: int, k: int) -> Iterator[Allocation]:
    """Every allocation with exactly ``n/k`` qubits per module, once per
    module relabelling, in lexicographic order of canonical labels."""
    if n % k:
        raise ConfigError(f"balanced enumeration needs k | n (n={n}, k={k})")
    m = n // k
    labels = [0] * n
    counts = [0] * k

    def rec(i: int, used: int):
        if i == n:
            yield Allocation(tuple(labels), k, Fraction(0))
            return
        for lab in range(min(used + 1, k)):
            if counts[lab] == m:
                continue
            labels[i] = lab
            counts[lab] += 1
            yield from rec(i + 1, max(used, lab + 1))
            counts[lab] -= 1

    yield from rec(0, 0)
