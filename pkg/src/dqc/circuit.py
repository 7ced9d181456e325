"""Circuit representation: timed unary gates and controlled-phase gates.

A circuit is a list of gate events ordered by an integer time stamp.  Only two
gate kinds reach the optimizer:

* ``"u"``  -- an arbitrary single-qubit gate (the label is metadata only),
* ``"cp"`` -- a controlled-phase gate on an unordered qubit pair.

``"swap"`` events are tolerated on input so that :func:`eliminate_swap_cp_swap`
can remove them; every downstream stage rejects them.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .errors import RewriteError, ValidationError

UNARY = "u"
CP = "cp"
SWAP = "swap"
_BINARY_KINDS = (CP, SWAP)


@dataclass(frozen=True)
class GateEvent:
    kind: str
    qubits: tuple[int, ...]
    t: int
    theta: float | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind == UNARY:
            if len(self.qubits) != 1:
                raise ValidationError(f"unary gate at t={self.t} needs one qubit, got {self.qubits}")
        elif self.kind in _BINARY_KINDS:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValidationError(f"{self.kind} gate at t={self.t} needs two distinct qubits, got {self.qubits}")
            if self.qubits[0] > self.qubits[1]:
                object.__setattr__(self, "qubits", (self.qubits[1], self.qubits[0]))
        else:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if self.t < 1:
            raise ValidationError(f"gate times start at 1 (0 is the initial migration slot), got {self.t}")

    @property
    def is_unary(self) -> bool:
        return self.kind == UNARY

    @property
    def is_binary(self) -> bool:
        return self.kind != UNARY

    def at(self, t: int) -> "GateEvent":
        return GateEvent(self.kind, self.qubits, t, self.theta, self.label)


def unary(q: int, t: int, label: str | None = None) -> GateEvent:
    return GateEvent(UNARY, (q,), t, label=label)


def cp(q1: int, q2: int, t: int, theta: float | None = math.pi) -> GateEvent:
    return GateEvent(CP, (q1, q2), t, theta=theta)


def swap(q1: int, q2: int, t: int) -> GateEvent:
    return GateEvent(SWAP, (q1, q2), t)


@dataclass(frozen=True)
class Circuit:
    """An ``num_qubits``-qubit circuit as a time-ordered tuple of events.

    Construction checks qubit ranges and that times never decrease.  Ties are
    accepted so that raw input can be loaded and then passed through
    :func:`normalize_times`; anything that needs the distinct-times assumption
    (the time index, candidate migrations) checks :attr:`is_normalized`.
    """

    num_qubits: int
    events: tuple[GateEvent, ...] = field(default=())

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValidationError(f"num_qubits must be >= 1, got {self.num_qubits}")
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        prev = 0
        for ev in events:
            for q in ev.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValidationError(f"gate at t={ev.t} references qubit {q} outside [0, {self.num_qubits})")
            if ev.t < prev:
                raise ValidationError(f"event times must be non-decreasing (t={ev.t} after t={prev})")
            prev = ev.t

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @cached_property
    def is_normalized(self) -> bool:
        return all(a.t < b.t for a, b in zip(self.events, self.events[1:]))

    @property
    def unary_events(self) -> list[GateEvent]:
        return [ev for ev in self.events if ev.is_unary]

    @property
    def binary_events(self) -> list[GateEvent]:
        return [ev for ev in self.events if ev.is_binary]

    @property
    def has_swaps(self) -> bool:
        return any(ev.kind == SWAP for ev in self.events)

    @cached_property
    def time_index(self) -> "TimeIndex":
        return TimeIndex.build(self)

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        out = []
        for ev in self.events:
            if ev.is_unary:
                d = {"kind": UNARY, "q": ev.qubits[0], "t": ev.t}
                if ev.label is not None:
                    d["label"] = ev.label
            else:
                d = {"kind": ev.kind, "q": list(ev.qubits), "t": ev.t}
                if ev.theta is not None:
                    d["theta"] = float(ev.theta)
            out.append(d)
        return {"num_qubits": self.num_qubits, "events": out}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        try:
            n = int(data["num_qubits"])
            events = []
            for d in data["events"]:
                kind = d["kind"]
                if kind == UNARY:
                    q = d["q"]
                    q = q[0] if isinstance(q, list) else q
                    events.append(GateEvent(UNARY, (int(q),), int(d["t"]), label=d.get("label")))
                else:
                    theta = d.get("theta")
                    events.append(GateEvent(kind, tuple(int(x) for x in d["q"]), int(d["t"]),
                                            theta=None if theta is None else float(theta)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed circuit JSON: {exc!r}") from exc
        return cls(n, events)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Circuit":
        return cls.from_json(Path(path).read_text())


class CircuitBuilder:
    """Append gates with automatically increasing time stamps."""

    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        self.events: list[GateEvent] = []

    def _next_t(self) -> int:
        return len(self.events) + 1

    def u(self, q: int, label: str | None = None) -> "CircuitBuilder":
        self.events.append(unary(q, self._next_t(), label))
        return self

    def h(self, q: int) -> "CircuitBuilder":
        return self.u(q, "H")

    def cp(self, q1: int, q2: int, theta: float = math.pi) -> "CircuitBuilder":
        self.events.append(cp(q1, q2, self._next_t(), theta))
        return self

    def cz(self, q1: int, q2: int) -> "CircuitBuilder":
        return self.cp(q1, q2, math.pi)

    def swap(self, q1: int, q2: int) -> "CircuitBuilder":
        self.events.append(swap(q1, q2, self._next_t()))
        return self

    def extend(self, other: Circuit, qubit_map: Sequence[int] | None = None) -> "CircuitBuilder":
        for ev in other.events:
            qs = ev.qubits if qubit_map is None else tuple(qubit_map[q] for q in ev.qubits)
            self.events.append(GateEvent(ev.kind, qs, self._next_t(), ev.theta, ev.label))
        return self

    def build(self) -> Circuit:
        return Circuit(self.num_qubits, self.events)


@dataclass(frozen=True)
class TimeIndex:
    """Per-qubit sorted unary times and gate times of a normalized circuit."""

    unary_times: tuple[tuple[int, ...], ...]
    gate_times: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, circuit: Circuit) -> "TimeIndex":
        if not circuit.is_normalized:
            raise ValidationError("circuit has repeated time stamps; call normalize_times first")
        ut: list[list[int]] = [[] for _ in range(circuit.num_qubits)]
        gt: list[list[int]] = [[] for _ in range(circuit.num_qubits)]
        for ev in circuit.events:
            for q in ev.qubits:
                gt[q].append(ev.t)
            if ev.is_unary:
                ut[ev.qubits[0]].append(ev.t)
        return cls(tuple(map(tuple, ut)), tuple(map(tuple, gt)))

    def latest_unary_before(self, qubit: int, t: int) -> int:
        return latest_unary_before(self, qubit, t)

    def slots(self, qubit: int) -> tuple[int, ...]:
        """Valid migration times for ``qubit``: 0 followed by its unary times."""
        return (0,) + self.unary_times[qubit]


def latest_unary_before(time_index: TimeIndex, qubit: int, t: int) -> int:
    """Latest unary-gate time on ``qubit`` that is ``<= t``, or 0 if none."""
    times = time_index.unary_times[qubit]
    pos = bisect_right(times, t)
    return times[pos - 1] if pos else 0


def normalize_times(circuit: Circuit) -> Circuit:
    """Relabel event times to 1..len(events), keeping list order."""
    return Circuit(circuit.num_qubits, [ev.at(i) for i, ev in enumerate(circuit.events, start=1)])


def nonlocal_gates(circuit: Circuit, allocation) -> list[GateEvent]:
    """Binary events whose qubits sit in different modules under ``allocation``."""
    where = allocation.map if hasattr(allocation, "map") else allocation
    if len(where) < circuit.num_qubits:
        raise ValidationError("allocation does not cover every qubit")
    return [ev for ev in circuit.events
            if ev.is_binary and where[ev.qubits[0]] != where[ev.qubits[1]]]


def _swap_window(events: list[GateEvent | None], start: int) -> int | None:
    """Index of the SWAP closing the one opened at ``start``, if it exists.

    The closing SWAP acts on the same pair and no other SWAP touches either
    qubit in between.
    """
    pair = set(events[start].qubits)
    for idx in range(start + 1, len(events)):
        ev = events[idx]
        if ev is None or ev.kind != SWAP:
            continue
        if set(ev.qubits) == pair:
            return idx
        if pair & set(ev.qubits):
            return None
    return None


def eliminate_swap_cp_swap(circuit: Circuit) -> Circuit:
    """Remove SWAP pairs by conjugation: ``SWAP_bc X SWAP_bc = X[b<->c]``.

    The canonical case is ``SWAP_bc CP_ac(theta) SWAP_bc -> CP_ab(theta)``.
    Every gate between the two SWAPs has ``b`` and ``c`` exchanged, which is
    exact for any intervening gate, so runs of controlled phases sharing one
    SWAP pair are rewritten in one step.  Times are renumbered densely.
    """
    events: list[GateEvent | None] = list(circuit.events)
    for start in range(len(events)):
        ev = events[start]
        if ev is None or ev.kind != SWAP:
            continue
        end = _swap_window(events, start)
        if end is None:
            continue
        b, c = ev.qubits
        relabel = {b: c, c: b}
        for idx in range(start + 1, end):
            inner = events[idx]
            if inner is not None and (b in inner.qubits or c in inner.qubits):
                qs = tuple(relabel.get(q, q) for q in inner.qubits)
                events[idx] = GateEvent(inner.kind, qs, inner.t, inner.theta, inner.label)
        events[start] = events[end] = None
    leftover = [ev for ev in events if ev is not None and ev.kind == SWAP]
    if leftover:
        ev = leftover[0]
        raise RewriteError(f"SWAP{ev.qubits} at t={ev.t} matches no SWAP-CP-SWAP pattern")
    return normalize_times(Circuit(circuit.num_qubits, [ev for ev in events if ev is not None]))
