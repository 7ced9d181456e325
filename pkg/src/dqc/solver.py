"""Exact 0/1 solver for covering-type programs ``min c.x, A x >= b``.

Depth-first branch and bound with unit propagation.  Costs must be
non-negative; coefficients may be negative (the linking rows of the general
model).  Rational costs are scaled to integers internally so every
comparison is exact.

Lower bound at a node: committed cost plus a packing of deficient rows whose
positive-cost variables are pairwise disjoint.  Each packed row contributes
the cheapest way to meet its residual (fractional knapsack over its free
variables, rounded up since scaled costs are integral).  A zero-cost variable
whose selection forces others to 1 (a pair selector forcing its two members)
is charged for the variables it forces.

A second bound prices rows by greedy dual ascent over their minimal covering
options (exact for integer solutions, so no rounding slack); the search uses
the larger of the two.

Branching picks the free variable with a positive coefficient in the most
deficient rows (lowest index on ties) and tries 1 before 0.  The incumbent is
seeded by a greedy cover followed by redundant-variable removal.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .bip import BipModel
from .errors import ConfigError, LimitError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
TIMEOUT = "timeout"

BRUTE_FORCE_MAX_VARS = 30
# rows with more free variables than this are skipped by the dual bound
_MAX_OPTION_VARS = 10
BRANCHING_RULE = "most-deficient-rows"
BOUND_RULE = "packing-or-dual-ascent"


@dataclass(frozen=True)
class SolverConfig:
    node_limit: int | None = None
    time_limit: float | None = None
    branching: str = BRANCHING_RULE
    bound: str = BOUND_RULE
    # a time limit makes results timing-dependent, so deterministic runs ignore it
    deterministic: bool = True

    def __post_init__(self):
        if self.branching != BRANCHING_RULE or self.bound != BOUND_RULE:
            raise ConfigError(f"supported rules are branching={BRANCHING_RULE!r}, bound={BOUND_RULE!r}")
        if self.node_limit is not None and self.node_limit < 1:
            raise ConfigError(f"node_limit must be >= 1, got {self.node_limit}")


@dataclass(frozen=True)
class SolveResult:
    status: str
    objective: Fraction | None
    assignment: tuple[int, ...] | None
    nodes: int = 0
    wall_time: float = field(default=0.0, compare=False)
    certificate_row: int | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    def to_dict(self) -> dict:
        d = {"status": self.status,
             "objective": None if self.objective is None else str(self.objective),
             "nodes": self.nodes,
             "assignment": None if self.assignment is None else list(self.assignment)}
        if self.certificate_row is not None:
            d["certificate_row"] = self.certificate_row
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _integer_costs(objective: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = math.lcm(*(Fraction(c).denominator for c in objective)) if objective else 1
    costs = [int(Fraction(c) * scale) for c in objective]
    if any(c < 0 for c in costs):
        raise ValueError("objective must be non-negative")
    return costs, scale


class _Search:
    def __init__(self, model: BipModel, config: SolverConfig):
        self.model = model
        self.config = config
        self.n = model.num_vars
        self.cost, self.scale = _integer_costs(model.objective)
        self.rows = [(list(r.cols), list(r.coefs), r.rhs) for r in model.rows]
        self.col_rows: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (cols, coefs, _) in enumerate(self.rows):
            for j, a in zip(cols, coefs):
                self.col_rows[j].append((i, a))
        self.footprint = self._footprints()
        self.val = [-1] * self.n
        self.lhs1 = [0] * len(self.rows)
        self.posfree = [sum(a for a in coefs if a > 0) for _, coefs, _ in self.rows]
        self.negfree = [sum(a for a in coefs if a < 0) for _, coefs, _ in self.rows]
        self.committed = 0
        self.trail: list[int] = []
        self.best: list[int] | None = None
        self.best_cost: int | None = None
        self.nodes = 0
        self.start = time.perf_counter()
        self.limit_hit = False

    def _footprints(self) -> list[tuple[int, ...]]:
        """Variables forced to 1 when ``j`` is set to 1, read off rows where
        ``j`` has a negative coefficient."""
        out: list[set[int]] = [set() for _ in range(self.n)]
        for cols, coefs, rhs in self.rows:
            pos = sum(a for a in coefs if a > 0)
            for j, aj in zip(cols, coefs):
                if aj >= 0:
                    continue
                for l, al in zip(cols, coefs):
                    if al > 0 and pos - al + aj < rhs:
                        out[j].add(l)
        return [tuple(sorted(s)) for s in out]

    # -- assignment with trail ------------------------------------------
    def _assign(self, j: int, v: int) -> None:
        self.val[j] = v
        self.trail.append(j)
        if v:
            self.committed += self.cost[j]
        for i, a in self.col_rows[j]:
            if a > 0:
                self.posfree[i] -= a
            else:
                self.negfree[i] -= a
            if v:
                self.lhs1[i] += a

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            j = self.trail.pop()
            v = self.val[j]
            self.val[j] = -1
            if v:
                self.committed -= self.cost[j]
            for i, a in self.col_rows[j]:
                if a > 0:
                    self.posfree[i] += a
                else:
                    self.negfree[i] += a
                if v:
                    self.lhs1[i] -= a

    def _fix(self, j: int, v: int) -> bool:
        """Assign and propagate; False on conflict (caller undoes)."""
        queue = [(j, v)]
        while queue:
            j, v = queue.pop()
            cur = self.val[j]
            if cur != -1:
                if cur != v:
                    return False
                continue
            self._assign(j, v)
            for i, _ in self.col_rows[j]:
                cols, coefs, rhs = self.rows[i]
                best = self.lhs1[i] + self.posfree[i]
                if best < rhs:
                    return False
                for l, a in zip(cols, coefs):
                    if self.val[l] != -1:
                        continue
                    if a > 0 and best - a < rhs:
                        queue.append((l, 1))
                    elif a < 0 and best + a < rhs:
                        queue.append((l, 0))
        return True

    # -- bounds -----------------------------------------------------------
    def _row_bound(self, i: int, resid: int) -> tuple[int, set[int]]:
        cols, coefs, _ = self.rows[i]
        opts = []
        touched: set[int] = set()
        shared = False
        for l, a in zip(cols, coefs):
            if a <= 0 or self.val[l] != -1:
                continue
            extra = [m for m in self.footprint[l] if self.val[m] == -1]
            if extra:
                shared = True
            eff = self.cost[l] + sum(self.cost[m] for m in extra)
            opts.append((l, a, eff))
            if self.cost[l]:
                touched.add(l)
            touched.update(m for m in extra if self.cost[m])
        if not opts:
            return 0, touched
        if all(a >= resid for _, a, _ in opts):
            return min(e for _, _, e in opts), touched
        if shared:
            opts = [(l, a, self.cost[l]) for l, a, _ in opts]
        # fractional knapsack: cheapest cost per unit of coefficient first
        opts.sort(key=lambda o: Fraction(o[2], o[1]))
        total = 0
        need = resid
        for _, a, e in opts:
            if a >= need:
                total += -(-e * need // a)
                return total, touched
            total += e
            need -= a
        return total, touched

    def _row_options(self, i: int, resid: int) -> list[tuple[int, ...]] | None:
        """Minimal sets of free variables (footprints included) whose raising
        satisfies row ``i``; None when there are too many to list."""
        cols, coefs, _ = self.rows[i]
        free = [(l, a) for l, a in zip(cols, coefs) if a > 0 and self.val[l] == -1]
        if all(a >= resid for _, a in free):
            subsets = [(l,) for l, _ in free]
        elif len(free) > _MAX_OPTION_VARS:
            return None
        else:
            subsets = []
            for r in range(1, len(free) + 1):
                for combo in combinations(free, r):
                    if sum(a for _, a in combo) < resid:
                        continue
                    ids = {l for l, _ in combo}
                    if not any(s <= ids for s in map(set, subsets)):
                        subsets.append(tuple(sorted(ids)))
        out = []
        for s in subsets:
            full = set(s)
            for l in s:
                full.update(self.footprint[l])
            if all(self.val[m] != 0 for m in full):
                out.append(tuple(m for m in sorted(full) if self.val[m] == -1))
        return out

    def _dual_bound(self) -> int:
        """Greedy dual ascent: each deficient row is priced at its cheapest
        option under residual costs, and that price is then taken out of
        the option's variables so that every option still pays it in full."""
        resid_cost = list(self.cost)
        rows = []
        for i, (_, _, rhs) in enumerate(self.rows):
            need = rhs - self.lhs1[i]
            if need > 0:
                opts = self._row_options(i, need)
                if opts is not None:
                    rows.append((len(opts), i, opts))
        rows.sort()
        total = 0
        for _, _, opts in rows:
            if not opts:
                continue
            price = min(sum(resid_cost[m] for m in o) for o in opts)
            if price <= 0:
                continue
            total += price
            taken: dict[int, int] = {}
            for o in opts:
                due = price - sum(taken.get(m, 0) for m in o)
                for m in o:
                    if due <= 0:
                        break
                    room = resid_cost[m] - taken.get(m, 0)
                    d = min(room, due)
                    if d > 0:
                        taken[m] = taken.get(m, 0) + d
                        due -= d
            for m, d in taken.items():
                resid_cost[m] -= d
        return total

    def lower_bound(self) -> int:
        return max(self._packing_bound(), self.committed + self._dual_bound())

    def _packing_bound(self) -> int:
        cand = []
        for i, (_, _, rhs) in enumerate(self.rows):
            resid = rhs - self.lhs1[i]
            if resid > 0:
                lb, touched = self._row_bound(i, resid)
                if lb > 0:
                    cand.append((-lb, i, touched))
        cand.sort(key=lambda c: (c[0], c[1]))
        used: set[int] = set()
        total = 0
        for neg, _, touched in cand:
            if used.isdisjoint(touched):
                used |= touched
                total -= neg
        return self.committed + total

    # -- incumbent --------------------------------------------------------
    def _greedy(self) -> list[int] | None:
        x = [max(v, 0) for v in self.val]
        lhs = self.model.row_values(x)
        deficient = {i for i, (_, _, rhs) in enumerate(self.rows) if lhs[i] < rhs}

        def raise_var(j):
            for l in (j,) + self.footprint[j]:
                if not x[l]:
                    x[l] = 1
                    for i, a in self.col_rows[l]:
                        lhs[i] += a
                        if lhs[i] >= self.rows[i][2]:
                            deficient.discard(i)
                        else:
                            deficient.add(i)

        while deficient:
            best, best_gain, best_cost = None, 0, 0
            for j in range(self.n):
                if x[j] or self.val[j] == 0:
                    continue
                if any(self.val[m] == 0 for m in self.footprint[j]):
                    continue
                gain = sum(min(a, self.rows[i][2] - lhs[i]) for i, a in self.col_rows[j]
                           if a > 0 and i in deficient)
                if gain <= 0:
                    continue
                c = self.cost[j] + sum(self.cost[m] for m in self.footprint[j] if not x[m])
                if best is None or gain * best_cost > best_gain * c:
                    best, best_gain, best_cost = j, gain, c
            if best is None:
                return None
            raise_var(best)
        # drop variables that are no longer needed, most expensive first
        for j in sorted((j for j in range(self.n) if x[j] and self.val[j] != 1),
                        key=lambda j: (-self.cost[j], -j)):
            if all(lhs[i] - a >= self.rows[i][2] for i, a in self.col_rows[j]):
                x[j] = 0
                for i, a in self.col_rows[j]:
                    lhs[i] -= a
        if self.model.violated_rows(x):
            return None
        return x

    def _offer(self, x: list[int]) -> None:
        c = sum(self.cost[j] for j in range(self.n) if x[j])
        if self.best_cost is None or c < self.best_cost:
            self.best, self.best_cost = list(x), c

    # -- search -----------------------------------------------------------
    def _out_of_budget(self) -> bool:
        cfg = self.config
        if cfg.node_limit is not None and self.nodes >= cfg.node_limit:
            return True
        if cfg.time_limit is not None and not cfg.deterministic:
            return time.perf_counter() - self.start > cfg.time_limit
        return False

    def _branch_var(self) -> int | None:
        score = [0] * self.n
        any_deficient = False
        for i, (cols, coefs, rhs) in enumerate(self.rows):
            if self.lhs1[i] >= rhs:
                continue
            any_deficient = True
            for l, a in zip(cols, coefs):
                if a > 0 and self.val[l] == -1:
                    score[l] += 1
        if not any_deficient:
            return None
        best = max(range(self.n), key=lambda l: (score[l], -l))
        return best if score[best] > 0 else -1

    def dfs(self) -> None:
        if self.limit_hit:
            return
        self.nodes += 1
        if self._out_of_budget():
            self.limit_hit = True
            return
        if self.best_cost is not None and self.lower_bound() >= self.best_cost:
            return
        j = self._branch_var()
        if j is None:
            self._offer([max(v, 0) for v in self.val])
            return
        if j < 0:
            return
        for v in (1, 0):
            mark = len(self.trail)
            if self._fix(j, v):
                self.dfs()
            self._undo(mark)
            if self.limit_hit:
                return

    def run(self) -> SolveResult:
        for i, (_, coefs, rhs) in enumerate(self.rows):
            if sum(a for a in coefs if a > 0) < rhs:
                return self._result(INFEASIBLE, certificate_row=i)
        greedy = self._greedy()
        if greedy is not None:
            self._offer(greedy)
        self.dfs()
        if self.limit_hit:
            return self._result(TIMEOUT)
        return self._result(OPTIMAL if self.best is not None else INFEASIBLE)

    def _result(self, status: str, certificate_row: int | None = None) -> SolveResult:
        obj = None if self.best_cost is None else Fraction(self.best_cost, self.scale)
        return SolveResult(status, obj, None if self.best is None else tuple(self.best),
                           self.nodes, time.perf_counter() - self.start, certificate_row)


def solve(model: BipModel, config: SolverConfig | None = None) -> SolveResult:
    """Provably optimal assignment unless a limit is hit (status ``timeout``
    then carries the best incumbent found)."""
    return _Search(model, config or SolverConfig()).run()


def root_lower_bound(model: BipModel) -> Fraction:
    """The bound the search uses at the root node, as a rational."""
    s = _Search(model, SolverConfig())
    return Fraction(s.lower_bound(), s.scale)


def brute_force(model: BipModel, chunk_bits: int = 16) -> SolveResult:
    """Enumerate all ``2**num_vars`` assignments; ties go to the
    lexicographically smallest assignment."""
    n = model.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise LimitError(f"brute force refuses {n} variables (limit {BRUTE_FORCE_MAX_VARS})")
    start = time.perf_counter()
    costs, scale = _integer_costs(model.objective)
    A = model.to_csr().toarray() if model.num_rows else np.zeros((0, n), dtype=np.int64)
    rhs = model.rhs
    c = np.array(costs, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    step = 1 << min(chunk_bits, n)
    best_val, best_idx = None, None
    for lo in range(0, total, step):
        v = np.arange(lo, min(lo + step, total), dtype=np.int64)
        X = (v[:, None] >> shifts[None, :]) & 1
        ok = np.all(X @ A.T >= rhs[None, :], axis=1) if model.num_rows else np.ones(len(v), bool)
        if not ok.any():
            continue
        vals = np.where(ok, X @ c, np.iinfo(np.int64).max)
        k = int(np.argmin(vals))
        if best_val is None or vals[k] < best_val:
            best_val, best_idx = int(vals[k]), lo + k
    elapsed = time.perf_counter() - start
    if best_idx is None:
        return SolveResult(INFEASIBLE, None, None, total, elapsed)
    x = tuple((best_idx >> (n - 1 - j)) & 1 for j in range(n))
    return SolveResult(OPTIMAL, Fraction(best_val, scale), x, total, elapsed)
