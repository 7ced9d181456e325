"""Binary integer programs for migration selection.

Three models, all of the form ``minimize c.x  s.t.  A x >= b,  x binary``:

``build_msgc_general``
    One column per candidate migration followed by one column per
    third-module migration pair.  Each non-local gate gets a row with 1s on
    its two home migrations and its ``k - 2`` pair selectors (rhs 1); each
    pair gets a linking row ``x_a + x_b - 2 x_pair >= 0``.  Pair selectors cost
    nothing, so an optimum may leave a selector at 0 even when both members
    are chosen; raising it never hurts.
``build_msgc_k3``
    With three modules only home migrations are needed as variables.  Gate
    rows weigh home migrations 2 and the members of the single third-module
    pair 1, with rhs 2.
``build_mshc``
    Home coverage only: a plain set-cover row per gate over its two home
    migrations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, ValidationError
from .migrations import MSGC, MSHC, CandidateSets, Migration, MigrationPair, MigrationPlan

GENERAL = "msgc-general"
K3 = "msgc-k3"
HOME = "mshc"


class Row(NamedTuple):
    cols: tuple[int, ...]
    coefs: tuple[int, ...]
    rhs: int


@dataclass(frozen=True)
class BipModel:
    kind: str
    objective: tuple[Fraction, ...]
    rows: tuple[Row, ...]
    legend: tuple[Migration | MigrationPair, ...]
    num_cover_rows: int

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def nnz(self) -> int:
        return sum(len(r.cols) for r in self.rows)

    def to_csr(self) -> sp.csr_array:
        data, ri, ci = [], [], []
        for i, row in enumerate(self.rows):
            ri.extend([i] * len(row.cols))
            ci.extend(row.cols)
            data.extend(row.coefs)
        return sp.csr_array((np.array(data, dtype=np.int64), (ri, ci)), shape=(self.num_rows, self.num_vars))

    @property
    def rhs(self) -> np.ndarray:
        return np.array([r.rhs for r in self.rows], dtype=np.int64)

    def row_values(self, x: Sequence[int]) -> list[int]:
        return [sum(a * x[j] for j, a in zip(r.cols, r.coefs)) for r in self.rows]

    def violated_rows(self, x: Sequence[int]) -> list[int]:
        return [i for i, (v, r) in enumerate(zip(self.row_values(x), self.rows)) if v < r.rhs]

    def is_feasible(self, x: Sequence[int]) -> bool:
        return len(x) == self.num_vars and not self.violated_rows(x)

    def value(self, x: Sequence[int]) -> Fraction:
        return sum((c for c, v in zip(self.objective, x) if v), Fraction(0))

    def with_objective(self, objective: Sequence[Fraction]) -> "BipModel":
        if len(objective) != self.num_vars:
            raise ConfigError(f"objective has {len(objective)} entries for {self.num_vars} variables")
        return replace(self, objective=tuple(Fraction(c) for c in objective))

    def with_row(self, row: Row) -> "BipModel":
        return replace(self, rows=self.rows + (row,))


def build_msgc_general(cands: CandidateSets) -> BipModel:
    if cands.mode != MSGC:
        raise ConfigError("the general model needs candidates enumerated in msgc mode")
    nM = len(cands.M)
    rows = []
    for g, (a, b) in enumerate(cands.gate_m1):
        cols = [cands.m_index(a), cands.m_index(b)] + [nM + p for p in cands.gate_m2[g]]
        rows.append(Row(tuple(cols), (1,) * len(cols), 1))
    for p, pair in enumerate(cands.M2):
        rows.append(Row((cands.m_index(pair.first), cands.m_index(pair.second), nM + p), (1, 1, -2), 0))
    objective = (Fraction(1),) * nM + (Fraction(0),) * len(cands.M2)
    return BipModel(GENERAL, objective, tuple(rows), cands.M + cands.M2, len(cands.gates))


def build_msgc_k3(cands: CandidateSets) -> BipModel:
    if cands.k != 3:
        raise ConfigError(f"the compact model is only valid for k = 3 modules, got k = {cands.k}")
    if cands.mode != MSGC:
        raise ConfigError("the compact model needs candidates enumerated in msgc mode")
    rows = []
    for g, (a, b) in enumerate(cands.gate_m1):
        entries = {cands.m1_index(a): 2, cands.m1_index(b): 2}
        (pidx,) = cands.gate_m2[g]
        pair = cands.M2[pidx]
        for member in pair:
            j = cands.m1_index(member)
            if j is not None:
                entries.setdefault(j, 1)
        cols = tuple(sorted(entries))
        rows.append(Row(cols, tuple(entries[j] for j in cols), 2))
    return BipModel(K3, (Fraction(1),) * len(cands.M1), tuple(rows), cands.M1, len(cands.gates))


def build_mshc(cands: CandidateSets) -> BipModel:
    rows = []
    for g in range(len(cands.gates)):
        cols = tuple(sorted(cands.gate_m1_indices(g)))
        rows.append(Row(cols, (1, 1), 1))
    return BipModel(HOME, (Fraction(1),) * len(cands.M1), tuple(rows), cands.M1, len(cands.gates))


def build_model(cands: CandidateSets, compact_k3: bool = True) -> BipModel:
    """Pick the model matching the candidates' mode (and k)."""
    if cands.mode == MSHC:
        return build_mshc(cands)
    if cands.k == 3 and compact_k3:
        return build_msgc_k3(cands)
    return build_msgc_general(cands)


class CostVector:
    """Symmetric ebit cost per unordered module pair."""

    def __init__(self, costs: Mapping[tuple[int, int], Fraction]):
        self._costs: dict[frozenset, Fraction] = {}
        for (p, q), c in costs.items():
            if p == q:
                continue
            c = Fraction(c)
            if c <= 0:
                raise ConfigError(f"link cost between modules {p} and {q} must be positive, got {c}")
            key = frozenset((p, q))
            if key in self._costs and self._costs[key] != c:
                raise ConfigError(f"asymmetric cost for modules {p} and {q}")
            self._costs[key] = c

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence]) -> "CostVector":
        return cls({(p, q): Fraction(str(c)) for p, row in enumerate(matrix)
                    for q, c in enumerate(row) if p != q})

    @classmethod
    def uniform(cls, k: int, cost=1) -> "CostVector":
        return cls({(p, q): Fraction(cost) for p in range(k) for q in range(p + 1, k)})

    def __call__(self, p: int, q: int) -> Fraction:
        try:
            return self._costs[frozenset((p, q))]
        except KeyError:
            raise ConfigError(f"no link cost given for modules {p} and {q}") from None

    def scaled(self, factor) -> "CostVector":
        return CostVector({tuple(sorted(k)): v * Fraction(factor) for k, v in self._costs.items()})

    @classmethod
    def load(cls, path: str | Path) -> "CostVector":
        data = json.loads(Path(path).read_text())
        return cls.from_matrix(data["matrix"] if isinstance(data, dict) else data)


def apply_cost_vector(model: BipModel, costs: CostVector, cands: CandidateSets) -> BipModel:
    """Charge each migration the link cost between its home and target module."""
    alloc = cands.allocation
    objective = [costs(alloc[t.qubit], t.module) if isinstance(t, Migration) else Fraction(0)
                 for t in model.legend]
    return model.with_objective(objective)


def solution_to_plan(model: BipModel, x: Sequence[int], cands: CandidateSets) -> MigrationPlan:
    x = [int(v) for v in x]
    if len(x) != model.num_vars or any(v not in (0, 1) for v in x):
        raise ValidationError(f"expected a 0/1 vector of length {model.num_vars}")
    bad = model.violated_rows(x)
    if bad:
        raise ValidationError(f"assignment violates {len(bad)} constraint row(s), first is row {bad[0]}")
    selected = [t for t, v in zip(model.legend, x) if v and isinstance(t, Migration)]
    return MigrationPlan(cands.allocation, frozenset(selected))


# -- export --------------------------------------------------------------

_HEADER = """\
# sparse binary program: minimize sum(c_j x_j) s.t. sum_j a_ij x_j >= r_i, x_j in {0,1}
# p <kind> <vars> <rows> <nnz> | c <col> <cost> | r <row> <rhs> | a <row> <col> <coef>
"""


def write_model(model: BipModel, path: str | Path, legend_path: str | Path | None = None) -> None:
    path = Path(path)
    lines = [_HEADER.rstrip("\n"), f"p {model.kind} {model.num_vars} {model.num_rows} {model.nnz}"]
    lines += [f"c {j} {c}" for j, c in enumerate(model.objective)]
    lines += [f"r {i} {r.rhs}" for i, r in enumerate(model.rows)]
    for i, r in enumerate(model.rows):
        lines += [f"a {i} {j} {a}" for j, a in zip(r.cols, r.coefs)]
    path.write_text("\n".join(lines) + "\n")
    legend_path = Path(legend_path) if legend_path else path.with_suffix(".legend.json")
    legend = []
    for t in model.legend:
        if isinstance(t, MigrationPair):
            legend.append({"pair": [list(t.first), list(t.second)]})
        else:
            legend.append({"migration": list(t)})
    legend_path.write_text(json.dumps({"kind": model.kind, "num_cover_rows": model.num_cover_rows,
                                       "columns": legend}) + "\n")


def read_model(path: str | Path, legend_path: str | Path | None = None) -> BipModel:
    path = Path(path)
    legend_path = Path(legend_path) if legend_path else path.with_suffix(".legend.json")
    meta = json.loads(legend_path.read_text())
    kind, nvars, nrows = None, 0, 0
    obj: list[Fraction] = []
    rhs: list[int] = []
    entries: list[list[tuple[int, int]]] = []
    for line in path.read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        tag, *f = line.split()
        if tag == "p":
            kind, nvars, nrows = f[0], int(f[1]), int(f[2])
            obj = [Fraction(0)] * nvars
            rhs = [0] * nrows
            entries = [[] for _ in range(nrows)]
        elif tag == "c":
            obj[int(f[0])] = Fraction(f[1])
        elif tag == "r":
            rhs[int(f[0])] = int(f[1])
        elif tag == "a":
            entries[int(f[0])].append((int(f[1]), int(f[2])))
        else:
            raise ValidationError(f"unknown record {tag!r} in {path}")
    rows = tuple(Row(tuple(j for j, _ in e), tuple(a for _, a in e), rhs[i]) for i, e in enumerate(entries))
    legend = []
    for c in meta["columns"]:
        if "pair" in c:
            legend.append(MigrationPair(Migration(*c["pair"][0]), Migration(*c["pair"][1])))
        else:
            legend.append(Migration(*c["migration"]))
    return BipModel(kind, tuple(obj), rows, tuple(legend), meta["num_cover_rows"])
