"""One-call distribution: candidates -> model -> solve -> plan -> verify."""
from __future__ import annotations

from dataclasses import dataclass

from .allocation import Allocation
from .bip import BipModel, CostVector, apply_cost_vector, build_model, solution_to_plan
from .circuit import Circuit
from .errors import InvariantViolation
from .migrations import MSGC, CandidateSets, MigrationPlan, VerifyReport, enumerate_candidates, verify_plan
from .solver import OPTIMAL, SolveResult, SolverConfig, solve


@dataclass(frozen=True)
class Distribution:
    cands: CandidateSets
    model: BipModel
    result: SolveResult
    plan: MigrationPlan | None
    report: VerifyReport | None

    @property
    def ebit_cost(self) -> int | None:
        return None if self.plan is None else self.plan.ebit_cost

    @property
    def optimal(self) -> bool:
        return self.result.status == OPTIMAL


def distribute(circuit: Circuit, allocation: Allocation, mode: str = MSGC,
               costs: CostVector | None = None, config: SolverConfig | None = None,
               compact_k3: bool = True) -> Distribution:
    """Minimum-ebit migration plan for a fixed allocation.

    The extracted plan is replayed through :func:`verify_plan`; a plan that
    fails, or (with uniform costs) whose size differs from the objective,
    raises :class:`InvariantViolation`.
    """
    cands = enumerate_candidates(circuit, allocation, mode)
    model = build_model(cands, compact_k3=compact_k3)
    if costs is not None:
        model = apply_cost_vector(model, costs, cands)
    result = solve(model, config)
    if result.assignment is None:
        return Distribution(cands, model, result, None, None)
    plan = solution_to_plan(model, result.assignment, cands)
    report = verify_plan(circuit, plan)
    if not report.ok:
        raise InvariantViolation(f"solver plan for {allocation} leaves {len(report.failures)} gate(s) uncovered")
    if costs is None and result.objective != plan.ebit_cost:
        raise InvariantViolation(f"objective {result.objective} differs from plan size {plan.ebit_cost}")
    return Distribution(cands, model, result, plan, report)
