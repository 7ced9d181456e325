"""Minimum-ebit distribution of controlled-phase circuits across networked
quantum modules, via exact binary integer programs over candidate
qubit migrations."""
from .allocation import (Allocation, canonical_partition, count_balanced_allocations,
                         default_epsilon, enumerate_balanced_allocations)
from .bip import (BipModel, CostVector, apply_cost_vector, build_model, build_msgc_general,
                  build_msgc_k3, build_mshc, read_model, solution_to_plan, write_model)
from .circuit import (Circuit, CircuitBuilder, GateEvent, TimeIndex, eliminate_swap_cp_swap,
                      latest_unary_before, nonlocal_gates, normalize_times)
from .errors import ConfigError, DqcError, InvariantViolation, LimitError, RewriteError, ValidationError
from .generators import (GenSpec, SeededStream, gen_cz_fraction, gen_draper_adder, gen_inner_product,
                         gen_qft, gen_rgqft_multiplier, generate)
from .hypergraph import Hypergraph, HpDistribution, build_hypergraph, cut_cost, heuristic_partition
from .migrations import (MSGC, MSHC, CandidateSets, Migration, MigrationPair, MigrationPlan, VerifyReport,
                         enumerate_candidates, gate_coverable_by, verify_plan)
from .pipeline import Distribution, distribute
from .solver import SolveResult, SolverConfig, brute_force, root_lower_bound, solve
from .sweep import CompareRecord, SweepRecord, SweepResult, compare_pipeline, emit_report, sweep_allocations

__version__ = "0.1.0"
