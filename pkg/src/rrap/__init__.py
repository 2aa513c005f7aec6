"""Reliability-redundancy allocation for serial-parallel systems."""

from .model import (
    Evaluation,
    InvalidAllocation,
    LengthMismatch,
    ProblemError,
    RrapError,
    SerialParallelProblem,
    Subsystem,
    benchmark_problem,
    compare,
    evaluate_constraints,
    evaluate_reliability,
    load_problem,
)
from .optimizer import HybridConfig, RunTrace, hybrid_optimize, solo_optimize
from .oracle import OracleResult, solve_exact_dp, solve_exhaustive, upper_bounds
from .sla import NotAchievable, SlaSizing, SlaSpec, serial_reliability, sla_reliability, sla_size

__all__ = [
    "Evaluation",
    "HybridConfig",
    "InvalidAllocation",
    "LengthMismatch",
    "NotAchievable",
    "OracleResult",
    "ProblemError",
    "RrapError",
    "RunTrace",
    "SerialParallelProblem",
    "SlaSizing",
    "SlaSpec",
    "Subsystem",
    "benchmark_problem",
    "compare",
    "evaluate_constraints",
    "evaluate_reliability",
    "hybrid_optimize",
    "load_problem",
    "serial_reliability",
    "sla_reliability",
    "sla_size",
    "solo_optimize",
    "solve_exact_dp",
    "solve_exhaustive",
    "upper_bounds",
]
