"""Weak Pareto fronts of small mixed-integer multiobjective problems."""

from .algorithms import AlgorithmSpec, RunStats, brute_force_weak_front, run_algorithm, run_refinement
from .core import ArchiveEntry, DecisionPoint, FrontArchive, archive_merge, filter_weak_front, strictly_dominates
from .expr import evaluate, parse_expression
from .problems import ProblemDef, builtin, load_problem, parse_problem
from .solvers import SolverConfig

__all__ = [
    "AlgorithmSpec",
    "ArchiveEntry",
    "DecisionPoint",
    "FrontArchive",
    "ProblemDef",
    "RunStats",
    "SolverConfig",
    "archive_merge",
    "brute_force_weak_front",
    "builtin",
    "evaluate",
    "filter_weak_front",
    "load_problem",
    "parse_expression",
    "parse_problem",
    "run_algorithm",
    "run_refinement",
    "strictly_dominates",
]
