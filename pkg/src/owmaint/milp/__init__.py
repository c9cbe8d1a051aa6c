"""Embedded mixed-integer linear programming toolkit.

Branch-and-bound over a bounded-variable revised simplex, plus fixed-format
MPS export for cross-checking against external solvers.
"""

from .model import (
    Constraint,
    MilpModel,
    ModelError,
    Relation,
    Sense,
    VarKind,
    Variable,
    build_model,
)
from .mps import parse_mps, write_mps
from .solver import MilpSolution, SolveError, SolverConfig, solve

export_standard_form = write_mps

__all__ = [
    "Constraint",
    "MilpModel",
    "MilpSolution",
    "ModelError",
    "Relation",
    "Sense",
    "SolveError",
    "SolverConfig",
    "VarKind",
    "Variable",
    "build_model",
    "export_standard_form",
    "parse_mps",
    "solve",
    "write_mps",
]
