"""Mixed integer linear program container.

A model is a list of typed, bounded variables plus sparse linear constraints.
Variable and constraint ids are dense integers assigned in creation order, so
a model built the same way twice is identical structure-for-structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class Sense(str, Enum):
    MIN = "min"
    MAX = "max"


class VarKind(str, Enum):
    BINARY = "binary"
    INTEGER = "integer"        # nonnegative integer unless bounds say otherwise
    CONTINUOUS = "continuous"


class Relation(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class ModelError(ValueError):
    """Raised for malformed model input (non-finite data, unknown ids, ...)."""


@dataclass
class Variable:
    vid: int
    kind: VarKind
    lb: float
    ub: float
    obj: float
    name: str = ""

    @property
    def is_integer(self) -> bool:
        return self.kind is not VarKind.CONTINUOUS


@dataclass
class Constraint:
    cid: int
    coeffs: dict[int, float]   # var id -> coefficient, zero entries dropped
    relation: Relation
    rhs: float
    name: str = ""


def _check_finite(value: float, what: str) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ModelError(f"{what} must be finite, got {value!r}")
    return value


@dataclass
class MilpModel:
    """Sparse MILP: ``sense`` of sum(obj_j * x_j) under linear constraints."""

    sense: Sense = Sense.MAX
    name: str = "model"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    # -- construction -----------------------------------------------------

    def add_variable(
        self,
        kind: VarKind | str = VarKind.CONTINUOUS,
        lb: float = 0.0,
        ub: float = math.inf,
        obj: float = 0.0,
        name: str = "",
    ) -> int:
        kind = VarKind(kind)
        obj = _check_finite(obj, "objective coefficient")
        lb = float(lb)
        ub = float(ub)
        if math.isnan(lb) or math.isnan(ub):
            raise ModelError("variable bounds may not be NaN")
        if kind is VarKind.BINARY:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        if lb > ub:
            raise ModelError(f"empty bound interval [{lb}, {ub}] for new variable")
        vid = len(self.variables)
        self.variables.append(Variable(vid, kind, lb, ub, obj, name or f"x{vid}"))
        return vid

    def add_constraint(
        self,
        coeffs: dict[int, float] | Iterable[tuple[int, float]],
        relation: Relation | str,
        rhs: float,
        name: str = "",
    ) -> int:
        relation = Relation(relation)
        rhs = _check_finite(rhs, "constraint rhs")
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        compact: dict[int, float] = {}
        for vid, coef in items:
            coef = _check_finite(coef, f"coefficient of variable {vid}")
            if not 0 <= vid < len(self.variables):
                raise ModelError(f"constraint references unknown variable id {vid}")
            if coef != 0.0:
                compact[vid] = compact.get(vid, 0.0) + coef
        cid = len(self.constraints)
        self.constraints.append(
            Constraint(cid, compact, relation, rhs, name or f"c{cid}")
        )
        return cid

    # -- views -------------------------------------------------------------

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def integer_ids(self) -> list[int]:
        return [v.vid for v in self.variables if v.is_integer]

    def objective_value(self, values: Sequence[float]) -> float:
        return float(sum(v.obj * values[v.vid] for v in self.variables if v.obj))

    def validate(self) -> None:
        """Check the structural invariants; raise ModelError on violation."""
        for v in self.variables:
            if v.kind is VarKind.BINARY and not (v.lb >= 0.0 and v.ub <= 1.0):
                raise ModelError(f"binary variable {v.vid} has bounds [{v.lb}, {v.ub}]")
            if v.lb > v.ub:
                raise ModelError(f"variable {v.vid} has empty bounds [{v.lb}, {v.ub}]")
        for c in self.constraints:
            for vid in c.coeffs:
                if not 0 <= vid < len(self.variables):
                    raise ModelError(
                        f"constraint {c.cid} references unknown variable {vid}"
                    )

    def constraint_violation(self, values: Sequence[float]) -> float:
        """Largest absolute violation of any constraint at ``values``."""
        worst = 0.0
        for c in self.constraints:
            act = sum(coef * values[vid] for vid, coef in c.coeffs.items())
            if c.relation is Relation.LE:
                worst = max(worst, act - c.rhs)
            elif c.relation is Relation.GE:
                worst = max(worst, c.rhs - act)
            else:
                worst = max(worst, abs(act - c.rhs))
        for v in self.variables:
            worst = max(worst, v.lb - values[v.vid], values[v.vid] - v.ub)
        return float(worst)


def build_model(sense: Sense | str = Sense.MAX, name: str = "model") -> MilpModel:
    return MilpModel(sense=Sense(sense), name=name)
