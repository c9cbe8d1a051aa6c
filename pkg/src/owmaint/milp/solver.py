"""Branch-and-bound MILP solver over the embedded simplex.

Nodes are explored best-bound-first (ties broken toward deeper nodes, then
creation order), branching on the most fractional integer variable with the
lowest variable id breaking ties. Child LPs warm-start from the parent's
optimal basis; the composite phase 1 of the simplex absorbs the bound change
in a handful of pivots.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .model import MilpModel
from .presolve import (
    PresolveInfeasible,
    PresolveUnbounded,
    presolve,
)
from .simplex import BoundedSimplex, SimplexStatus

_OBJ_TOL = 1e-9


class SolveError(RuntimeError):
    """Unbounded model or unrecoverable numerical failure."""


@dataclass
class SolverConfig:
    """Knobs for solve(); defaults follow the experiment setup."""

    rel_gap: float = 1e-4
    int_tol: float = 1e-6
    feas_tol: float = 1e-6
    time_limit: float | None = None
    node_limit: int | None = 200_000
    branching: str = "most-fractional"

    def __post_init__(self) -> None:
        if self.rel_gap < 0:
            raise ValueError("relative gap target must be >= 0")
        if self.int_tol <= 0 or self.feas_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.branching != "most-fractional":
            raise ValueError(f"unknown branching rule {self.branching!r}")


@dataclass
class MilpSolution:
    status: str                      # optimal | feasible-gap | infeasible | time-limit
    objective: float | None
    values: np.ndarray | None        # indexed by variable id
    gap: float | None
    nodes: int = 0
    lp_iterations: int = 0
    solve_seconds: float = 0.0

    def value(self, vid: int) -> float:
        if self.values is None:
            raise ValueError("solution carries no values")
        return float(self.values[vid])


@dataclass(order=True)
class _Node:
    key: tuple
    bound: float = field(compare=False)
    depth: int = field(compare=False)
    changes: list = field(compare=False)       # [(col, 'lb'|'ub', value), ...]
    basis: np.ndarray | None = field(compare=False)
    vstat: np.ndarray | None = field(compare=False)


def _fractionality(x: np.ndarray, int_mask: np.ndarray, tol: float) -> int:
    """Most fractional integer index (lowest id on ties), or -1 if integral."""
    frac = np.abs(x - np.round(x))
    frac = np.where(int_mask, frac, -1.0)
    j = int(np.argmax(frac))
    if frac[j] <= tol:
        return -1
    return j


def solve(model: MilpModel, config: SolverConfig | None = None) -> MilpSolution:
    """Solve a MILP to the configured relative gap.

    Raises SolveError for unbounded models; infeasibility is a status, not an
    exception.
    """
    config = config or SolverConfig()
    t0 = time.perf_counter()
    model.validate()

    try:
        red = presolve(model)
    except PresolveInfeasible:
        return MilpSolution("infeasible", None, None, None,
                            solve_seconds=time.perf_counter() - t0)
    except PresolveUnbounded as exc:
        raise SolveError(str(exc)) from exc

    if red.n_cols == 0:
        values = red.fixed_value.copy()
        return _finalize(model, config, values, gap=0.0, nodes=0, lp_iters=0, t0=t0)

    simplex = BoundedSimplex(red.a, red.rel, red.rhs, red.cost)
    int_mask = red.is_int

    incumbent_x: np.ndarray | None = None
    incumbent_obj = math.inf        # reduced-space minimization objective
    nodes_done = 0
    lp_iters = 0
    seq = 0
    last_dive = 0
    deferred_bound = math.inf       # best bound among gap-pruned nodes

    def gap_slack() -> float:
        if incumbent_x is None:
            return 0.0
        return config.rel_gap * max(1.0, abs(incumbent_obj + red.obj_offset))

    def out_of_time() -> bool:
        return (config.time_limit is not None
                and time.perf_counter() - t0 > config.time_limit)

    def try_dive(res, node_lb=None, node_ub=None) -> None:
        """Round-to-nearest dive from an LP point to plant an incumbent."""
        nonlocal incumbent_obj, incumbent_x, lp_iters
        lb = (node_lb if node_lb is not None else red.lb).copy()
        ub = (node_ub if node_ub is not None else red.ub).copy()
        basis, vstat, x = res.basis, res.vstat, res.x
        for _ in range(120):
            if out_of_time():
                return
            j = _fractionality(x, int_mask, config.int_tol)
            if j < 0:
                x_int = x.copy()
                x_int[int_mask] = np.round(x_int[int_mask])
                obj = float(red.cost @ x_int)
                if obj < incumbent_obj - _OBJ_TOL * max(1.0, abs(obj)):
                    incumbent_obj = obj
                    incumbent_x = x_int
                return
            lo0, hi0 = lb[j], ub[j]
            val = min(max(float(np.round(x[j])), lo0), hi0)
            dive_budget = simplex.m + simplex.n + 1000
            lb[j] = ub[j] = val
            dres = simplex.solve(lb, ub, basis=basis, vstat=vstat,
                                 iter_limit=dive_budget)
            lp_iters += dres.iterations
            if dres.status != SimplexStatus.OPTIMAL:
                other = val + 1.0 if x[j] > val else val - 1.0
                if dres.status == SimplexStatus.ITER_LIMIT or not lo0 <= other <= hi0:
                    return
                lb[j] = ub[j] = other
                dres = simplex.solve(lb, ub, basis=basis, vstat=vstat,
                                     iter_limit=dive_budget)
                lp_iters += dres.iterations
                if dres.status != SimplexStatus.OPTIMAL:
                    return
            basis, vstat, x = dres.basis, dres.vstat, dres.x

    root = _Node(key=(-math.inf, 0, 0, 0), bound=-math.inf, depth=0, changes=[],
                 basis=None, vstat=None)
    heap: list[_Node] = [root]
    hit_limit: str | None = None

    while heap:
        if config.time_limit is not None and time.perf_counter() - t0 > config.time_limit:
            hit_limit = "time-limit"
            break
        if config.node_limit is not None and nodes_done >= config.node_limit:
            hit_limit = "node-limit"
            break

        node = heapq.heappop(heap)
        cutoff = incumbent_obj - gap_slack()
        if node.bound >= cutoff - _OBJ_TOL:
            deferred_bound = min(deferred_bound, node.bound)
            continue

        lb = red.lb.copy()
        ub = red.ub.copy()
        for col, side, val in node.changes:
            if side == "lb":
                lb[col] = max(lb[col], val)
            else:
                ub[col] = min(ub[col], val)
        if np.any(lb > ub):
            nodes_done += 1
            continue

        budget = simplex.m + simplex.n + 2000 if node.basis is not None else None
        res = simplex.solve(lb, ub, basis=node.basis, vstat=node.vstat,
                            iter_limit=budget)
        if res.status == SimplexStatus.ITER_LIMIT:
            # stuck warm solve: restart with anti-degeneracy perturbation
            lp_iters += res.iterations
            res = simplex.solve(lb, ub, basis=res.basis, vstat=res.vstat,
                                perturb=True,
                                iter_limit=10 * (simplex.m + simplex.n) + 30_000)
        nodes_done += 1
        lp_iters += res.iterations
        if res.status == SimplexStatus.INFEASIBLE:
            continue
        if res.status == SimplexStatus.UNBOUNDED:
            raise SolveError("LP relaxation is unbounded")
        if res.status == SimplexStatus.ITER_LIMIT:
            raise SolveError("simplex iteration limit hit; model likely degenerate")

        bound = res.objective
        if bound >= cutoff - _OBJ_TOL:
            deferred_bound = min(deferred_bound, bound)
            continue

        j = _fractionality(res.x, int_mask, config.int_tol)
        if j < 0:
            x_int = res.x.copy()
            x_int[int_mask] = np.round(x_int[int_mask])
            obj = float(red.cost @ x_int)
            if obj < incumbent_obj - _OBJ_TOL * max(1.0, abs(obj)):
                incumbent_obj = obj
                incumbent_x = x_int
            continue

        if incumbent_x is None or nodes_done - last_dive >= 200:
            last_dive = nodes_done
            try_dive(res, lb, ub)

        if (node.depth == 0 and incumbent_x is not None
                and res.reduced_costs is not None):
            # reduced-cost fixing: an integer step off the bound already costs
            # more than the optimality window allows
            margin = (incumbent_obj - gap_slack()) - bound
            if margin > 0:
                d = res.reduced_costs
                fix_lo = int_mask & (res.vstat[: red.n_cols] == 0) & (d >= margin)
                fix_hi = int_mask & (res.vstat[: red.n_cols] == 1) & (-d >= margin)
                red.ub[fix_lo] = red.lb[fix_lo]
                red.lb[fix_hi] = red.ub[fix_hi]

        xj = res.x[j]
        for side, val, first in (("lb", math.ceil(xj), True),
                                 ("ub", math.floor(xj), False)):
            seq += 1
            child = _Node(
                key=(bound, -(node.depth + 1), 0 if first else 1, seq),
                bound=bound,
                depth=node.depth + 1,
                changes=node.changes + [(j, side, float(val))],
                basis=res.basis,
                vstat=res.vstat,
            )
            heapq.heappush(heap, child)

    elapsed = time.perf_counter() - t0
    if incumbent_x is None:
        if hit_limit is None:
            return MilpSolution("infeasible", None, None, None, nodes=nodes_done,
                                lp_iterations=lp_iters, solve_seconds=elapsed)
        return MilpSolution("time-limit", None, None, None, nodes=nodes_done,
                            lp_iterations=lp_iters, solve_seconds=elapsed)

    open_bound = min(
        min((n.bound for n in heap), default=math.inf), deferred_bound
    )
    denom = max(1.0, abs(incumbent_obj + red.obj_offset))
    gap = max(0.0, (incumbent_obj - open_bound) / denom)
    if not math.isfinite(gap):
        gap = math.inf
    if gap <= config.rel_gap + 1e-12:
        status = "optimal"
        gap = min(gap, config.rel_gap)
    else:
        status = "time-limit" if hit_limit == "time-limit" else "feasible-gap"

    values = red.expand(incumbent_x)
    return _finalize(model, config, values, gap=gap, nodes=nodes_done,
                     lp_iters=lp_iters, t0=t0, status=status)


def _finalize(model, config, values, gap, nodes, lp_iters, t0,
              status: str = "optimal") -> MilpSolution:
    for v in model.variables:
        if v.is_integer:
            r = round(values[v.vid])
            if abs(values[v.vid] - r) > config.int_tol * 10:
                raise SolveError(f"integer variable {v.vid} left fractional")
            values[v.vid] = float(r)
    worst = model.constraint_violation(values)
    scale = 1.0 + max((abs(c.rhs) for c in model.constraints), default=0.0)
    if worst > config.feas_tol * scale:
        raise SolveError(f"solution violates constraints by {worst:.3e}")
    obj = model.objective_value(values)
    return MilpSolution(
        status=status,
        objective=obj,
        values=values,
        gap=gap,
        nodes=nodes,
        lp_iterations=lp_iters,
        solve_seconds=time.perf_counter() - t0,
    )
