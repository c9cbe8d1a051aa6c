"""Bound-tightening presolve.

The only reductions applied are the ones implied directly by variable bounds:
activity-based bound strengthening, fixing of pinned variables, dropping rows
that can never bind, and fixing of columns that appear in no remaining row.
Reductions stay valid under the bound tightenings branch-and-bound performs
later, so presolve runs once at the root.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .model import MilpModel, Relation, Sense

_FIX_TOL = 1e-9
_FEAS_TOL = 1e-7
_INT_TOL = 1e-6


class PresolveInfeasible(Exception):
    """A row is unsatisfiable within the current variable bounds."""


class PresolveUnbounded(Exception):
    """An objective-improving column has no row support and no finite bound."""


@dataclass
class ReducedProblem:
    """Reduced MILP in row form plus the mapping back to the original model."""

    a: sp.csr_matrix             # live rows over kept columns
    rel: np.ndarray              # '<=', '>=', '=' per live row
    rhs: np.ndarray
    cost: np.ndarray             # minimization costs over kept columns
    lb: np.ndarray
    ub: np.ndarray
    is_int: np.ndarray
    keep_cols: np.ndarray        # original variable id per reduced column
    fixed_value: np.ndarray      # full-length vector holding fixed values
    obj_offset: float            # constant objective term from fixed columns
    sense_flip: bool             # True when the original model maximizes

    @property
    def n_cols(self) -> int:
        return int(self.keep_cols.size)

    def expand(self, x_reduced: np.ndarray) -> np.ndarray:
        full = self.fixed_value.copy()
        full[self.keep_cols] = x_reduced
        return full


def extract_arrays(model: MilpModel):
    """Model lists -> (csr matrix, relations, rhs, cost, lb, ub, is_int)."""
    n = model.n_variables
    cost = np.array([v.obj for v in model.variables], dtype=float)
    lb = np.array([v.lb for v in model.variables], dtype=float)
    ub = np.array([v.ub for v in model.variables], dtype=float)
    is_int = np.array([v.is_integer for v in model.variables], dtype=bool)

    rows_i: list[int] = []
    cols_i: list[int] = []
    vals: list[float] = []
    b = np.empty(model.n_constraints, dtype=float)
    rel = np.empty(model.n_constraints, dtype="U2")
    for c in model.constraints:
        b[c.cid] = c.rhs
        rel[c.cid] = c.relation.value
        for vid, coef in c.coeffs.items():
            rows_i.append(c.cid)
            cols_i.append(vid)
            vals.append(coef)
    a = sp.csr_matrix(
        (vals, (rows_i, cols_i)), shape=(model.n_constraints, n), dtype=float
    )
    return a, rel, b, cost, lb, ub, is_int


def _round_integer_bounds(lb, ub, is_int):
    lb[is_int] = np.ceil(lb[is_int] - _INT_TOL)
    ub[is_int] = np.floor(ub[is_int] + _INT_TOL)


def presolve(model: MilpModel, max_passes: int = 12) -> ReducedProblem:
    """Tighten bounds, drop never-binding rows, fix decided columns.

    Raises PresolveInfeasible / PresolveUnbounded when the bounds alone decide
    the model.
    """
    a, rel, b, cost, lb, ub, is_int = extract_arrays(model)
    sense_flip = model.sense is Sense.MAX
    if sense_flip:
        cost = -cost
    m_orig, n = a.shape

    # analysis view: every row as <=, equalities contributing a +/- pair
    eq = rel == Relation.EQ.value
    ge = rel == Relation.GE.value
    sign = np.where(ge, -1.0, 1.0)
    d = sp.diags(sign)
    a_le = (d @ a).tocsr()
    b_le = sign * b
    orig_of = np.arange(m_orig)
    if eq.any():
        a_le = sp.vstack([a_le, -a[eq]], format="csr")
        b_le = np.concatenate([b_le, -b[eq]])
        orig_of = np.concatenate([orig_of, np.flatnonzero(eq)])
    m_le = a_le.shape[0]

    _round_integer_bounds(lb, ub, is_int)
    if np.any(lb > ub + _FIX_TOL):
        raise PresolveInfeasible("variable with empty domain")

    data = a_le.data
    indices = a_le.indices
    row_of = np.repeat(np.arange(m_le), np.diff(a_le.indptr))
    pos = data > 0
    live_le = np.ones(m_le, dtype=bool)

    for _ in range(max_passes):
        changed = False
        lb_f = np.where(np.isfinite(lb), lb, 0.0)
        ub_f = np.where(np.isfinite(ub), ub, 0.0)
        inf_lb = ~np.isfinite(lb)
        inf_ub = ~np.isfinite(ub)

        # min/max activity of each <= row and the count of infinite terms
        contrib = np.where(pos, data * lb_f[indices], data * ub_f[indices])
        entry_inf = np.where(pos, inf_lb[indices], inf_ub[indices])
        min_act = np.zeros(m_le)
        np.add.at(min_act, row_of, contrib)
        n_inf = np.zeros(m_le, dtype=np.int64)
        np.add.at(n_inf, row_of, entry_inf.astype(np.int64))

        contrib_max = np.where(pos, data * ub_f[indices], data * lb_f[indices])
        entry_inf_max = np.where(pos, inf_ub[indices], inf_lb[indices])
        max_act = np.zeros(m_le)
        np.add.at(max_act, row_of, contrib_max)
        n_inf_max = np.zeros(m_le, dtype=np.int64)
        np.add.at(n_inf_max, row_of, entry_inf_max.astype(np.int64))

        tol_b = _FEAS_TOL * (1 + np.abs(b_le))
        infeas = live_le & (n_inf == 0) & (min_act > b_le + tol_b)
        if infeas.any():
            bad = orig_of[np.flatnonzero(infeas)[:5]]
            raise PresolveInfeasible(f"rows {bad.tolist()} unsatisfiable within bounds")
        redundant = live_le & (n_inf_max == 0) & (max_act <= b_le + tol_b)
        if redundant.any():
            live_le[redundant] = False
            changed = True

        # per-entry candidate bounds from the slack the other terms leave
        usable = live_le[row_of] & (
            (n_inf[row_of] == 0) | ((n_inf[row_of] == 1) & entry_inf)
        )
        rest = np.where(entry_inf, min_act[row_of], min_act[row_of] - contrib)
        slack = b_le[row_of] - rest
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = slack / data
        ok = usable & np.isfinite(cand)

        with np.errstate(invalid="ignore"):
            up_mask = ok & pos
            if up_mask.any():
                new_ub = ub.copy()
                np.minimum.at(new_ub, indices[up_mask], cand[up_mask])
                improved = np.isfinite(new_ub) & (
                    new_ub < ub - 1e-9 * (1 + np.abs(new_ub))
                )
                if improved.any():
                    ub = np.where(improved, new_ub, ub)
                    changed = True
            lo_mask = ok & ~pos
            if lo_mask.any():
                new_lb = lb.copy()
                np.maximum.at(new_lb, indices[lo_mask], cand[lo_mask])
                improved = np.isfinite(new_lb) & (
                    new_lb > lb + 1e-9 * (1 + np.abs(new_lb))
                )
                if improved.any():
                    lb = np.where(improved, new_lb, lb)
                    changed = True

        _round_integer_bounds(lb, ub, is_int)
        if np.any(lb > ub + _FIX_TOL):
            raise PresolveInfeasible("bound tightening emptied a domain")
        if not changed:
            break

    # an original row survives while any of its <= images does
    live_row = np.zeros(m_orig, dtype=bool)
    live_row[orig_of[live_le]] = True

    # substitute fixed columns
    fixed = (ub - lb) <= _FIX_TOL
    fixed_value = np.zeros(n)
    fixed_value[fixed] = 0.5 * (lb[fixed] + ub[fixed])
    int_fixed = fixed & is_int
    fixed_value[int_fixed] = np.round(fixed_value[int_fixed])

    keep_cols = np.flatnonzero(~fixed)
    a_live = a[live_row]
    rhs_live = b[live_row] - a_live @ fixed_value
    rel_live = rel[live_row]
    a_red = a_live[:, keep_cols].tocsr() if keep_cols.size else sp.csr_matrix(
        (a_live.shape[0], 0)
    )

    # columns without any live row: settle by objective sign
    col_nnz = np.diff(a_red.tocsc().indptr) if keep_cols.size else np.zeros(0, int)
    empty_local = col_nnz == 0
    for local_j in np.flatnonzero(empty_local):
        j = keep_cols[local_j]
        if cost[j] > 0:
            target = lb[j]
        elif cost[j] < 0:
            target = ub[j]
        else:
            target = lb[j] if np.isfinite(lb[j]) else min(max(0.0, lb[j]), ub[j])
        if not np.isfinite(target):
            raise PresolveUnbounded(f"column {j} improves without bound")
        fixed_value[j] = target
    if empty_local.any():
        keep_cols = keep_cols[~empty_local]
        a_red = a_red[:, ~empty_local].tocsr()

    # rows emptied by the substitutions
    row_nnz = np.diff(a_red.indptr)
    hollow = row_nnz == 0
    if hollow.any():
        r = rhs_live[hollow]
        kinds = rel_live[hollow]
        tol = _FEAS_TOL * (1 + np.abs(r))
        bad = ((kinds == "<=") & (0 > r + tol)) | ((kinds == ">=") & (0 < r - tol)) | (
            (kinds == "=") & (np.abs(r) > tol)
        )
        if bad.any():
            raise PresolveInfeasible("fixed assignment violates a constraint")
        keep_rows = ~hollow
        a_red = a_red[keep_rows]
        rhs_live = rhs_live[keep_rows]
        rel_live = rel_live[keep_rows]

    obj_offset = float(cost @ fixed_value)
    return ReducedProblem(
        a=a_red.tocsr(),
        rel=rel_live,
        rhs=rhs_live,
        cost=cost[keep_cols],
        lb=lb[keep_cols],
        ub=ub[keep_cols],
        is_int=is_int[keep_cols],
        keep_cols=keep_cols,
        fixed_value=fixed_value,
        obj_offset=obj_offset,
        sense_flip=sense_flip,
    )
