"""Bounded-variable revised simplex over sparse columns.

Rows ``a.x {<=,>=,=} b`` get a logical column each (slack with sign-matched
bounds; equalities get a fixed [0,0] slack), so the working system is always
``A_ext z = b`` with bounds on every column. A composite phase 1 drives the
total bound violation of the basic solution to zero from any starting basis,
which doubles as the warm-start path after branch-and-bound bound changes.

Basis solves go through a sparse LU factorization refreshed every few dozen
pivots, with product-form eta updates in between. Pricing is full Dantzig
with first-index tie-breaking; the ratio test is a two-pass Harris variant
that prefers large pivot elements within a feasibility-tolerance band. After
a run of degenerate steps the entering rule falls back to Bland's rule and
stays there until the objective makes real progress.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

_DUAL_TOL = 1e-7
_FEAS_TOL = 1e-7
_PIVOT_TOL = 1e-7
_STALL_LIMIT = 40
_REFACTOR_EVERY = 30


class SimplexStatus(IntEnum):
    OPTIMAL = 0
    INFEASIBLE = 1
    UNBOUNDED = 2
    ITER_LIMIT = 3


class VarStatus(IntEnum):
    AT_LOWER = 0
    AT_UPPER = 1
    BASIC = 2
    FREE_NB = 3


class SimplexNumericalError(RuntimeError):
    pass


@dataclass
class SimplexResult:
    status: SimplexStatus
    objective: float
    x: np.ndarray                 # structural variable values
    basis: np.ndarray
    vstat: np.ndarray
    iterations: int
    infeasibility: float = 0.0
    reduced_costs: np.ndarray | None = None   # structural part, final pricing


@dataclass
class _Factor:
    lu: object
    etas: list = field(default_factory=list)   # (row, w, w_r) product-form updates

    def ftran(self, v: np.ndarray) -> np.ndarray:
        z = self.lu.solve(v)
        for r, w, wr in self.etas:
            t = z[r] / wr
            if t != 0.0:
                z -= w * t
            z[r] = t
        return z

    def btran(self, v: np.ndarray) -> np.ndarray:
        y = v.astype(float).copy()
        for r, w, wr in reversed(self.etas):
            t = (y[r] - (w @ y - w[r] * y[r])) / wr
            y[r] = t
        return self.lu.solve(y, trans="T")


class BoundedSimplex:
    """Primal simplex on ``min c.x  s.t.  A x rel b, lb <= x <= ub``.

    The constraint matrix is fixed at construction; bounds vary per solve
    call, which is what branch-and-bound needs.
    """

    def __init__(self, a: sp.csr_matrix, rel: np.ndarray, rhs: np.ndarray,
                 cost: np.ndarray):
        m, n = a.shape
        self.m = m
        self.n = n
        self.rhs = np.asarray(rhs, dtype=float)
        a_ext = sp.hstack([a, sp.eye(m, format="csc")], format="csc")
        a_ext.sort_indices()
        self.a_ext = a_ext
        self.at_ext = a_ext.T.tocsr()
        self.col_indptr = a_ext.indptr
        self.col_indices = a_ext.indices
        self.col_data = a_ext.data

        slack_lb = np.zeros(m)
        slack_ub = np.zeros(m)
        for i, r in enumerate(rel):
            if r == "<=":
                slack_lb[i], slack_ub[i] = 0.0, np.inf
            elif r == ">=":
                slack_lb[i], slack_ub[i] = -np.inf, 0.0
            else:
                slack_lb[i], slack_ub[i] = 0.0, 0.0
        self.slack_lb = slack_lb
        self.slack_ub = slack_ub
        self.base_cost = np.concatenate([np.asarray(cost, dtype=float), np.zeros(m)])
        self.dual_tol = _DUAL_TOL * (1.0 + np.abs(self.base_cost))
        self.phase1_tol = np.full(n + m, _DUAL_TOL)

    # -- column access ------------------------------------------------------

    def _column(self, j: int) -> np.ndarray:
        col = np.zeros(self.m)
        s, e = self.col_indptr[j], self.col_indptr[j + 1]
        col[self.col_indices[s:e]] = self.col_data[s:e]
        return col

    # -- main entry ----------------------------------------------------------

    def solve(
        self,
        lb: np.ndarray,
        ub: np.ndarray,
        basis: np.ndarray | None = None,
        vstat: np.ndarray | None = None,
        iter_limit: int | None = None,
        perturb: bool | None = None,
    ) -> SimplexResult:
        m, n = self.m, self.n
        exact_lb = np.concatenate([lb, self.slack_lb])
        exact_ub = np.concatenate([ub, self.slack_ub])
        cost = self.base_cost
        if perturb is None:
            perturb = basis is None     # cold solves fight plateaus; warm don't
        if iter_limit is None:
            iter_limit = 40 * (m + n) + 20_000

        # deterministic bound perturbation against degenerate plateaus; the
        # exact bounds come back before anything is returned
        if perturb:
            rng = np.random.default_rng(905)
            jitter = rng.uniform(0.25, 1.0, size=2 * (n + m))
            fixed_cols = exact_lb == exact_ub
            scale_lo = 1e-7 * (1.0 + np.abs(np.where(np.isfinite(exact_lb),
                                                     exact_lb, 0.0)))
            scale_hi = 1e-7 * (1.0 + np.abs(np.where(np.isfinite(exact_ub),
                                                     exact_ub, 0.0)))
            lb_ext = np.where(fixed_cols, exact_lb,
                              exact_lb - scale_lo * jitter[: n + m])
            ub_ext = np.where(fixed_cols, exact_ub,
                              exact_ub + scale_hi * jitter[n + m :])
        else:
            lb_ext = exact_lb.copy()
            ub_ext = exact_ub.copy()
        perturbed = perturb

        if basis is None or vstat is None:
            basis, vstat = self._crash_basis(lb_ext, ub_ext, cost)
        else:
            basis = basis.astype(np.int64).copy()
            vstat = vstat.astype(np.int8).copy()
            # a nonbasic status pointing at an infinite bound degrades to free
            nb_lo = (vstat == VarStatus.AT_LOWER) & ~np.isfinite(lb_ext)
            nb_up = (vstat == VarStatus.AT_UPPER) & ~np.isfinite(ub_ext)
            vstat[nb_up & np.isfinite(lb_ext)] = VarStatus.AT_LOWER
            vstat[nb_lo | (nb_up & ~np.isfinite(lb_ext))] = VarStatus.FREE_NB

        x_ext = np.where(
            vstat == VarStatus.AT_UPPER, ub_ext,
            np.where(np.isfinite(lb_ext), lb_ext, 0.0),
        )
        x_ext[vstat == VarStatus.FREE_NB] = 0.0
        x_ext[~np.isfinite(x_ext)] = 0.0

        factor = self._refactor(basis)
        x_b = self._recompute_basics(factor, basis, vstat, x_ext)
        lbB = lb_ext[basis]
        ubB = ub_ext[basis]

        it = 0
        stalled = 0
        bland = False
        bland_anchor = np.inf      # objective when Bland engaged
        repairs = 0
        gamma = np.ones(n + m)     # devex reference weights
        unit = np.zeros(m)
        last_d = None              # latest phase-2 pricing vector

        tol_lo = _FEAS_TOL * (1.0 + np.abs(lbB))
        tol_hi = _FEAS_TOL * (1.0 + np.abs(ubB))

        while True:
            if it >= iter_limit:
                return self._finish(SimplexStatus.ITER_LIMIT, basis, vstat, x_ext,
                                    x_b, it)
            with np.errstate(invalid="ignore"):
                below = x_b < lbB - tol_lo
                above = x_b > ubB + tol_hi
            in_phase1 = bool(below.any() or above.any())

            if in_phase1:
                cb = np.where(above, 1.0, np.where(below, -1.0, 0.0))
                y = factor.btran(cb)
                d = -(self.at_ext @ y)
                entering = self._choose_entering(d, vstat, lb_ext, ub_ext, bland,
                                                 self.phase1_tol, gamma)
            else:
                y = factor.btran(cost[basis])
                d = cost - self.at_ext @ y
                last_d = d
                entering = self._choose_entering(d, vstat, lb_ext, ub_ext, bland,
                                                 self.dual_tol, gamma)
            if entering < 0:
                if in_phase1:
                    infeas = float(
                        np.where(below, lbB - x_b, 0.0).sum()
                        + np.where(above, x_b - ubB, 0.0).sum()
                    )
                    return self._finish(SimplexStatus.INFEASIBLE, basis, vstat,
                                        x_ext, x_b, it, infeas)
                if perturbed:
                    # optimum of the jittered box: restore the exact bounds
                    # and clean up from the same basis
                    perturbed = False
                    lb_ext = exact_lb.copy()
                    ub_ext = exact_ub.copy()
                    at_lo = vstat == VarStatus.AT_LOWER
                    at_hi = vstat == VarStatus.AT_UPPER
                    x_ext[at_lo] = np.where(np.isfinite(lb_ext[at_lo]),
                                            lb_ext[at_lo], 0.0)
                    x_ext[at_hi] = ub_ext[at_hi]
                    factor = self._refactor(basis)
                    x_b = self._recompute_basics(factor, basis, vstat, x_ext)
                    lbB = lb_ext[basis]
                    ubB = ub_ext[basis]
                    with np.errstate(invalid="ignore"):
                        tol_lo = _FEAS_TOL * (1.0 + np.abs(np.where(
                            np.isfinite(lbB), lbB, 0.0)))
                        tol_hi = _FEAS_TOL * (1.0 + np.abs(np.where(
                            np.isfinite(ubB), ubB, 0.0)))
                    continue
                # clean optimum: refresh factors once to wash drift
                factor = self._refactor(basis)
                x_b = self._recompute_basics(factor, basis, vstat, x_ext)
                with np.errstate(invalid="ignore"):
                    below = x_b < lbB - tol_lo
                    above = x_b > ubB + tol_hi
                if (below.any() or above.any()) and repairs < 3:
                    repairs += 1
                    continue
                return self._finish(SimplexStatus.OPTIMAL, basis, vstat, x_ext,
                                    x_b, it, d_vec=last_d)

            sigma = 1.0
            if vstat[entering] == VarStatus.AT_UPPER:
                sigma = -1.0
            elif vstat[entering] == VarStatus.FREE_NB and d[entering] > 0:
                sigma = -1.0

            w = factor.ftran(self._column(entering))
            delta = -sigma * w

            t, r, flip = self._ratio_test(
                delta, x_b, lbB, ubB, below, above, tol_lo, tol_hi,
                flip_range=ub_ext[entering] - lb_ext[entering],
            )
            if t is None:
                if in_phase1:
                    factor = self._refactor(basis)
                    x_b = self._recompute_basics(factor, basis, vstat, x_ext)
                    if not bland:
                        bland = True
                        bland_anchor = np.inf
                        continue
                    raise SimplexNumericalError("phase-1 direction unblocked")
                return self._finish(SimplexStatus.UNBOUNDED, basis, vstat, x_ext,
                                    x_b, it)

            if t <= 1e-9:
                stalled += 1
                if stalled >= _STALL_LIMIT and not bland:
                    bland = True
                    bland_anchor = float(cost[basis] @ x_b) if not in_phase1 else np.inf
            else:
                stalled = 0
                if bland and not in_phase1:
                    obj_now = float(cost[basis] @ x_b)
                    if obj_now < bland_anchor - 1e-7 * (1.0 + abs(bland_anchor)):
                        bland = False
                elif bland and in_phase1:
                    bland = False

            x_b += delta * t
            new_val = x_ext[entering] + sigma * t
            if flip:
                x_ext[entering] = new_val
                vstat[entering] = (
                    VarStatus.AT_UPPER
                    if vstat[entering] == VarStatus.AT_LOWER
                    else VarStatus.AT_LOWER
                )
            else:
                leaving = basis[r]
                lo, hi = lbB[r], ubB[r]
                land = x_b[r]
                if not np.isfinite(hi) or (
                    np.isfinite(lo) and abs(land - lo) <= abs(land - hi)
                ):
                    x_ext[leaving] = lo if np.isfinite(lo) else 0.0
                    vstat[leaving] = (
                        VarStatus.AT_LOWER if np.isfinite(lo) else VarStatus.FREE_NB
                    )
                else:
                    x_ext[leaving] = hi
                    vstat[leaving] = VarStatus.AT_UPPER

                # devex weight propagation along the leaving row
                alpha = w[r]
                unit[r] = 1.0
                rho = factor.btran(unit.copy())
                unit[r] = 0.0
                z = self.at_ext @ rho
                gq = gamma[entering]
                ratio_sq = (z / alpha) ** 2
                np.maximum(gamma, ratio_sq * gq, out=gamma)
                gamma[leaving] = max(gq / (alpha * alpha), 1.0)
                if gq > 1e8:
                    gamma[:] = 1.0

                basis[r] = entering
                vstat[entering] = VarStatus.BASIC
                x_b[r] = new_val
                lbB[r] = lb_ext[entering]
                ubB[r] = ub_ext[entering]
                tol_lo[r] = _FEAS_TOL * (1.0 + abs(lbB[r]) if np.isfinite(lbB[r]) else 1.0)
                tol_hi[r] = _FEAS_TOL * (1.0 + abs(ubB[r]) if np.isfinite(ubB[r]) else 1.0)
                factor.etas.append((r, w, w[r]))
                if len(factor.etas) >= _REFACTOR_EVERY:
                    factor = self._refactor(basis)
                    x_b = self._recompute_basics(factor, basis, vstat, x_ext)
            it += 1

    # -- helpers --------------------------------------------------------------

    def _crash_basis(self, lb_ext, ub_ext, cost):
        """Slack basis with cost-signed nonbasic placement.

        Zero-cost bounded columns start at their upper bound (for this
        package's models those are availability indicators, best assumed on),
        and free single-row columns displace their row's slack so bookkeeping
        equalities start consistent.
        """
        m, n = self.m, self.n
        basis = np.arange(n, n + m, dtype=np.int64)
        vstat = np.empty(n + m, dtype=np.int8)
        fin_lb = np.isfinite(lb_ext[:n])
        fin_ub = np.isfinite(ub_ext[:n])
        c = cost[:n]
        vstat[:n] = np.where(
            (c > 0) & fin_lb, VarStatus.AT_LOWER,
            np.where(
                (c <= 0) & fin_ub, VarStatus.AT_UPPER,
                np.where(fin_lb, VarStatus.AT_LOWER,
                         np.where(fin_ub, VarStatus.AT_UPPER, VarStatus.FREE_NB)),
            ),
        )
        vstat[n:] = VarStatus.BASIC
        col_nnz = np.diff(self.col_indptr[: n + 1])
        free_single = np.flatnonzero(~fin_lb & ~fin_ub & (col_nnz == 1))
        for j in free_single:
            row = int(self.col_indices[self.col_indptr[j]])
            if basis[row] == n + row:
                slack = n + row
                basis[row] = j
                vstat[j] = VarStatus.BASIC
                vstat[slack] = (
                    VarStatus.AT_LOWER
                    if np.isfinite(lb_ext[slack])
                    else VarStatus.AT_UPPER
                )
        return basis, vstat

    def _choose_entering(self, d, vstat, lb_ext, ub_ext, bland: bool, tol,
                         gamma) -> int:
        fixed = lb_ext == ub_ext
        can_up = (vstat == VarStatus.AT_LOWER) & ~fixed & (d < -tol)
        can_dn = (vstat == VarStatus.AT_UPPER) & ~fixed & (d > tol)
        free = (vstat == VarStatus.FREE_NB) & (np.abs(d) > tol)
        eligible = can_up | can_dn | free
        if not eligible.any():
            return -1
        if bland:
            return int(np.argmax(eligible))
        score = np.where(eligible, d * d / gamma, -1.0)
        return int(np.argmax(score))

    @staticmethod
    def _ratio_test(delta, x_b, lbB, ubB, below, above, tol_lo, tol_hi, flip_range):
        """Two-pass Harris ratio test.

        Pass 1 finds the largest step the tolerance-relaxed bounds allow;
        pass 2 picks, among blockers within that step, the one with the
        biggest pivot element. Infeasible basics block where they re-enter
        their violated bound.
        """
        m = delta.size
        neg = delta < -_PIVOT_TOL
        pos = delta > _PIVOT_TOL
        feas = ~(below | above)

        t_strict = np.full(m, np.inf)
        t_slack = np.full(m, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            sel = feas & neg & np.isfinite(lbB)
            t_strict[sel] = (x_b[sel] - lbB[sel]) / -delta[sel]
            t_slack[sel] = (x_b[sel] - lbB[sel] + tol_lo[sel]) / -delta[sel]
            sel = feas & pos & np.isfinite(ubB)
            t_strict[sel] = (ubB[sel] - x_b[sel]) / delta[sel]
            t_slack[sel] = (ubB[sel] - x_b[sel] + tol_hi[sel]) / delta[sel]
            sel = below & pos
            t_strict[sel] = (lbB[sel] - x_b[sel]) / delta[sel]
            t_slack[sel] = (lbB[sel] - x_b[sel] + tol_lo[sel]) / delta[sel]
            sel = above & neg
            t_strict[sel] = (x_b[sel] - ubB[sel]) / -delta[sel]
            t_slack[sel] = (x_b[sel] - ubB[sel] + tol_hi[sel]) / -delta[sel]
        np.maximum(t_strict, 0.0, out=t_strict)

        t_lim = t_slack.min() if m else np.inf
        t_flip = flip_range if np.isfinite(flip_range) else np.inf
        if t_flip <= t_lim:
            if not np.isfinite(t_flip):
                return None, -1, False
            return t_flip, -1, True
        if not np.isfinite(t_lim):
            return None, -1, False
        cands = t_strict <= t_lim
        score = np.where(cands, np.abs(delta), -1.0)
        r = int(np.argmax(score))
        return float(t_strict[r]), r, False

    def _refactor(self, basis: np.ndarray) -> _Factor:
        b_mat = self.a_ext[:, basis].tocsc()
        try:
            lu = splu(b_mat)
        except RuntimeError as exc:
            raise SimplexNumericalError(f"singular basis: {exc}") from exc
        return _Factor(lu=lu)

    def _recompute_basics(self, factor, basis, vstat, x_ext) -> np.ndarray:
        x_nb = x_ext.copy()
        x_nb[basis] = 0.0
        r = self.rhs - self.a_ext @ x_nb
        x_b = factor.ftran(r)
        x_ext[basis] = x_b
        return x_b

    def _finish(self, status, basis, vstat, x_ext, x_b, it, infeas=0.0,
                d_vec=None):
        x_ext[basis] = x_b
        x = x_ext[: self.n].copy()
        obj = float(self.base_cost[: self.n] @ x)
        return SimplexResult(
            status=status,
            objective=obj,
            x=x,
            basis=basis.copy(),
            vstat=vstat.copy(),
            iterations=it,
            infeasibility=float(infeas),
            reduced_costs=None if d_vec is None else d_vec[: self.n].copy(),
        )
