"""Two-stage maintenance MILP for one rolling-horizon iteration.

The short-term horizon (STH) is the next 24 hours at hourly resolution; the
long-term horizon (LTH) runs from the following day to the planning horizon
at daily resolution. Time indices inside the model are relative to the
iteration start (hours 1..24, days 2..d_J) with residual lives decremented
accordingly, so deadline devices stay well defined as the horizon rolls.

Deadline and availability gate terms are evaluated as exact 0/1 indicator
constants (the closed-form limit of the big-exponent device): single-variable
restrictions become variable fixings, and availability rows are generated
only where the gate constant is 0. Because residual lives are whole days, a
24-hour STH is never split by a deadline: either preventive starts are
allowed all day or corrective starts are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .farm import (
    HOURS_PER_DAY,
    FarmInstance,
    Schedule,
    ScheduledAction,
)
from .milp import MilpModel, MilpSolution, build_model


class AssemblyError(ValueError):
    pass


class DecodeError(ValueError):
    pass


class AuditError(AssertionError):
    pass


@dataclass(frozen=True)
class HorizonState:
    """Where the rolling procedure stands before one iteration."""

    iteration: int                    # 1-based counter
    total_days: int                   # planning horizon J in days
    rle_remaining: tuple[int, ...]    # residual life in days, relative, floored at 0
    flags: tuple[int, ...]            # maintenance requirement per turbine

    def __post_init__(self) -> None:
        if not 1 <= self.iteration <= self.total_days:
            raise AssemblyError("iteration counter outside 1..J")
        if len(self.rle_remaining) != len(self.flags):
            raise AssemblyError("per-turbine arrays disagree")
        if any(r < 0 for r in self.rle_remaining):
            raise AssemblyError("relative residual lives must be floored at 0")

    @property
    def n_lth_days(self) -> int:
        return self.total_days - self.iteration

    @property
    def last_rel_day(self) -> int:
        """d_J in relative day units (the STH day is day 1)."""
        return self.total_days - self.iteration + 1

    @property
    def sth_hour_offset(self) -> int:
        """Absolute 0-based hour of the first STH hour."""
        return HOURS_PER_DAY * (self.iteration - 1)

    def abs_day_of_rel(self, d_rel: int) -> int:
        """Relative LTH day (2..d_J) -> absolute 0-based day index."""
        return self.iteration + d_rel - 2


@dataclass
class IterationGrids:
    """Weather-derived parameters restricted to one iteration's index sets."""

    power_sth: np.ndarray     # (24, I)
    access_sth: np.ndarray    # (24, I)
    power_lth: np.ndarray     # (n_lth, I)
    access_lth: np.ndarray    # (n_lth, I)


@dataclass
class IterationPrices:
    hourly: np.ndarray        # (24,)
    daily: np.ndarray         # (n_lth,)
    curtailment: np.ndarray   # (24,)


@dataclass
class VariableMap:
    """Variable ids by (symbol, index); -1 where a symbol was not created."""

    n_turbines: int
    n_lth: int
    pm_sth: np.ndarray        # (24, I) m
    cm_sth: np.ndarray        # (24, I) n
    busy: np.ndarray          # (24, I) x
    avail_sth: np.ndarray     # (24, I) y
    power_sth: np.ndarray     # (24, I) p
    pm_lth: np.ndarray        # (n_lth, I) mL
    cm_lth: np.ndarray        # (n_lth, I) nL
    avail_lth: np.ndarray     # (n_lth, I) yL
    power_lth: np.ndarray     # (n_lth, I) pL
    vessel_sth: int = -1      # v
    overtime: int = -1        # q
    profit_sth: int = -1      # s
    vessel_lth: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    profit_lth: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))


def pm_eligible_gate(time_index: int, rle: int, scale: int = 1) -> bool:
    """Deadline device for preventive starts: allowed while the fractional
    bound ``scale * rle / time_index`` reaches 1, i.e. on or before the RLE."""
    return scale * rle / time_index >= 1.0


def cm_eligible_gate(time_index: int, rle: int, scale: int, beta: float,
                     last_index: int | None = None) -> bool:
    """Fractional eligibility device for corrective starts.

    STH form (last_index None): n <= t / (24*rle + beta).
    LTH form: n <= (d_J - rle) / (d_J - d + beta).
    """
    if beta <= 0 or beta >= 1:
        raise AssemblyError("beta must lie in (0, 1)")
    if last_index is None:
        return time_index / (scale * rle + beta) >= 1.0
    return (last_index - rle) / (last_index - time_index + beta) >= 1.0


def assemble(
    instance: FarmInstance,
    horizon: HorizonState,
    grids: IterationGrids,
    prices: IterationPrices,
) -> tuple[MilpModel, VariableMap]:
    """Build the iteration MILP; returns the model and its variable map.

    Decision and auxiliary columns are created for turbines with the
    maintenance flag raised; production columns exist for every turbine.
    Ineligible starts (deadline gates, inaccessible or end-clipped windows)
    are fixed to zero through bounds, availability rows appear only past the
    residual life, and vacuous gate rows are omitted.
    """
    n = instance.n_turbines
    n_lth = horizon.n_lth_days
    d_last = horizon.last_rel_day
    beta = instance.beta
    rated = instance.rated_mw

    for name, arr, rows in (
        ("power_sth", grids.power_sth, HOURS_PER_DAY),
        ("access_sth", grids.access_sth, HOURS_PER_DAY),
        ("power_lth", grids.power_lth, n_lth),
        ("access_lth", grids.access_lth, n_lth),
    ):
        if arr.shape != (rows, n):
            raise AssemblyError(f"{name} grid has shape {arr.shape}, wanted {(rows, n)}")
        if not np.isfinite(arr).all():
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise AssemblyError(f"{name} has a non-finite entry at {tuple(bad)}")
    if prices.hourly.shape != (HOURS_PER_DAY,) or prices.daily.shape != (n_lth,):
        raise AssemblyError("price series do not match the horizon index sets")
    if prices.curtailment.shape != (HOURS_PER_DAY,):
        raise AssemblyError("curtailment series must cover the STH")

    armed = [i for i in range(n) if horizon.flags[i]]
    taus = instance.repair_hours
    rle = horizon.rle_remaining

    model = build_model("max", name=f"iteration{horizon.iteration}")
    neg = np.full((HOURS_PER_DAY, n), -1, dtype=int)
    vm = VariableMap(
        n_turbines=n,
        n_lth=n_lth,
        pm_sth=neg.copy(), cm_sth=neg.copy(), busy=neg.copy(),
        avail_sth=neg.copy(), power_sth=neg.copy(),
        pm_lth=np.full((n_lth, n), -1, dtype=int),
        cm_lth=np.full((n_lth, n), -1, dtype=int),
        avail_lth=np.full((n_lth, n), -1, dtype=int),
        power_lth=np.full((n_lth, n), -1, dtype=int),
        vessel_lth=np.full(n_lth, -1, dtype=int),
        profit_lth=np.full(n_lth, -1, dtype=int),
    )

    def binary(obj: float, fixed_zero: bool, name: str) -> int:
        ub = 0.0 if fixed_zero else 1.0
        return model.add_variable("binary", lb=0.0, ub=ub, obj=obj, name=name)

    # eligibility masks (deadline gate x access x window fit)
    m_ok = np.zeros((HOURS_PER_DAY, n), dtype=bool)
    n_ok = np.zeros((HOURS_PER_DAY, n), dtype=bool)
    for i in armed:
        fits = np.arange(HOURS_PER_DAY) + taus[i] <= HOURS_PER_DAY
        open_sth = (grids.access_sth[:, i] > 0) & fits
        if rle[i] >= 1:
            m_ok[:, i] = open_sth
        else:
            n_ok[:, i] = open_sth

    # STH variables
    for i in armed:
        for t in range(HOURS_PER_DAY):
            vm.pm_sth[t, i] = binary(-instance.pm_cost, not m_ok[t, i], f"m_{t + 1}_{i + 1}")
            vm.cm_sth[t, i] = binary(-instance.cm_cost, not n_ok[t, i], f"n_{t + 1}_{i + 1}")
        covered = np.zeros(HOURS_PER_DAY, dtype=bool)
        for t in range(HOURS_PER_DAY):
            if m_ok[t, i] or n_ok[t, i]:
                covered[t : t + taus[i]] = True
        for t in range(HOURS_PER_DAY):
            vm.busy[t, i] = binary(-instance.crew_rate, not covered[t], f"x_{t + 1}_{i + 1}")
            vm.avail_sth[t, i] = binary(0.0, False, f"y_{t + 1}_{i + 1}")
    for i in range(n):
        for t in range(HOURS_PER_DAY):
            vm.power_sth[t, i] = model.add_variable(
                "continuous", lb=0.0, ub=rated * float(grids.power_sth[t, i]),
                obj=float(prices.hourly[t]), name=f"p_{t + 1}_{i + 1}",
            )
    vm.vessel_sth = model.add_variable("binary", obj=-instance.rental_cost, name="v")
    vm.overtime = model.add_variable("integer", obj=-instance.overtime_rate, name="q")
    vm.profit_sth = model.add_variable(
        "continuous", lb=-np.inf, ub=np.inf, obj=0.0, name="s"
    )

    # LTH variables
    for k in range(n_lth):
        d_rel = k + 2
        for i in armed:
            ml_ok = grids.access_lth[k, i] > 0 and d_rel <= rle[i]
            nl_ok = grids.access_lth[k, i] > 0 and d_rel > rle[i]
            vm.pm_lth[k, i] = binary(
                -(instance.pm_cost + instance.crew_rate * taus[i]), not ml_ok,
                f"mL_{d_rel}_{i + 1}",
            )
            vm.cm_lth[k, i] = binary(
                -(instance.cm_cost + instance.crew_rate * taus[i]), not nl_ok,
                f"nL_{d_rel}_{i + 1}",
            )
            vm.avail_lth[k, i] = binary(0.0, False, f"yL_{d_rel}_{i + 1}")
        for i in range(n):
            vm.power_lth[k, i] = model.add_variable(
                "continuous", lb=0.0,
                ub=HOURS_PER_DAY * rated * float(grids.power_lth[k, i]),
                obj=float(prices.daily[k]), name=f"pL_{d_rel}_{i + 1}",
            )
        vm.vessel_lth[k] = model.add_variable(
            "binary", obj=-instance.rental_cost, name=f"vL_{d_rel}"
        )
        vm.profit_lth[k] = model.add_variable(
            "continuous", lb=-np.inf, ub=np.inf, obj=0.0, name=f"l_{d_rel}"
        )

    # objective bookkeeping rows: s and l_d equal their profit expressions
    s_row: list[tuple[int, float]] = [(vm.profit_sth, 1.0)]
    for t in range(HOURS_PER_DAY):
        for i in range(n):
            s_row.append((vm.power_sth[t, i], -float(prices.hourly[t])))
        for i in armed:
            s_row.append((vm.pm_sth[t, i], instance.pm_cost))
            s_row.append((vm.cm_sth[t, i], instance.cm_cost))
            s_row.append((vm.busy[t, i], instance.crew_rate))
    s_row.append((vm.vessel_sth, instance.rental_cost))
    s_row.append((vm.overtime, instance.overtime_rate))
    model.add_constraint(s_row, "=", 0.0, name="sth_profit")
    for k in range(n_lth):
        row: list[tuple[int, float]] = [(vm.profit_lth[k], 1.0)]
        for i in range(n):
            row.append((vm.power_lth[k, i], -float(prices.daily[k])))
        for i in armed:
            row.append((vm.pm_lth[k, i], instance.pm_cost + instance.crew_rate * taus[i]))
            row.append((vm.cm_lth[k, i], instance.cm_cost + instance.crew_rate * taus[i]))
        row.append((vm.vessel_lth[k], instance.rental_cost))
        model.add_constraint(row, "=", 0.0, name=f"lth_profit_{k + 2}")

    # one maintenance action somewhere in the horizon per armed turbine; the
    # schedule contract admits exactly one action per turbine and iteration,
    # so the requirement is stated two-sided (the upper side never cuts an
    # optimum with positive action costs, and it keeps the relaxation honest)
    for i in armed:
        row = [(vm.pm_sth[t, i], 1.0) for t in range(HOURS_PER_DAY)]
        row += [(vm.cm_sth[t, i], 1.0) for t in range(HOURS_PER_DAY)]
        row += [(vm.pm_lth[k, i], 1.0) for k in range(n_lth)]
        row += [(vm.cm_lth[k, i], 1.0) for k in range(n_lth)]
        model.add_constraint(row, ">=", 1.0, name=f"require_{i + 1}")
        model.add_constraint(row, "<=", 1.0, name=f"single_{i + 1}")

    # crew occupancy for the task duration, stated hour by hour: the turbine
    # is busy at h exactly when the (single) started task covers h, which
    # implies the window-sum form and keeps the relaxation honest
    for i in armed:
        for h in range(HOURS_PER_DAY):
            row = []
            for t in range(max(0, h - taus[i] + 1), h + 1):
                if m_ok[t, i] or n_ok[t, i]:
                    row.append((vm.pm_sth[t, i], 1.0))
                    row.append((vm.cm_sth[t, i], 1.0))
            if row:
                row.append((vm.busy[h, i], -1.0))
                model.add_constraint(row, "=", 0.0, name=f"busy_at_{h + 1}_{i + 1}")

    # crew headcount per hour
    if armed:
        for t in range(HOURS_PER_DAY):
            model.add_constraint(
                [(vm.busy[t, i], 1.0) for i in armed], "<=", float(instance.n_crews),
                name=f"crews_{t + 1}",
            )

    # availability: failed turbines stay down until a corrective start
    for i in armed:
        if rle[i] >= 1:
            continue
        for t in range(HOURS_PER_DAY):
            t1 = t + 1
            row = [(vm.avail_sth[t, i], 1.0)]
            denom = HOURS_PER_DAY - t1 + beta
            for tp in range(HOURS_PER_DAY):
                coef = (HOURS_PER_DAY - (tp + 1)) / denom
                if coef != 0.0:
                    row.append((vm.cm_sth[tp, i], -coef))
            model.add_constraint(row, "<=", 0.0, name=f"down_{t1}_{i + 1}")
    for i in armed:
        for k in range(n_lth):
            d_rel = k + 2
            if d_rel <= rle[i]:
                continue
            denom = d_last - d_rel + beta
            row = [(vm.avail_lth[k, i], 1.0)]
            for kp in range(n_lth):
                row.append((vm.cm_lth[kp, i], (kp + 2) / denom))
            model.add_constraint(
                row, "<=", d_last / denom, name=f"downL_{d_rel}_{i + 1}"
            )

    # a turbine under maintenance is unavailable
    for i in armed:
        for t in range(HOURS_PER_DAY):
            model.add_constraint(
                [(vm.avail_sth[t, i], 1.0), (vm.busy[t, i], 1.0)], "<=", 1.0,
                name=f"busy_down_{t + 1}_{i + 1}",
            )

    # vessel rental indicators; with one action per turbine, the whole-day
    # short-term form per turbine is valid and dominates the per-hour form
    for i in armed:
        row = [(vm.vessel_sth, -1.0)]
        for t in range(HOURS_PER_DAY):
            if m_ok[t, i] or n_ok[t, i]:
                row.append((vm.pm_sth[t, i], 1.0))
                row.append((vm.cm_sth[t, i], 1.0))
        if len(row) > 1:
            model.add_constraint(row, "<=", 0.0, name=f"rent_day_{i + 1}")
        for k in range(n_lth):
            if vm.pm_lth[k, i] >= 0:
                model.add_constraint(
                    [(vm.pm_lth[k, i], 1.0), (vm.cm_lth[k, i], 1.0),
                     (vm.vessel_lth[k], -1.0)],
                    "<=", 0.0, name=f"rentL_{k + 2}_{i + 1}",
                )

    # work-hour budget: overtime in the STH, hard cap per LTH day
    if armed:
        row = [(vm.busy[t, i], 1.0) for t in range(HOURS_PER_DAY) for i in armed]
        row.append((vm.overtime, -1.0))
        model.add_constraint(
            row, "<=", float(instance.n_crews * instance.standard_hours),
            name="overtime",
        )
        # daily crew-hour cap, tied to the rental indicator: work happens only
        # on rented days, which also implies the plain cap
        for k in range(n_lth):
            row = [(vm.vessel_lth[k],
                    -float(instance.n_crews * instance.standard_hours))]
            for i in armed:
                row.append((vm.pm_lth[k, i], float(taus[i])))
                row.append((vm.cm_lth[k, i], float(taus[i])))
            model.add_constraint(row, "<=", 0.0, name=f"workL_{k + 2}")

    # production limited by availability
    for i in armed:
        for t in range(HOURS_PER_DAY):
            cap = rated * float(grids.power_sth[t, i])
            model.add_constraint(
                [(vm.power_sth[t, i], 1.0), (vm.avail_sth[t, i], -cap)], "<=", 0.0,
                name=f"power_{t + 1}_{i + 1}",
            )
        for k in range(n_lth):
            cap = HOURS_PER_DAY * rated * float(grids.power_lth[k, i])
            row = [(vm.power_lth[k, i], 1.0), (vm.avail_lth[k, i], -cap)]
            loss = rated * float(grids.power_lth[k, i]) * taus[i]
            if loss:
                row.append((vm.pm_lth[k, i], loss))
            model.add_constraint(row, "<=", 0.0, name=f"powerL_{k + 2}_{i + 1}")

    # farm-level curtailment cap per STH hour
    for t in range(HOURS_PER_DAY):
        cap = float(prices.curtailment[t]) * rated * float(grids.power_sth[t].sum())
        model.add_constraint(
            [(vm.power_sth[t, i], 1.0) for i in range(n)], "<=", cap,
            name=f"curtail_{t + 1}",
        )

    return model, vm


def extract_schedule(
    solution: MilpSolution, vm: VariableMap, horizon: HorizonState,
    instance: FarmInstance,
) -> Schedule:
    """Decode scheduled starts from a solved iteration model."""
    if solution.status not in ("optimal", "feasible-gap"):
        raise DecodeError(f"no schedule in a solution with status {solution.status}")
    values = solution.values

    def on(vid: int) -> bool:
        if vid < 0:
            return False
        val = values[vid]
        if min(abs(val), abs(val - 1.0)) > 1e-4:
            raise DecodeError(f"decision variable {vid} is fractional: {val}")
        return val > 0.5

    schedule = Schedule(iteration=horizon.iteration)
    offset = horizon.sth_hour_offset
    for i in range(vm.n_turbines):
        found: list[ScheduledAction] = []
        for t in range(HOURS_PER_DAY):
            if on(vm.pm_sth[t, i]):
                found.append(ScheduledAction(i, "pm", "sth", offset + t,
                                             instance.repair_hours[i]))
            if on(vm.cm_sth[t, i]):
                found.append(ScheduledAction(i, "cm", "sth", offset + t,
                                             instance.repair_hours[i]))
        for k in range(vm.n_lth):
            day = horizon.abs_day_of_rel(k + 2)
            if on(vm.pm_lth[k, i]):
                found.append(ScheduledAction(i, "pm", "lth", day,
                                             instance.repair_hours[i]))
            if on(vm.cm_lth[k, i]):
                found.append(ScheduledAction(i, "cm", "lth", day,
                                             instance.repair_hours[i]))
        if len(found) > 1:
            raise DecodeError(
                f"turbine {i + 1} carries {len(found)} actions in one iteration"
            )
        schedule.actions.extend(found)

    schedule.vessel_sth = int(values[vm.vessel_sth] > 0.5)
    schedule.vessel_lth_days = [
        horizon.abs_day_of_rel(k + 2)
        for k in range(vm.n_lth)
        if values[vm.vessel_lth[k]] > 0.5
    ]
    schedule.overtime_hours = float(values[vm.overtime])
    return schedule


def objective_audit(
    solution: MilpSolution,
    vm: VariableMap,
    instance: FarmInstance,
    horizon: HorizonState,
    grids: IterationGrids,
    prices: IterationPrices,
    rel_tol: float = 1e-6,
) -> float:
    """Recompute the profit from decoded values and check it against the solver.

    Returns the audited objective; raises AuditError on disagreement beyond
    the tolerance.
    """
    values = solution.values
    armed = [i for i in range(vm.n_turbines) if horizon.flags[i]]

    def val(vid: int) -> float:
        return float(values[vid]) if vid >= 0 else 0.0

    s = 0.0
    for t in range(HOURS_PER_DAY):
        for i in range(vm.n_turbines):
            s += float(prices.hourly[t]) * val(vm.power_sth[t, i])
        for i in armed:
            s -= instance.pm_cost * val(vm.pm_sth[t, i])
            s -= instance.cm_cost * val(vm.cm_sth[t, i])
            s -= instance.crew_rate * val(vm.busy[t, i])
    s -= instance.rental_cost * val(vm.vessel_sth)
    s -= instance.overtime_rate * val(vm.overtime)

    total = s
    for k in range(vm.n_lth):
        l_d = 0.0
        for i in range(vm.n_turbines):
            l_d += float(prices.daily[k]) * val(vm.power_lth[k, i])
        for i in armed:
            both = val(vm.pm_lth[k, i]) + val(vm.cm_lth[k, i])
            l_d -= instance.pm_cost * val(vm.pm_lth[k, i])
            l_d -= instance.cm_cost * val(vm.cm_lth[k, i])
            l_d -= instance.crew_rate * instance.repair_hours[i] * both
        l_d -= instance.rental_cost * val(vm.vessel_lth[k])
        total += l_d

    scale = max(1.0, abs(total), abs(solution.objective))
    if abs(total - solution.objective) > rel_tol * scale:
        raise AuditError(
            f"audited profit {total!r} disagrees with solver objective "
            f"{solution.objective!r}"
        )
    bookkept = val(vm.profit_sth) + sum(val(v) for v in vm.profit_lth)
    if abs(bookkept - total) > rel_tol * scale:
        raise AuditError("profit bookkeeping variables disagree with direct audit")
    return total
