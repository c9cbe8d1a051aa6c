"""Rolling-horizon driver.

Each day: shift the index sets by 24 hours / 1 day, rebind the
weather-dependent parameters, solve the iteration MILP, clear the maintenance
flag of every turbine whose action landed in the short-term horizon, and move
on. Unexpected failures re-arm their turbine with an expired residual life at
the start of their day. The concatenated short-term solutions form the final
hourly schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .farm import HOURS_PER_DAY, DerivedGrids, FarmInstance, Schedule, ScenarioData
from .horizon_model import (
    HorizonState,
    IterationGrids,
    IterationPrices,
    assemble,
    extract_schedule,
    objective_audit,
)
from .milp import MilpModel, SolverConfig, solve
from .pipeline import daily_aggregate


@dataclass(frozen=True)
class FailureEvent:
    turbine: int      # 0-based
    day: int          # 1-based day on which the turbine is found failed


@dataclass
class RollingState:
    iteration: int                    # next iteration to run, 1-based
    total_days: int
    flags: np.ndarray                 # current maintenance requirement
    rle_abs: np.ndarray               # residual life day (1-based absolute)
    pending: list[FailureEvent] = field(default_factory=list)

    def apply_due_events(self) -> list[FailureEvent]:
        due = [e for e in self.pending if e.day == self.iteration]
        for e in due:
            self.flags[e.turbine] = 1
            self.rle_abs[e.turbine] = self.iteration - 1   # already expired
        self.pending = [e for e in self.pending if e.day > self.iteration]
        return due

    def horizon(self) -> HorizonState:
        rel = np.maximum(self.rle_abs - (self.iteration - 1), 0)
        return HorizonState(
            iteration=self.iteration,
            total_days=self.total_days,
            rle_remaining=tuple(int(r) for r in rel),
            flags=tuple(int(f) for f in self.flags),
        )


@dataclass
class IterationRecord:
    iteration: int
    status: str
    objective: float | None
    gap: float | None
    solve_seconds: float
    nodes: int
    lp_iterations: int
    schedule: Schedule | None
    skipped: bool = False             # no armed turbine, no model solved


@dataclass
class FullSchedule:
    """Concatenated short-term solutions plus per-iteration diagnostics."""

    instance: FarmInstance
    total_days: int
    iterations: list[IterationRecord] = field(default_factory=list)
    unresolved: dict[int, list[int]] = field(default_factory=dict)  # iter -> turbines

    @property
    def sth_actions(self):
        out = []
        for rec in self.iterations:
            if rec.schedule is not None:
                out.extend(rec.schedule.sth_actions)
        return out


def iteration_inputs(
    state_h: HorizonState, grids: DerivedGrids, scenario: ScenarioData,
) -> tuple[IterationGrids, IterationPrices]:
    """Slice scenario-level grids onto one iteration's index sets."""
    l = state_h.iteration
    h0 = state_h.sth_hour_offset
    sth = slice(h0, h0 + HOURS_PER_DAY)
    lth = slice(l, l + state_h.n_lth_days)
    ig = IterationGrids(
        power_sth=grids.power_frac[sth],
        access_sth=grids.access[sth],
        power_lth=grids.power_frac_daily[lth],
        access_lth=grids.access_daily[lth],
    )
    daily_price = daily_aggregate(scenario.price)
    ip = IterationPrices(
        hourly=scenario.price[sth],
        daily=daily_price[lth],
        curtailment=scenario.curtailment[sth],
    )
    return ig, ip


def step(
    state: RollingState,
    instance: FarmInstance,
    grids: DerivedGrids,
    scenario: ScenarioData,
    config: SolverConfig | None = None,
    audit: bool = True,
) -> IterationRecord:
    """Solve one iteration and clear flags per the short-term solution."""
    hz = state.horizon()
    ig, ip = iteration_inputs(hz, grids, scenario)
    model, vm = assemble(instance, hz, ig, ip)
    sol = solve(model, config or SolverConfig())
    if sol.status in ("optimal", "feasible-gap"):
        if audit:
            objective_audit(sol, vm, instance, hz, ig, ip)
        schedule = extract_schedule(sol, vm, hz, instance)
        for action in schedule.sth_actions:
            state.flags[action.turbine] = 0
        return IterationRecord(
            iteration=hz.iteration, status=sol.status, objective=sol.objective,
            gap=sol.gap, solve_seconds=sol.solve_seconds, nodes=sol.nodes,
            lp_iterations=sol.lp_iterations, schedule=schedule,
        )
    return IterationRecord(
        iteration=hz.iteration, status=sol.status, objective=None, gap=None,
        solve_seconds=sol.solve_seconds, nodes=sol.nodes,
        lp_iterations=sol.lp_iterations, schedule=None,
    )


def run(
    instance: FarmInstance,
    scenario: ScenarioData,
    grids: DerivedGrids,
    events: list[FailureEvent] | None = None,
    config: SolverConfig | None = None,
    audit: bool = True,
) -> FullSchedule:
    """Iterate the daily procedure over the whole horizon.

    The loop runs while any turbine requires maintenance or a failure event is
    still pending; an infeasible iteration (e.g. no access before a hard
    deadline) records its armed turbines as unresolved and the loop continues.
    """
    events = list(events or [])
    total_days = scenario.n_days
    max_rle = max(
        (r for r, f in zip(instance.rle_days, instance.needs_maintenance) if f),
        default=0,
    )
    if total_days <= max_rle:
        raise ValueError(
            f"horizon of {total_days} days must exceed the largest armed RLE {max_rle}"
        )
    state = RollingState(
        iteration=1,
        total_days=total_days,
        flags=np.array(instance.needs_maintenance, dtype=int),
        rle_abs=np.array(instance.rle_days, dtype=int),
        pending=sorted(events, key=lambda e: (e.day, e.turbine)),
    )
    out = FullSchedule(instance=instance, total_days=total_days)

    while state.iteration <= total_days and (state.flags.sum() > 0 or state.pending):
        state.apply_due_events()
        if state.flags.sum() == 0:
            out.iterations.append(
                IterationRecord(
                    iteration=state.iteration, status="optimal", objective=None,
                    gap=0.0, solve_seconds=0.0, nodes=0, lp_iterations=0,
                    schedule=Schedule(iteration=state.iteration), skipped=True,
                )
            )
            state.iteration += 1
            continue
        rec = step(state, instance, grids, scenario, config, audit=audit)
        out.iterations.append(rec)
        if rec.schedule is None:
            out.unresolved[state.iteration] = [
                i for i in range(instance.n_turbines) if state.flags[i]
            ]
        state.iteration += 1
    return out
