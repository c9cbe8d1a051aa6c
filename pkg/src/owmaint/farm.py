"""Core domain types: farm instance, scenario series, derived grids, schedules."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

HOURS_PER_DAY = 24


@dataclass(frozen=True)
class FarmInstance:
    """Static description of the farm and its cost/operational parameters."""

    n_turbines: int
    rle_days: tuple[int, ...]            # residual life estimate per turbine (days)
    repair_hours: tuple[int, ...]        # task duration per turbine
    needs_maintenance: tuple[int, ...]   # maintenance requirement flag per turbine
    pm_cost: float = 4_000.0             # $ per preventive task
    cm_cost: float = 16_000.0            # $ per corrective task
    crew_rate: float = 250.0             # $ per crew-hour
    rental_cost: float = 2_500.0         # $ per vessel rental day
    overtime_rate: float = 125.0         # $ per overtime hour
    n_crews: int = 2
    standard_hours: int = 8              # crew-hours per day at standard pay
    rated_mw: float = 12.0
    wind_limit: float = 15.0             # m/s access safety limit
    wave_limit: float = 1.5              # m access safety limit
    big_m: float = 1e6                   # kept for documentation; not used in rows
    beta: float = 0.5                    # eligibility device offset, any value in (0,1)
    daylight: tuple[int, int] = (6, 20)  # local clock hours with turbine access

    def __post_init__(self) -> None:
        if self.n_turbines < 1:
            raise ValueError("need at least one turbine")
        for name in ("rle_days", "repair_hours", "needs_maintenance"):
            if len(getattr(self, name)) != self.n_turbines:
                raise ValueError(f"{name} must have one entry per turbine")
        if any(t < 1 for t in self.repair_hours):
            raise ValueError("repair times must be at least one hour")
        if any(l < 0 for l in self.rle_days):
            raise ValueError("residual life estimates must be nonnegative")
        if any(f not in (0, 1) for f in self.needs_maintenance):
            raise ValueError("maintenance flags must be 0/1")
        for name in ("pm_cost", "cm_cost", "crew_rate", "rental_cost", "overtime_rate"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.n_crews < 1 or self.standard_hours < 1:
            raise ValueError("crew configuration must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must sit strictly inside (0, 1)")
        start, end = self.daylight
        if not 0 <= start < end <= 24:
            raise ValueError("daylight window must satisfy 0 <= start < end <= 24")

    def with_flags(self, flags) -> "FarmInstance":
        return replace(self, needs_maintenance=tuple(int(f) for f in flags))


@dataclass
class ScenarioData:
    """Hourly series for one scenario window plus their daily aggregates."""

    wind: np.ndarray          # (H, I) per-turbine wind speed m/s
    wave: np.ndarray          # (H,) significant wave height m
    price: np.ndarray         # (H,) $/MWh
    curtailment: np.ndarray   # (H,) sellable fraction of farm output
    start_day: int = 0        # offset of this window in the source series

    def __post_init__(self) -> None:
        h = self.wind.shape[0]
        if h % HOURS_PER_DAY:
            raise ValueError("scenario must cover whole days")
        for name in ("wave", "price", "curtailment"):
            if getattr(self, name).shape[0] != h:
                raise ValueError(f"{name} length differs from wind series")

    @property
    def n_hours(self) -> int:
        return int(self.wind.shape[0])

    @property
    def n_days(self) -> int:
        return self.n_hours // HOURS_PER_DAY

    @property
    def n_turbines(self) -> int:
        return int(self.wind.shape[1])


@dataclass
class DerivedGrids:
    """Normalized power and accessibility on hourly (STH) and daily (LTH) grids."""

    power_frac: np.ndarray        # (H, I) f values
    power_frac_daily: np.ndarray  # (D, I) f^L values
    access: np.ndarray            # (H, I) 0/1 start feasibility
    access_daily: np.ndarray      # (D, I) 0/1 any feasible start that day
    daylight_hours: np.ndarray    # (H,) 0/1 daylight mask

    @property
    def n_days(self) -> int:
        return int(self.power_frac_daily.shape[0])


@dataclass(frozen=True)
class ScheduledAction:
    turbine: int          # 0-based id
    action: str           # 'pm' | 'cm'
    horizon: str          # 'sth' | 'lth'
    start: int            # absolute hour (sth, 0-based) or absolute day (lth, 0-based)
    duration: int         # hours


@dataclass
class Schedule:
    """Decoded plan of one rolling-horizon iteration."""

    iteration: int
    actions: list[ScheduledAction] = field(default_factory=list)
    vessel_sth: int = 0
    vessel_lth_days: list[int] = field(default_factory=list)  # absolute 0-based days
    overtime_hours: float = 0.0

    @property
    def sth_actions(self) -> list[ScheduledAction]:
        return [a for a in self.actions if a.horizon == "sth"]

    @property
    def lth_actions(self) -> list[ScheduledAction]:
        return [a for a in self.actions if a.horizon == "lth"]
