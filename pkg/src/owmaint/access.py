"""Accessibility grids.

A turbine can be reached at hour t when wind and wave stay inside the safety
limits and the hour is in daylight; a maintenance task can *start* at t only
if that holds for its whole duration, so the start-feasibility indicator
looks tau_i hours ahead. A day is accessible when it contains at least one
feasible start.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from .farm import HOURS_PER_DAY


def daylight_mask(n_hours: int, daylight: tuple[int, int] = (6, 20)) -> np.ndarray:
    """0/1 mask of hours whose full [h, h+1) interval lies in the window."""
    start, end = daylight
    hod = np.arange(n_hours) % HOURS_PER_DAY
    return ((hod >= start) & (hod < end)).astype(np.int8)


def hourly_access(
    wind: np.ndarray,
    wave: np.ndarray,
    wind_limit: float,
    wave_limit: float,
    repair_hours,
    daylight: tuple[int, int] = (6, 20),
) -> np.ndarray:
    """Start-feasibility grid alpha[t, i] over per-turbine winds.

    alpha[t, i] = 1 iff every hour of [t, t + tau_i) is inside the safety
    limits (strict) and the daylight window. Windows that would run past the
    series end are closed.
    """
    if wind_limit <= 0 or wave_limit <= 0:
        raise ValueError("safety limits must be positive")
    wind = np.asarray(wind, dtype=float)
    wave = np.asarray(wave, dtype=float)
    if wind.ndim != 2 or wave.shape[0] != wind.shape[0]:
        raise ValueError("wind must be (hours, turbines) and wave (hours,)")
    n_hours, n_turbines = wind.shape
    taus = np.asarray(repair_hours, dtype=int)
    if taus.shape != (n_turbines,):
        raise ValueError("one repair time per turbine required")
    if np.any(taus < 1):
        raise ValueError("repair times must be at least one hour")

    start, end = daylight
    if int(taus.max()) > end - start:
        warnings.warn(
            "repair window exceeds the daylight window; no feasible starts",
            stacklevel=2,
        )
    day_ok = daylight_mask(n_hours, daylight).astype(bool)
    ok = (wind < wind_limit) & (wave < wave_limit)[:, None] & day_ok[:, None]

    alpha = np.zeros((n_hours, n_turbines), dtype=np.int8)
    run = np.cumsum(ok.astype(np.int32), axis=0)
    for i in range(n_turbines):
        tau = int(taus[i])
        if tau > n_hours:
            continue
        window = run[tau - 1 :, i].copy()
        window[1:] -= run[: n_hours - tau, i]
        alpha[: n_hours - tau + 1, i] = (window == tau).astype(np.int8)
    return alpha


def daily_access(alpha: np.ndarray) -> np.ndarray:
    """OR of the hourly start-feasibility grid over each day."""
    alpha = np.asarray(alpha)
    if alpha.shape[0] % HOURS_PER_DAY:
        raise ValueError("hourly access grid must cover whole days")
    days = alpha.shape[0] // HOURS_PER_DAY
    return (
        alpha.reshape(days, HOURS_PER_DAY, alpha.shape[1]).max(axis=1).astype(np.int8)
    )


def write_access_csv(alpha: np.ndarray, path: str | Path, header: str = "") -> None:
    """Audit export: one row per hour, one 0/1 column per turbine."""
    path = Path(path)
    cols = ",".join(f"wt{i + 1}" for i in range(alpha.shape[1]))
    with path.open("w") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write(f"hour,{cols}\n")
        for t in range(alpha.shape[0]):
            row = ",".join(str(int(v)) for v in alpha[t])
            fh.write(f"{t},{row}\n")


def access_statistics(ok_hours: np.ndarray) -> dict:
    """Fractions of closed hours and the longest closed-day streak.

    ``ok_hours`` is any 0/1 grid (hours, turbines) of reachable hours; the
    statistics ignore daylight structure so they describe raw weather
    accessibility.
    """
    ok = np.asarray(ok_hours, dtype=bool)
    closed_frac = float(1.0 - ok.mean())
    days = ok.shape[0] // HOURS_PER_DAY
    day_open = ok[: days * HOURS_PER_DAY].reshape(days, HOURS_PER_DAY, -1).any(axis=1)
    longest = 0
    for i in range(day_open.shape[1]):
        streak = best = 0
        for v in day_open[:, i]:
            streak = 0 if v else streak + 1
            best = max(best, streak)
        longest = max(longest, best)
    return {"closed_hour_fraction": closed_frac, "max_closed_day_streak": int(longest)}
