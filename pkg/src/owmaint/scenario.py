"""Scenario preparation: source series -> scenario windows -> derived grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .access import daily_access, daylight_mask, hourly_access
from .farm import HOURS_PER_DAY, DerivedGrids, FarmInstance, ScenarioData
from .pipeline import (
    PowerCurve,
    PriceSeries,
    WeatherSeries,
    daily_aggregate,
    normalized_power,
    synthesize_turbine_winds,
)


@dataclass
class SourceData:
    """Shared farm-level series from which scenario windows are cut."""

    buoy: WeatherSeries
    prices: PriceSeries
    turbine_wind: np.ndarray      # (H, I), synthesized once per study
    curve: PowerCurve
    wind_seed: int

    @property
    def n_hours(self) -> int:
        return self.buoy.n_hours

    @property
    def n_days(self) -> int:
        return self.n_hours // HOURS_PER_DAY


def prepare_source(
    weather: WeatherSeries,
    prices: PriceSeries,
    curve: PowerCurve,
    n_turbines: int,
    wind_sigma: float = 1.0,
    wind_seed: int = 0,
) -> SourceData:
    if weather.n_hours != prices.n_hours:
        raise ValueError("weather and price series must cover the same hours")
    turbine_wind = synthesize_turbine_winds(weather, n_turbines, wind_sigma, wind_seed)
    return SourceData(weather, prices, turbine_wind, curve, wind_seed)


def scenario_window(
    source: SourceData,
    start_day: int,
    n_days: int,
    price_mode: str = "constant",
    constant_price: float = 80.0,
    ptc_credit: float = 24.0,
    curtailment: float = 1.0,
) -> ScenarioData:
    """Cut a J-day window starting at ``start_day`` (0-based days).

    ``price_mode='constant'`` applies a flat $/MWh price; ``'variable'`` uses
    the source hourly prices plus the production tax credit.
    """
    h0 = start_day * HOURS_PER_DAY
    h1 = h0 + n_days * HOURS_PER_DAY
    if h1 > source.n_hours:
        need = n_days + start_day
        raise ValueError(
            f"source series covers {source.n_days} days; scenario needs {need}"
        )
    if price_mode == "constant":
        price = np.full(h1 - h0, float(constant_price))
    elif price_mode == "variable":
        price = source.prices.hourly[h0:h1] + float(ptc_credit)
    else:
        raise ValueError(f"unknown price mode {price_mode!r}")
    return ScenarioData(
        wind=source.turbine_wind[h0:h1].copy(),
        wave=source.buoy.wave[h0:h1].copy(),
        price=price.astype(float),
        curtailment=np.full(h1 - h0, float(curtailment)),
        start_day=start_day,
    )


def derive_grids(
    scenario: ScenarioData,
    curve: PowerCurve,
    instance: FarmInstance,
    weather_blind: bool = False,
) -> DerivedGrids:
    """Power fractions and accessibility on the hourly and daily grids.

    ``weather_blind=True`` keeps the daylight and window-fit structure but
    ignores the wind/wave safety limits (the belief grid of planners that do
    not track access).
    """
    f_hourly = normalized_power(curve, scenario.wind)
    f_daily = normalized_power(curve, daily_aggregate(scenario.wind))
    wind_limit = np.inf if weather_blind else instance.wind_limit
    wave_limit = np.inf if weather_blind else instance.wave_limit
    alpha = hourly_access(
        scenario.wind, scenario.wave, wind_limit, wave_limit,
        instance.repair_hours, instance.daylight,
    )
    return DerivedGrids(
        power_frac=f_hourly,
        power_frac_daily=f_daily,
        access=alpha,
        access_daily=daily_access(alpha),
        daylight_hours=daylight_mask(scenario.n_hours, instance.daylight),
    )
