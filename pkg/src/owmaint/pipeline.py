"""Data ingestion and preparation.

Buoy weather and market price CSVs come in with one row per hour; turbine
winds are synthesized around the buoy series; speed-to-power conversion uses
a power curve fitted by the method of bins.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from .farm import HOURS_PER_DAY


class PipelineError(ValueError):
    pass


@dataclass
class WeatherSeries:
    timestamps: list[datetime]
    wind: np.ndarray     # (H,) m/s
    wave: np.ndarray     # (H,) m

    def __post_init__(self) -> None:
        if not (len(self.timestamps) == self.wind.size == self.wave.size):
            raise PipelineError("weather series arrays disagree in length")

    @property
    def n_hours(self) -> int:
        return int(self.wind.size)


@dataclass
class PriceSeries:
    timestamps: list[datetime]
    hourly: np.ndarray   # (H,) $/MWh

    @property
    def n_hours(self) -> int:
        return int(self.hourly.size)

    @property
    def daily(self) -> np.ndarray:
        return daily_aggregate(self.hourly)


@dataclass
class PowerCurve:
    """Normalized power by wind speed, one mean value per speed bin."""

    centers: np.ndarray    # occupied/interpolated bin centers, ascending
    values: np.ndarray     # mean normalized power per bin, in [0, 1]
    cut_in: float = 3.0
    cut_out: float = 25.0
    bin_width: float = 0.5

    def bin_fraction(self, speed) -> np.ndarray | float:
        """Raw curve lookup: linear between bin centers, clamped at the ends."""
        return np.interp(speed, self.centers, self.values)

    def fraction(self, speed) -> np.ndarray | float:
        """Normalized power with cut-in / cut-out overrides applied."""
        speed = np.asarray(speed, dtype=float)
        raw = np.interp(speed, self.centers, self.values)
        out = np.where((speed < self.cut_in) | (speed >= self.cut_out), 0.0, raw)
        return out if out.ndim else float(out)


def _read_rows(path: str | Path, columns: tuple[str, ...]):
    path = Path(path)
    with path.open(newline="") as fh:
        lines = [ln for ln in fh if not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        raise PipelineError(f"{path}: empty file")
    missing = [c for c in columns if c not in reader.fieldnames]
    if missing:
        raise PipelineError(f"{path}: missing columns {missing}")
    return list(reader)


def _parse_contiguous(rows, path) -> list[datetime]:
    stamps = []
    for idx, row in enumerate(rows):
        try:
            stamps.append(datetime.fromisoformat(row["timestamp"]))
        except (KeyError, ValueError) as exc:
            raise PipelineError(f"{path}: row {idx}: bad timestamp") from exc
        if idx and stamps[-1] - stamps[-2] != timedelta(hours=1):
            raise PipelineError(
                f"{path}: row {idx}: gap or disorder in hourly timestamps"
            )
    return stamps


def ingest_weather_csv(path: str | Path) -> WeatherSeries:
    """Read ``timestamp,wind_ms,wave_m`` rows into a validated hourly series."""
    rows = _read_rows(path, ("timestamp", "wind_ms", "wave_m"))
    stamps = _parse_contiguous(rows, path)
    wind = np.empty(len(rows))
    wave = np.empty(len(rows))
    for idx, row in enumerate(rows):
        try:
            wind[idx] = float(row["wind_ms"])
            wave[idx] = float(row["wave_m"])
        except ValueError as exc:
            raise PipelineError(f"{path}: row {idx}: unparsable value") from exc
        if wind[idx] < 0 or wave[idx] < 0:
            raise PipelineError(f"{path}: row {idx}: negative wind/wave value")
    return WeatherSeries(stamps, wind, wave)


def ingest_price_csv(path: str | Path) -> PriceSeries:
    """Read ``timestamp,price_usd_mwh`` rows into a validated hourly series."""
    rows = _read_rows(path, ("timestamp", "price_usd_mwh"))
    stamps = _parse_contiguous(rows, path)
    price = np.empty(len(rows))
    for idx, row in enumerate(rows):
        try:
            price[idx] = float(row["price_usd_mwh"])
        except ValueError as exc:
            raise PipelineError(f"{path}: row {idx}: unparsable price") from exc
    return PriceSeries(stamps, price)


def ingest_power_pairs_csv(path: str | Path) -> np.ndarray:
    """Read ``wind_ms,power_norm`` sample pairs -> (N, 2) array."""
    rows = _read_rows(path, ("wind_ms", "power_norm"))
    out = np.empty((len(rows), 2))
    for idx, row in enumerate(rows):
        try:
            out[idx, 0] = float(row["wind_ms"])
            out[idx, 1] = float(row["power_norm"])
        except ValueError as exc:
            raise PipelineError(f"{path}: row {idx}: unparsable pair") from exc
    return out


def synthesize_turbine_winds(
    buoy: WeatherSeries | np.ndarray, n_turbines: int, sigma: float = 1.0,
    seed: int = 0,
) -> np.ndarray:
    """Per-turbine winds ~ Normal(buoy_t, sigma), truncated at zero.

    Deterministic for a given seed; sigma=0 replicates the buoy series.
    """
    if sigma < 0:
        raise PipelineError("sigma must be nonnegative")
    if n_turbines < 1:
        raise PipelineError("need at least one turbine")
    base = buoy.wind if isinstance(buoy, WeatherSeries) else np.asarray(buoy, float)
    rng = np.random.default_rng(seed)
    draws = base[:, None] + sigma * rng.standard_normal((base.size, n_turbines))
    return np.maximum(draws, 0.0)


def fit_power_curve(
    pairs: np.ndarray,
    bin_width: float = 0.5,
    cut_in: float = 3.0,
    cut_out: float = 25.0,
) -> PowerCurve:
    """Method of bins: mean normalized power per fixed-width speed bin.

    Interior bins without samples are filled by linear interpolation of their
    occupied neighbors; the curve extends past the occupied range by nearest
    bin value.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.size == 0:
        raise PipelineError("no speed/power pairs supplied")
    if bin_width <= 0:
        raise PipelineError("bin width must be positive")
    speeds = pairs[:, 0]
    power = pairs[:, 1]
    if np.any((power < 0) | (power > 1)):
        raise PipelineError("normalized power values must lie in [0, 1]")
    if np.any(speeds < 0):
        raise PipelineError("wind speeds must be nonnegative")

    idx = np.floor(speeds / bin_width).astype(int)
    n_bins = int(idx.max()) + 1
    sums = np.zeros(n_bins)
    counts = np.zeros(n_bins)
    np.add.at(sums, idx, power)
    np.add.at(counts, idx, 1.0)
    occupied = counts > 0
    if not occupied.any():
        raise PipelineError("all power-curve bins are empty")
    centers_all = (np.arange(n_bins) + 0.5) * bin_width
    occ_centers = centers_all[occupied]
    occ_values = sums[occupied] / counts[occupied]
    # interior gaps: interpolate onto the full center grid (clamps outside)
    values_all = np.interp(centers_all, occ_centers, occ_values)
    values_all = np.clip(values_all, 0.0, 1.0)
    return PowerCurve(centers_all, values_all, cut_in=cut_in, cut_out=cut_out,
                      bin_width=bin_width)


def normalized_power(curve: PowerCurve, speed) -> np.ndarray | float:
    """Fraction of rated capacity produced at ``speed`` (scalar or array)."""
    speed = np.asarray(speed, dtype=float)
    if np.any(speed < 0):
        raise PipelineError("wind speed must be nonnegative")
    return curve.fraction(speed)


def daily_aggregate(hourly: np.ndarray) -> np.ndarray:
    """Mean over each 24-hour block; trailing partial days are an error."""
    hourly = np.asarray(hourly, dtype=float)
    if hourly.shape[0] % HOURS_PER_DAY:
        raise PipelineError(
            f"series length {hourly.shape[0]} is not a whole number of days"
        )
    days = hourly.shape[0] // HOURS_PER_DAY
    shape = (days, HOURS_PER_DAY) + hourly.shape[1:]
    return hourly.reshape(shape).mean(axis=1)
