#!/usr/bin/env python3
"""Regenerate the bundled synthetic data set under data/.

Produces 2400 hourly rows of buoy weather (wind/wave with synoptic storms and
calm spells), 2400 hourly market prices with a diurnal shape, and a noisy
speed/power sample cloud for power-curve fitting. All draws are seeded, and
floats are written with fixed formatting, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

N_HOURS = 2400
T0 = datetime(2019, 9, 1, 0, 0)
WEATHER_SEED = 20190901
PRICE_SEED = 20190902
POWER_SEED = 20190903


def synth_weather(seed: int = WEATHER_SEED) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    hours = np.arange(N_HOURS)

    # slow synoptic component: AR(1) over hours with multi-day correlation
    synoptic = np.empty(N_HOURS)
    synoptic[0] = 0.0
    phi = 0.995
    shock = rng.normal(0.0, 0.35, N_HOURS)
    for t in range(1, N_HOURS):
        synoptic[t] = phi * synoptic[t - 1] + shock[t]
    synoptic *= 3.6 / synoptic.std()

    # storm episodes: Poisson arrivals, 1-4 days long, +6..+13 m/s
    storm_boost = np.zeros(N_HOURS)
    t = 0
    while t < N_HOURS:
        gap = int(rng.exponential(120)) + 18
        start = t + gap
        if start >= N_HOURS:
            break
        length = int(rng.integers(24, 96))
        peak = rng.uniform(6.0, 13.0)
        ramp = np.minimum(np.arange(length) / 6.0, 1.0)
        ramp = np.minimum(ramp, (length - 1 - np.arange(length)) / 6.0 + 1e-9)
        ramp = np.clip(ramp, 0.0, 1.0)
        end = min(start + length, N_HOURS)
        storm_boost[start:end] = np.maximum(storm_boost[start:end],
                                            peak * ramp[: end - start])
        t = start + length

    diurnal = 0.8 * np.sin(2 * np.pi * (hours % 24 - 14) / 24)
    wind = 8.8 + synoptic + diurnal + storm_boost + rng.normal(0.0, 0.7, N_HOURS)
    wind = np.clip(wind, 0.0, None)

    # waves follow wind energy with their own persistence
    wave_core = 0.40 + 0.0072 * wind**2
    wave = np.empty(N_HOURS)
    wave[0] = wave_core[0]
    for t in range(1, N_HOURS):
        wave[t] = 0.88 * wave[t - 1] + 0.12 * wave_core[t]
    wave = wave + rng.normal(0.0, 0.09, N_HOURS)
    wave = np.clip(wave, 0.05, None)
    return wind, wave


def synth_prices(seed: int = PRICE_SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    hours = np.arange(N_HOURS)
    hod = hours % 24
    dow = (hours // 24) % 7
    diurnal = 10.0 * np.exp(-0.5 * ((hod - 18.5) / 3.0) ** 2) + 6.0 * np.exp(
        -0.5 * ((hod - 8.0) / 2.5) ** 2
    )
    weekday = np.where(dow < 5, 3.0, -2.0)
    drift = np.empty(N_HOURS)
    drift[0] = 0.0
    shock = rng.normal(0.0, 0.8, N_HOURS)
    for t in range(1, N_HOURS):
        drift[t] = 0.97 * drift[t - 1] + shock[t]
    spikes = (rng.random(N_HOURS) < 0.004) * rng.uniform(20.0, 60.0, N_HOURS)
    price = 38.0 + diurnal + weekday + 2.2 * drift + spikes
    return np.clip(price, 5.0, None)


def synth_power_pairs(seed: int = POWER_SEED, n: int = 4000) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.uniform(0.0, 28.0, n)
    cut_in, rated, cut_out = 3.0, 12.0, 25.0
    frac = np.where(
        v < cut_in, 0.0,
        np.where(v < rated, (v**3 - cut_in**3) / (rated**3 - cut_in**3), 1.0),
    )
    frac = np.where(v >= cut_out, 0.0, frac)
    frac = frac + rng.normal(0.0, 0.02, n) * (frac > 0)
    return np.column_stack([v, np.clip(frac, 0.0, 1.0)])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path(__file__).resolve().parents[1] / "data",
                        type=Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    wind, wave = synth_weather()
    stamps = [(T0 + timedelta(hours=h)).isoformat() for h in range(N_HOURS)]
    with (args.out / "weather.csv").open("w") as fh:
        fh.write(f"# synthetic buoy series, seed={WEATHER_SEED}\n")
        fh.write("timestamp,wind_ms,wave_m\n")
        for ts, w, h in zip(stamps, wind, wave):
            fh.write(f"{ts},{w:.4f},{h:.4f}\n")

    price = synth_prices()
    with (args.out / "prices.csv").open("w") as fh:
        fh.write(f"# synthetic hourly market prices, seed={PRICE_SEED}\n")
        fh.write("timestamp,price_usd_mwh\n")
        for ts, p in zip(stamps, price):
            fh.write(f"{ts},{p:.4f}\n")

    pairs = synth_power_pairs()
    with (args.out / "power_pairs.csv").open("w") as fh:
        fh.write(f"# synthetic speed/power samples, seed={POWER_SEED}\n")
        fh.write("wind_ms,power_norm\n")
        for v, f in pairs:
            fh.write(f"{v:.4f},{f:.6f}\n")

    closed = (wind >= 15.0) | (wave >= 1.5)
    print(f"wrote {args.out}/weather.csv prices.csv power_pairs.csv")
    print(f"weather-closed fraction: {closed.mean():.3f}")


if __name__ == "__main__":
    main()
