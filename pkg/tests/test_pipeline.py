"""Data pipeline: ingestion guards, wind synthesis, method of bins, aggregation."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from owmaint.pipeline import (
    PipelineError,
    PowerCurve,
    daily_aggregate,
    fit_power_curve,
    ingest_price_csv,
    ingest_weather_csv,
    normalized_power,
    synthesize_turbine_winds,
)


def _write_weather(path, n_hours, mutate=None):
    lines = ["timestamp,wind_ms,wave_m"]
    for h in range(n_hours):
        day, hour = divmod(h, 24)
        lines.append(f"2019-09-{1 + day % 28:02d}T{hour:02d}:00:00,8.0,0.8")
    # crude month rollover: regen as explicit running datetime instead
    from datetime import datetime, timedelta

    t0 = datetime(2019, 9, 1)
    lines = ["timestamp,wind_ms,wave_m"] + [
        f"{(t0 + timedelta(hours=h)).isoformat()},8.0,0.8" for h in range(n_hours)
    ]
    if mutate:
        lines = mutate(lines)
    path.write_text("\n".join(lines) + "\n")
    return path


def test_ingest_2400_hour_file(tmp_path):
    p = _write_weather(tmp_path / "w.csv", 2400)
    series = ingest_weather_csv(p)
    assert series.n_hours == 2400


def test_ingest_gap_names_row(tmp_path):
    p = _write_weather(tmp_path / "w.csv", 48, mutate=lambda ls: ls[:10] + ls[11:])
    with pytest.raises(PipelineError, match="row 9"):
        ingest_weather_csv(p)


def test_ingest_negative_wave_rejected(tmp_path):
    def mutate(lines):
        lines[5] = lines[5].replace(",0.8", ",-0.2")
        return lines

    p = _write_weather(tmp_path / "w.csv", 48, mutate=mutate)
    with pytest.raises(PipelineError, match="row 4"):
        ingest_weather_csv(p)


def test_ingest_prices(tmp_path):
    from datetime import datetime, timedelta

    t0 = datetime(2019, 9, 1)
    lines = ["timestamp,price_usd_mwh"] + [
        f"{(t0 + timedelta(hours=h)).isoformat()},{40 + h % 24}" for h in range(48)
    ]
    p = tmp_path / "p.csv"
    p.write_text("\n".join(lines) + "\n")
    series = ingest_price_csv(p)
    assert series.n_hours == 48
    assert series.daily.shape == (2,)


def test_synthesize_sigma_zero_replicates_buoy():
    buoy = np.linspace(4.0, 12.0, 240)
    winds = synthesize_turbine_winds(buoy, n_turbines=5, sigma=0.0, seed=3)
    assert np.array_equal(winds, np.tile(buoy[:, None], (1, 5)))


def test_synthesize_seed_reproducible():
    buoy = np.full(100, 9.0)
    a = synthesize_turbine_winds(buoy, 4, sigma=1.0, seed=42)
    b = synthesize_turbine_winds(buoy, 4, sigma=1.0, seed=42)
    c = synthesize_turbine_winds(buoy, 4, sigma=1.0, seed=43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert (a >= 0).all()


def test_synthesize_cross_turbine_spread():
    buoy = np.full(2400, 9.0)
    winds = synthesize_turbine_winds(buoy, 10, sigma=1.0, seed=0)
    spread = winds.std(axis=1, ddof=1).mean()
    assert abs(spread - 1.0) < 0.1


def _analytic_pairs(step=0.01, top=25.0):
    v = np.arange(0.0, top, step)
    p = np.minimum(1.0, (v / 12.0) ** 3)
    return np.column_stack([v, p])


def test_fit_power_curve_reproduces_analytic_generator():
    curve = fit_power_curve(_analytic_pairs(), bin_width=0.5)
    gen = np.minimum(1.0, (curve.centers / 12.0) ** 3)
    assert np.abs(curve.values - gen).max() < 1e-3


def test_fit_power_curve_single_pair_extends_everywhere():
    curve = fit_power_curve(np.array([[8.0, 0.4]]))
    for speed in (0.0, 8.0, 13.0, 40.0):
        assert curve.bin_fraction(speed) == pytest.approx(0.4)


def test_fit_power_curve_rejects_out_of_range_power():
    with pytest.raises(PipelineError):
        fit_power_curve(np.array([[8.0, 1.2]]))


def test_fit_power_curve_interpolates_interior_gap():
    pairs = np.array([[0.25, 0.0], [2.25, 0.4]])   # bins 0 and 4 occupied
    curve = fit_power_curve(pairs, bin_width=0.5, cut_in=0.0)
    assert curve.bin_fraction(1.25) == pytest.approx(0.2)


def test_normalized_power_standstill_and_cutout():
    curve = fit_power_curve(_analytic_pairs())
    assert normalized_power(curve, 0.0) == 0.0
    assert normalized_power(curve, 30.0) == 0.0
    assert normalized_power(curve, 25.0) == 0.0   # boundary belongs to shutdown


def test_normalized_power_matches_analytic_midrange():
    curve = fit_power_curve(_analytic_pairs())
    for v in (5.0, 7.5, 10.0, 11.5):
        assert normalized_power(curve, v) == pytest.approx((v / 12.0) ** 3, abs=1e-2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.0, 40.0), min_size=1, max_size=50))
def test_normalized_power_always_unit_interval(speeds):
    curve = fit_power_curve(_analytic_pairs(step=0.1))
    out = normalized_power(curve, np.array(speeds))
    assert np.all(out >= 0.0) and np.all(out <= 1.0)


def test_daily_aggregate_constant_identity():
    assert np.array_equal(daily_aggregate(np.full(72, 10.0)), np.full(3, 10.0))


def test_daily_aggregate_mean_of_enumerated_day():
    assert daily_aggregate(np.arange(24.0))[0] == pytest.approx(11.5)


def test_daily_aggregate_2400_hours_gives_100_days():
    assert daily_aggregate(np.random.default_rng(0).random(2400)).shape == (100,)


def test_daily_aggregate_partial_day_rejected():
    with pytest.raises(PipelineError):
        daily_aggregate(np.zeros(25))


def test_curve_dataclass_direct_use():
    curve = PowerCurve(np.array([5.0, 10.0]), np.array([0.2, 0.8]), cut_in=3.0)
    assert curve.fraction(7.5) == pytest.approx(0.5)
