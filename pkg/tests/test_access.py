"""Accessibility grids against a direct per-hour scan oracle."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from owmaint.access import daily_access, daylight_mask, hourly_access


def scan_oracle(wind, wave, nu, eta, taus, daylight=(6, 20)):
    """Brute-force re-derivation of the start-feasibility grid."""
    n_hours, n_turbines = wind.shape
    start, end = daylight
    alpha = np.zeros((n_hours, n_turbines), dtype=int)
    for i in range(n_turbines):
        tau = taus[i]
        for t in range(n_hours):
            if t + tau > n_hours:
                continue
            good = True
            for h in range(t, t + tau):
                hod = h % 24
                if not (start <= hod < end):
                    good = False
                    break
                if not (wind[h, i] < nu and wave[h] < eta):
                    good = False
                    break
            alpha[t, i] = int(good)
    return alpha


def test_calm_weather_opens_every_daylight_start():
    hours = 72
    wind = np.full((hours, 2), 5.0)
    wave = np.full(hours, 0.5)
    alpha = hourly_access(wind, wave, 15.0, 1.5, [8, 8])
    for t in range(hours):
        expected = 1 if 6 <= t % 24 <= 12 else 0   # start + 8h inside 06:00-20:00
        assert alpha[t, 0] == expected


def test_wave_spike_interrupts_window():
    hours = 24
    wind = np.full((hours, 1), 5.0)
    wave = np.full(hours, 0.5)
    t0 = 7
    wave[t0 + 3] = 2.0
    alpha = hourly_access(wind, wave, 15.0, 1.5, [8])
    assert alpha[t0, 0] == 0


def test_matches_scan_oracle_on_rough_series():
    rng = np.random.default_rng(5)
    hours = 480
    wind = rng.gamma(4.0, 2.5, size=(hours, 3))
    wave = rng.gamma(3.0, 0.45, size=hours)
    taus = [8, 6, 4]
    alpha = hourly_access(wind, wave, 15.0, 1.5, taus)
    assert np.array_equal(alpha, scan_oracle(wind, wave, 15.0, 1.5, taus))
    closed_frac = 1.0 - alpha.mean()
    assert 0.0 < closed_frac < 1.0


def test_strict_inequality_at_limits():
    wind = np.full((24, 1), 15.0)   # exactly at the limit -> unsafe
    wave = np.full(24, 0.5)
    alpha = hourly_access(wind, wave, 15.0, 1.5, [2])
    assert alpha.sum() == 0


def test_daily_access_is_or():
    alpha = np.zeros((48, 2), dtype=int)
    assert np.array_equal(daily_access(alpha), np.zeros((2, 2), dtype=int))
    alpha[30, 1] = 1
    day = daily_access(alpha)
    assert day[1, 1] == 1 and day[0, 1] == 0 and day[1, 0] == 0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 9999))
def test_daily_access_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    alpha = (rng.random((96, 3)) < 0.2).astype(int)
    expected = np.array(
        [[alpha[24 * d : 24 * (d + 1), i].any() for i in range(3)] for d in range(4)],
        dtype=int,
    )
    assert np.array_equal(daily_access(alpha), expected)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 9999))
def test_monotone_in_limits_and_duration(seed):
    rng = np.random.default_rng(seed)
    hours = 96
    wind = rng.gamma(4.0, 2.5, size=(hours, 2))
    wave = rng.gamma(3.0, 0.45, size=hours)
    base = hourly_access(wind, wave, 12.0, 1.2, [5, 5])
    looser = hourly_access(wind, wave, 16.0, 1.8, [5, 5])
    assert np.all(looser >= base)       # raising limits never closes a start
    longer = hourly_access(wind, wave, 12.0, 1.2, [7, 7])
    assert np.all(longer <= base)       # longer tasks never open a start


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 9999))
def test_daily_consistency_invariant(seed):
    rng = np.random.default_rng(seed)
    hours = 120
    wind = rng.gamma(4.0, 2.2, size=(hours, 2))
    wave = rng.gamma(3.0, 0.4, size=hours)
    alpha = hourly_access(wind, wave, 15.0, 1.5, [6, 9])
    alpha_daily = daily_access(alpha)
    for d in range(5):
        for i in range(2):
            assert alpha_daily[d, i] == int(alpha[24 * d : 24 * (d + 1), i].any())


def test_task_longer_than_daylight_warns_and_closes():
    wind = np.full((48, 1), 5.0)
    wave = np.full(48, 0.5)
    with pytest.warns(UserWarning):
        alpha = hourly_access(wind, wave, 15.0, 1.5, [15])
    assert alpha.sum() == 0


def test_daylight_mask_window():
    mask = daylight_mask(24, (6, 20))
    assert mask.sum() == 14
    assert mask[5] == 0 and mask[6] == 1 and mask[19] == 1 and mask[20] == 0
