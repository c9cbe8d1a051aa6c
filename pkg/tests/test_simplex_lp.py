"""LP-level checks: the embedded simplex against scipy's linprog."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from owmaint.milp import SolverConfig, build_model, solve

from _oracles import lp_reference


def _solve_lp(model):
    return solve(model, SolverConfig(rel_gap=0.0))


def test_pure_lp_returns_simplex_optimum():
    # max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x,y >= 0  ->  (4, 0), obj 12
    m = build_model("max")
    x = m.add_variable(obj=3.0)
    y = m.add_variable(obj=2.0)
    m.add_constraint({x: 1.0, y: 1.0}, "<=", 4.0)
    m.add_constraint({x: 1.0, y: 3.0}, "<=", 6.0)
    s = _solve_lp(m)
    assert s.status == "optimal"
    assert s.objective == pytest.approx(12.0, abs=1e-9)
    assert s.values[x] == pytest.approx(4.0, abs=1e-8)


def test_contradictory_bounds_infeasible():
    m = build_model("max")
    x = m.add_variable(obj=1.0, ub=5.0)
    m.add_constraint({x: 1.0}, ">=", 1.0)
    m.add_constraint({x: 1.0}, "<=", 0.0)
    assert _solve_lp(m).status == "infeasible"


def test_equality_row():
    m = build_model("min")
    x = m.add_variable(obj=1.0)
    y = m.add_variable(obj=2.0)
    m.add_constraint({x: 1.0, y: 1.0}, "=", 3.0)
    s = _solve_lp(m)
    assert s.objective == pytest.approx(3.0)
    assert s.values[x] == pytest.approx(3.0)


def test_free_variable_and_negative_bounds():
    m = build_model("min")
    x = m.add_variable(lb=-np.inf, ub=np.inf, obj=1.0)
    y = m.add_variable(lb=-4.0, ub=-1.0, obj=1.0)
    m.add_constraint({x: 1.0, y: 1.0}, ">=", -2.0)
    s = _solve_lp(m)
    # x = -2 - y with y at its lower bound
    assert s.objective == pytest.approx(-2.0)


def test_degenerate_lp_terminates():
    m = build_model("max")
    xs = [m.add_variable(obj=1.0, ub=1.0) for _ in range(6)]
    for i in range(5):
        m.add_constraint({xs[i]: 1.0, xs[i + 1]: 1.0}, "<=", 1.0)
    m.add_constraint({x: 1.0 for x in xs}, "<=", 3.0)
    s = _solve_lp(m)
    ref = lp_reference(m)
    assert s.objective == pytest.approx(ref, rel=1e-9, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_random_lps_match_linprog(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10_000)))
    n = data.draw(st.integers(2, 7))
    m_rows = data.draw(st.integers(1, 6))
    model = build_model(data.draw(st.sampled_from(["min", "max"])))
    for _ in range(n):
        lb = float(rng.integers(-3, 1))
        ub = lb + float(rng.integers(1, 6))
        model.add_variable(lb=lb, ub=ub, obj=float(rng.integers(-5, 6)))
    for _ in range(m_rows):
        support = rng.choice(n, size=rng.integers(1, n + 1), replace=False)
        coeffs = {int(j): float(rng.integers(-4, 5)) for j in support}
        coeffs = {j: c for j, c in coeffs.items() if c != 0.0}
        if not coeffs:
            continue
        rel = ["<=", ">=", "="][rng.integers(0, 3)]
        model.add_constraint(coeffs, rel, float(rng.integers(-6, 7)))
    ours = _solve_lp(model)
    ref = lp_reference(model)
    if ref is None:
        assert ours.status == "infeasible"
    else:
        assert ours.status == "optimal"
        assert ours.objective == pytest.approx(ref, rel=1e-7, abs=1e-7)
        # returned point satisfies every constraint
        assert model.constraint_violation(ours.values) <= 1e-7


def test_deterministic_repeat():
    m = build_model("max")
    xs = [m.add_variable(obj=float(i % 3 + 1), ub=2.0) for i in range(8)]
    for i in range(6):
        m.add_constraint({xs[i]: 1.0, xs[(i + 2) % 8]: 2.0}, "<=", 3.0)
    s1 = _solve_lp(m)
    s2 = _solve_lp(m)
    assert s1.objective == s2.objective
    assert np.array_equal(s1.values, s2.values)
