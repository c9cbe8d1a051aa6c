"""Branch-and-bound against brute-force enumeration oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from owmaint.milp import SolverConfig, build_model, solve

from _oracles import enumerate_mixed, enumerate_pure_binary

EXACT = SolverConfig(rel_gap=0.0)


def test_knapsack_matches_enumeration():
    m = build_model("max")
    x1 = m.add_variable("binary", obj=5.0)
    x2 = m.add_variable("binary", obj=4.0)
    m.add_constraint({x1: 6.0, x2: 4.0}, "<=", 10.0)
    expected = enumerate_pure_binary(m)
    s = solve(m, EXACT)
    assert expected == pytest.approx(9.0)
    assert s.status == "optimal"
    assert s.objective == pytest.approx(expected)
    assert s.values[x1] == 1.0 and s.values[x2] == 1.0


def test_infeasible_binary_model():
    m = build_model("max")
    x = m.add_variable("binary", obj=1.0)
    m.add_constraint({x: 1.0}, ">=", 1.0)
    m.add_constraint({x: 1.0}, "<=", 0.0)
    assert solve(m, EXACT).status == "infeasible"


def test_integer_variable_with_continuous():
    # max 2q + z s.t. q + z <= 3.7, z <= 1.5, q integer
    m = build_model("max")
    q = m.add_variable("integer", obj=2.0)
    z = m.add_variable(obj=1.0, ub=1.5)
    m.add_constraint({q: 1.0, z: 1.0}, "<=", 3.7)
    s = solve(m, EXACT)
    assert s.objective == pytest.approx(6.7)
    assert s.values[q] == 3.0
    assert s.values[z] == pytest.approx(0.7)


def test_node_limit_reports_gap_status():
    rng = np.random.default_rng(7)
    m = build_model("max")
    xs = [m.add_variable("binary", obj=float(rng.integers(3, 9))) for _ in range(14)]
    for _ in range(6):
        support = rng.choice(14, size=5, replace=False)
        m.add_constraint({int(j): float(rng.integers(1, 4)) for j in support},
                         "<=", 5.0)
    s = solve(m, SolverConfig(rel_gap=0.0, node_limit=2))
    assert s.status in ("feasible-gap", "time-limit")
    if s.status == "feasible-gap":
        assert s.gap is None or s.gap >= 0.0


def test_solution_objective_is_dot_product():
    m = build_model("max")
    xs = [m.add_variable("binary", obj=w) for w in (3.0, 5.0, 4.0)]
    m.add_constraint({xs[0]: 2.0, xs[1]: 3.0, xs[2]: 4.0}, "<=", 6.0)
    s = solve(m, EXACT)
    manual = sum(m.variables[v].obj * s.values[v] for v in xs)
    assert s.objective == pytest.approx(manual, rel=1e-9)


def test_lp_relaxation_bounds_milp():
    m = build_model("max")
    xs = [m.add_variable("binary", obj=w) for w in (5.0, 4.0, 3.0)]
    m.add_constraint({xs[0]: 6.0, xs[1]: 4.0, xs[2]: 3.0}, "<=", 8.0)
    relaxed = build_model("max")
    for v in m.variables:
        relaxed.add_variable("continuous", lb=0.0, ub=1.0, obj=v.obj)
    for c in m.constraints:
        relaxed.add_constraint(dict(c.coeffs), c.relation, c.rhs)
    lp = solve(relaxed, EXACT)
    ip = solve(m, EXACT)
    assert lp.objective >= ip.objective - 1e-9


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_random_binary_models_match_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    model = build_model("max" if rng.integers(2) else "min")
    for _ in range(n):
        model.add_variable("binary", obj=float(rng.integers(-6, 7)))
    for _ in range(int(rng.integers(1, 7))):
        size = int(rng.integers(1, n + 1))
        support = rng.choice(n, size=size, replace=False)
        coeffs = {int(j): float(rng.integers(-4, 5)) for j in support}
        coeffs = {j: c for j, c in coeffs.items() if c != 0.0}
        if not coeffs:
            continue
        rel = ["<=", ">=", "="][rng.integers(0, 3)]
        model.add_constraint(coeffs, rel, float(rng.integers(-5, 8)))
    expected = enumerate_pure_binary(model)
    got = solve(model, EXACT)
    if expected is None:
        assert got.status == "infeasible"
    else:
        assert got.status == "optimal"
        assert got.objective == pytest.approx(expected, rel=1e-6, abs=1e-6)
        assert model.constraint_violation(got.values) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_random_mixed_models_match_enumeration(seed):
    rng = np.random.default_rng(seed)
    n_bin = int(rng.integers(1, 5))
    n_cont = int(rng.integers(1, 4))
    model = build_model("max")
    for _ in range(n_bin):
        model.add_variable("binary", obj=float(rng.integers(-5, 6)))
    for _ in range(n_cont):
        model.add_variable("continuous", lb=0.0, ub=float(rng.integers(1, 5)),
                           obj=float(rng.integers(-5, 6)))
    n = n_bin + n_cont
    for _ in range(int(rng.integers(1, 6))):
        size = int(rng.integers(1, n + 1))
        support = rng.choice(n, size=size, replace=False)
        coeffs = {int(j): float(rng.integers(-4, 5)) for j in support}
        coeffs = {j: c for j, c in coeffs.items() if c != 0.0}
        if not coeffs:
            continue
        rel = ["<=", ">="][rng.integers(0, 2)]
        model.add_constraint(coeffs, rel, float(rng.integers(-4, 9)))
    expected = enumerate_mixed(model)
    got = solve(model, EXACT)
    if expected is None:
        assert got.status == "infeasible"
    else:
        assert got.status == "optimal"
        assert got.objective == pytest.approx(expected, rel=1e-6, abs=1e-6)


def test_determinism_same_model_same_values():
    rng = np.random.default_rng(11)
    model = build_model("max")
    for _ in range(9):
        model.add_variable("binary", obj=float(rng.integers(1, 9)))
    for _ in range(5):
        support = rng.choice(9, size=4, replace=False)
        model.add_constraint({int(j): 1.0 for j in support}, "<=", 2.0)
    a = solve(model, EXACT)
    b = solve(model, EXACT)
    assert a.objective == b.objective
    assert np.array_equal(a.values, b.values)


def test_threaded_solves_are_independent():
    import threading

    results = {}

    def work(tag, obj):
        m = build_model("max")
        x = m.add_variable("binary", obj=obj)
        y = m.add_variable("binary", obj=1.0)
        m.add_constraint({x: 1.0, y: 1.0}, "<=", 1.0)
        results[tag] = solve(m, EXACT).objective

    threads = [threading.Thread(target=work, args=(i, float(2 + i))) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == {0: 2.0, 1: 3.0, 2: 4.0, 3: 5.0}
