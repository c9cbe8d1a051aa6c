import math

import pytest

from owmaint.milp import ModelError, Relation, build_model


def test_empty_model_one_binary():
    m = build_model("max")
    vid = m.add_variable("binary", obj=1.0)
    assert vid == 0
    assert m.n_variables == 1
    assert m.n_constraints == 0
    assert m.variables[0].lb == 0.0 and m.variables[0].ub == 1.0


def test_constraint_count_two_binaries():
    m = build_model("max")
    x1 = m.add_variable("binary")
    x2 = m.add_variable("binary")
    cid = m.add_constraint({x1: 1.0, x2: 1.0}, "<=", 1.0)
    assert cid == 0
    assert m.n_constraints == 1
    assert m.constraints[0].relation is Relation.LE


def test_nan_rhs_rejected():
    m = build_model("max")
    x = m.add_variable("binary")
    with pytest.raises(ModelError):
        m.add_constraint({x: 1.0}, "<=", math.nan)


def test_non_finite_coefficient_rejected():
    m = build_model("max")
    x = m.add_variable("binary")
    with pytest.raises(ModelError):
        m.add_constraint({x: math.inf}, "<=", 1.0)
    with pytest.raises(ModelError):
        m.add_variable(obj=math.nan)


def test_unknown_variable_rejected():
    m = build_model("min")
    m.add_variable()
    with pytest.raises(ModelError):
        m.add_constraint({7: 1.0}, ">=", 0.0)


def test_ids_dense_and_stable():
    m = build_model("min")
    ids = [m.add_variable() for _ in range(5)]
    assert ids == [0, 1, 2, 3, 4]
    cids = [m.add_constraint({i: 1.0}, "<=", 1.0) for i in ids]
    assert cids == [0, 1, 2, 3, 4]


def test_duplicate_coefficients_merge():
    m = build_model("min")
    x = m.add_variable()
    m.add_constraint([(x, 1.0), (x, 2.0)], "<=", 4.0)
    assert m.constraints[0].coeffs == {x: 3.0}


def test_constraint_violation_metric():
    m = build_model("min")
    x = m.add_variable(lb=0.0, ub=2.0)
    m.add_constraint({x: 1.0}, ">=", 1.5)
    assert m.constraint_violation([1.5]) == pytest.approx(0.0)
    assert m.constraint_violation([1.0]) == pytest.approx(0.5)
