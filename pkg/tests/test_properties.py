from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from parasol.symexpr import (
    Expr,
    PoleError,
    SymbolTable,
    ZERO,
    format_expr,
    parse_expr,
)

import oracles

TABLE = SymbolTable.build(coordinates=["x", "y"], parameters=["p"])
X, Y, P = TABLE["x"], TABLE["y"], TABLE["p"]


# ---------------------------------------------------------------------------
# Hypothesis strategies over exact expressions
# ---------------------------------------------------------------------------

_atoms = st.sampled_from([
    Expr.of(X), Expr.of(Y), Expr.of(P),
    Expr.constant(0), Expr.constant(1), Expr.constant(2), Expr.constant(-3),
    Expr.constant(Fraction(1, 2)), Expr.constant(Fraction(-2, 5)),
])


def _combine(children):
    def times(pair):
        a, b = pair
        return a * b

    def plus(pair):
        a, b = pair
        return a + b

    def minus(pair):
        a, b = pair
        return a - b

    def divide(pair):
        a, b = pair
        return a / b if not b.is_zero else a

    return st.one_of(
        st.tuples(children, children).map(plus),
        st.tuples(children, children).map(minus),
        st.tuples(children, children).map(times),
        st.tuples(children, children).map(divide),
        children.map(lambda e: -e),
        st.tuples(children, st.integers(0, 3)).map(lambda t: t[0] ** t[1]),
    )


exprs = st.recursive(_atoms, _combine, max_leaves=8)


@settings(max_examples=120, deadline=None)
@given(exprs, exprs, exprs)
def test_canonical_form_is_construction_independent(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=120, deadline=None)
@given(exprs, exprs)
def test_derivative_linearity_and_leibniz(a, b):
    for s in (X, Y):
        assert (a + b).diff(s) == a.diff(s) + b.diff(s)
        assert (a * b).diff(s) == a.diff(s) * b + a * b.diff(s)


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_parse_format_round_trip(e):
    assert parse_expr(format_expr(e), TABLE) == e


@settings(max_examples=120, deadline=None)
@given(exprs, exprs,
       st.fractions(min_value=-4, max_value=4),
       st.fractions(min_value=-4, max_value=4),
       st.fractions(min_value=-4, max_value=4))
def test_evaluation_commutes_with_arithmetic(a, b, xv, yv, pv):
    point = {X: xv, Y: yv, P: pv}
    try:
        va, vb = a.evaluate(point), b.evaluate(point)
        v_sum = (a + b).evaluate(point)
        v_prod = (a * b).evaluate(point)
    except PoleError:
        return  # a pole of some canonical denominator; nothing to compare
    assert v_sum == va + vb
    assert v_prod == va * vb


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_zero_test_matches_subtraction(e):
    assert (e - e).is_zero
    assert e == e


# ---------------------------------------------------------------------------
# Randomized suites (seeded, >= 100 cases each)
# ---------------------------------------------------------------------------


def test_linear_solver_back_substitution_suite():
    cases, failures = oracles.random_linear_solver_suite(120, seed=2024)
    assert cases >= 100
    assert failures == 0


def test_round_trip_suite():
    cases, failures = oracles.random_roundtrip_suite(150, seed=7)
    assert cases >= 100
    assert failures == 0


def test_exterior_derivative_nilpotency_suite():
    cases, failures = oracles.random_two_step_derivative_suite(120, seed=11)
    assert cases >= 100
    assert failures == 0


def test_metric_identity_suite():
    cases, failures = oracles.random_metric_suite(100, seed=5)
    assert cases >= 100
    assert failures == 0


# ---------------------------------------------------------------------------
# Numeric finite-difference oracle
# ---------------------------------------------------------------------------


def test_fd_oracle_ps3(ps3):
    params = {p: Fraction(1) for p in ps3.chart.params}
    points = oracles.random_rational_points(ps3.metric, 10, seed=101, params=params)
    checked, failures = oracles.fd_agreement(ps3.metric, points, params)
    assert checked > 0
    assert failures == 0


def test_fd_oracle_polar(polar2):
    points = oracles.random_rational_points(polar2.metric, 10, seed=202)
    checked, failures = oracles.fd_agreement(polar2.metric, points)
    assert failures == 0


def test_fd_oracle_curved_diagonal(flat3):
    from parasol.geometry import metric_from_matrix
    from parasol.symexpr import ONE

    chart = flat3.chart
    g = metric_from_matrix(chart, [
        [ONE, ZERO, ZERO],
        [ZERO, ONE, ZERO],
        [ZERO, ZERO, parse_expr("1 + x^2", flat3.table)]])
    points = oracles.random_rational_points(g, 10, seed=303,
                                            params={p: Fraction(1) for p in chart.params})
    checked, failures = oracles.fd_agreement(
        g, points, {p: Fraction(1) for p in chart.params})
    assert failures == 0
