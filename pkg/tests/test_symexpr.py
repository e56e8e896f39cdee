from __future__ import annotations

from fractions import Fraction

import pytest

from parasol.symexpr import (
    DivisionByZeroError,
    DuplicateSymbolError,
    Expr,
    ExprSyntaxError,
    Inconsistent,
    LinearSystem,
    NotAffineError,
    PoleError,
    Symbol,
    SymbolTable,
    Underdetermined,
    UniqueSolution,
    UnknownSymbolError,
    ZERO,
    ONE,
    arith,
    differentiate,
    evaluate_at,
    format_expr,
    is_zero,
    parse_expr,
    solve_linear,
)


@pytest.fixture()
def table():
    return SymbolTable.build(coordinates=["x", "y", "z"], parameters=["p"])


class TestParse:
    def test_rational_fraction(self, table):
        e = parse_expr("(y^2-1)/4", table)
        y = table["y"]
        assert e == (Expr.of(y) ** 2 - 1) / 4
        # constant denominator is absorbed by the monic normalisation
        assert e.denominator == ONE

    def test_zero(self, table):
        assert parse_expr("0", table) is not None
        assert parse_expr("0", table).is_zero

    def test_gcd_cancellation(self, table):
        assert parse_expr("x/x", table) == ONE

    def test_parse_format_parse_idempotent(self, table):
        e1 = parse_expr("(y^2-1)/(2*y - 2)", table)
        e2 = parse_expr(format_expr(e1), table)
        assert e1 == e2
        assert format_expr(e1) == format_expr(e2)

    def test_decimal_literals_exact(self, table):
        assert parse_expr("0.25", table) == Expr.constant(Fraction(1, 4))
        assert parse_expr("0.1", table) == Expr.constant(Fraction(1, 10))

    def test_whitespace_insignificant(self, table):
        assert parse_expr(" x +  2*y ", table) == parse_expr("x+2*y", table)

    def test_precedence_and_unary_minus(self, table):
        x = Expr.of(table["x"])
        assert parse_expr("-x^2", table) == -(x ** 2)
        assert parse_expr("2*x/4", table) == x / 2
        assert parse_expr("x - -x", table) == 2 * x

    def test_syntax_error_position(self, table):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("x + ", table)
        assert err.value.position == 4

    def test_unknown_symbol(self, table):
        with pytest.raises(UnknownSymbolError) as err:
            parse_expr("x + (w)", table)
        assert err.value.name == "w"
        assert err.value.position == 5

    def test_division_by_literal_zero(self, table):
        with pytest.raises(ExprSyntaxError):
            parse_expr("1/0", table)
        with pytest.raises(ExprSyntaxError):
            parse_expr("1/(x - x)", table)

    def test_non_integer_exponent(self, table):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x^y", table)
        with pytest.raises(ExprSyntaxError):
            parse_expr("x^1.5", table)

    def test_trailing_input(self, table):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x 2", table)

    def test_stray_character(self, table):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x + $", table)


class TestArith:
    def test_additive_inverse(self, table):
        x = Expr.of(table["x"])
        assert arith(x, -x, "add").is_zero

    def test_gcd_cancellation_in_product(self, table):
        lhs = parse_expr("(y^2-1)/4", table)
        rhs = parse_expr("4/(y-1)", table)
        assert arith(lhs, rhs, "mul") == parse_expr("y + 1", table)

    def test_field_inverse(self, table):
        y = Expr.of(table["y"])
        assert arith(arith(ONE, y, "div"), y, "mul") == ONE

    def test_division_by_zero_expr(self, table):
        with pytest.raises(DivisionByZeroError):
            arith(ONE, ZERO, "div")

    def test_unknown_operator(self, table):
        with pytest.raises(Exception):
            arith(ONE, ONE, "pow")

    def test_pow(self, table):
        y = Expr.of(table["y"])
        assert y ** -2 == ONE / (y * y)
        assert y ** 0 == ONE
        with pytest.raises(TypeError):
            y ** "2"
        with pytest.raises(DivisionByZeroError):
            ZERO ** -1


class TestDifferentiate:
    def test_polynomial(self, table):
        f = parse_expr("x^2/2 + y^2/2 + z^2", table)
        assert differentiate(f, table["x"]) == Expr.of(table["x"])

    def test_constant(self, table):
        assert differentiate(Expr.constant(7), table["x"]).is_zero

    def test_quotient_rule(self, table):
        e = parse_expr("1/y", table)
        assert differentiate(e, table["y"]) == parse_expr("-1/y^2", table)

    def test_absent_symbol(self, table):
        assert differentiate(parse_expr("y + 1", table), table["x"]).is_zero


class TestIsZero:
    def test_inverse_product(self, table):
        x = Expr.of(table["x"])
        assert is_zero(x * (ONE / x) - ONE)

    def test_nonzero(self, table):
        assert not is_zero(parse_expr("y^2 - 1", table))

    def test_metric_entry_discrepancy(self, table):
        delta = parse_expr("(y^2-1)/4", table) - parse_expr("(y^2-1)/2", table)
        assert not is_zero(delta)
        assert delta == parse_expr("-(y^2-1)/4", table)


class TestEvaluate:
    def test_value(self, table):
        assert evaluate_at(parse_expr("(y^2-1)/4", table), {table["y"]: 3}) == 2

    def test_pole(self, table):
        with pytest.raises(PoleError):
            evaluate_at(parse_expr("1/y", table), {table["y"]: 0})

    def test_fraction_result(self, table):
        assert evaluate_at(parse_expr("y/2", table), {table["y"]: 1}) == Fraction(1, 2)

    def test_unassigned_symbol(self, table):
        with pytest.raises(Exception, match="unassigned"):
            evaluate_at(parse_expr("x + y", table), {table["x"]: 1})


class TestFormat:
    def test_zero(self):
        assert format_expr(ZERO) == "0"

    def test_soliton_constant_form(self, table):
        lam = parse_expr("p/2 - 8/3", table)
        assert format_expr(lam) == "p/2 - 8/3"
        assert parse_expr(format_expr(lam), table) == lam

    def test_linear(self, table):
        assert format_expr(parse_expr("1 + y", table)) == "y + 1"

    def test_denominator_forms(self, table):
        for text in ["1/y", "x/(y - 1)", "(x + 1)/(y^2 - 2)", "3*x/(x*y + 1)", "x/y^2"]:
            e = parse_expr(text, table)
            assert parse_expr(format_expr(e), table) == e


class TestSymbols:
    def test_kind_immutable(self):
        s = Symbol("q", "parameter")
        with pytest.raises(Exception):
            s.kind = "coordinate"

    def test_invalid_name(self):
        with pytest.raises(Exception):
            Symbol("2x", "coordinate")

    def test_duplicate_names(self, table):
        with pytest.raises(DuplicateSymbolError):
            table.add("x", "parameter")

    def test_fresh_renames_on_collision(self, table):
        first = table.fresh("lambda")
        second = table.fresh("lambda")
        assert first.name == "lambda"
        assert second.name == "lambda_2"


class TestSolveLinear:
    def test_soliton_constants(self, table):
        lam = table.fresh("lambda")
        mu = table.fresh("mu")
        system = LinearSystem(
            (lam, mu),
            (parse_expr("2*lambda - p - 2/3 + 6", table),
             parse_expr("2*mu - 6", table)))
        outcome = solve_linear(system)
        assert isinstance(outcome, UniqueSolution)
        assert outcome.assignment[lam] == parse_expr("p/2 - 8/3", table)
        assert outcome.assignment[mu] == Expr.constant(3)

    def test_inconsistent(self, table):
        lam = Symbol("c0", "unknown")
        system = LinearSystem(
            (lam,),
            (Expr.of(lam), Expr.of(lam) - 1))
        outcome = solve_linear(system)
        assert isinstance(outcome, Inconsistent)
        assert not outcome.witness.is_zero

    def test_underdetermined(self, table):
        lam = Symbol("c1", "unknown")
        mu = Symbol("c2", "unknown")
        outcome = solve_linear(LinearSystem((lam, mu), (Expr.of(lam) + Expr.of(mu) - 1,)))
        assert isinstance(outcome, Underdetermined)
        assert outcome.free == (mu,)
        assert outcome.assignment[lam] == ONE - Expr.of(mu)

    def test_function_field_coefficients(self, table):
        # x * u = y  =>  u = y/x
        u = Symbol("u", "unknown")
        x, y = Expr.of(table["x"]), Expr.of(table["y"])
        outcome = solve_linear(LinearSystem((u,), (x * Expr.of(u) - y,)))
        assert isinstance(outcome, UniqueSolution)
        assert outcome.assignment[u] == y / x

    def test_rejects_quadratic(self, table):
        u = Symbol("u", "unknown")
        with pytest.raises(NotAffineError):
            solve_linear(LinearSystem((u,), (Expr.of(u) * Expr.of(u) - 1,)))

    def test_rejects_cross_term(self, table):
        u = Symbol("u", "unknown")
        w = Symbol("w", "unknown")
        with pytest.raises(NotAffineError):
            solve_linear(LinearSystem((u, w), (Expr.of(u) * Expr.of(w),)))

    def test_rejects_unknown_in_denominator(self, table):
        u = Symbol("u", "unknown")
        with pytest.raises(NotAffineError):
            solve_linear(LinearSystem((u,), (ONE / Expr.of(u) - 1,)))


class TestCanonicalForm:
    def test_structural_equality_is_functional_equality(self, table):
        a = parse_expr("(x + y)^2", table)
        b = parse_expr("x^2 + 2*x*y + y^2", table)
        assert a == b
        assert hash(a) == hash(b)

    def test_substitute_simultaneous(self, table):
        x, y = table["x"], table["y"]
        e = parse_expr("x/y", table)
        swapped = e.substitute({x: Expr.of(y), y: Expr.of(x)})
        assert swapped == parse_expr("y/x", table)

    def test_substitute_pole(self, table):
        e = parse_expr("1/y", table)
        with pytest.raises(DivisionByZeroError):
            e.substitute({table["y"]: ZERO})

    def test_numerator_denominator_coprime(self, table):
        e = parse_expr("(x^2 - 1)/(x^2 + 2*x + 1)", table)
        assert e == parse_expr("(x - 1)/(x + 1)", table)
