"""Exact rational-function arithmetic over named symbols.

Every scalar quantity in the library is an :class:`Expr`: a multivariate
rational function over the rationals, kept in a canonical form so that two
expressions denote the same function exactly when they compare equal.  The
canonical form is

* numerator and denominator coprime (polynomial GCD cancelled),
* denominator monic under the graded-lexicographic monomial order
  (generators sorted by name),

which makes equality, zero-testing and hashing structural and exact.  There
is no floating point anywhere: decimal literals are converted to exact
rationals at parse time.

The polynomial heavy lifting (expansion, GCD cancellation) is delegated to
sympy; this module owns the canonical-form contract, the expression grammar,
the printer and the linear solver.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Mapping, Union

import sympy

__all__ = [
    "Kind",
    "Symbol",
    "SymbolTable",
    "Expr",
    "ZERO",
    "ONE",
    "LinearSystem",
    "UniqueSolution",
    "Underdetermined",
    "Inconsistent",
    "ExprError",
    "ExprSyntaxError",
    "UnknownSymbolError",
    "DivisionByZeroError",
    "PoleError",
    "NotAffineError",
    "DuplicateSymbolError",
    "as_expr",
    "parse_expr",
    "format_expr",
    "arith",
    "differentiate",
    "is_zero",
    "evaluate_at",
    "solve_linear",
]

Kind = Literal["coordinate", "parameter", "unknown"]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ExprError(Exception):
    """Base class for all expression-layer errors."""


class ExprSyntaxError(ExprError):
    """Raised on malformed input; carries the 0-based offset into the text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(ExprSyntaxError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown symbol '{name}'", position)
        self.name = name


class DivisionByZeroError(ExprError):
    """Division by an expression whose canonical form is zero."""


class PoleError(ExprError):
    """Evaluation at a point where the denominator vanishes."""


class NotAffineError(ExprError):
    """An equation handed to the linear solver is not affine in the unknowns."""


class DuplicateSymbolError(ExprError):
    """A symbol name was registered twice in one table."""


@dataclass(frozen=True)
class Symbol:
    """A named indeterminate with a fixed role.

    ``kind`` distinguishes chart coordinates from manifold-constant
    parameters and from solver unknowns; it never changes after creation.
    """

    name: str
    kind: Kind

    def __post_init__(self) -> None:
        if not _NAME_RE.fullmatch(self.name):
            raise ExprError(f"invalid symbol name {self.name!r}")
        if self.kind not in ("coordinate", "parameter", "unknown"):
            raise ExprError(f"invalid symbol kind {self.kind!r}")

    @property
    def sym(self) -> sympy.Symbol:
        return sympy.Symbol(self.name)

    def __str__(self) -> str:
        return self.name


class SymbolTable:
    """Name -> :class:`Symbol` registry with unique names."""

    def __init__(self, symbols: Iterable[Symbol] = ()):
        self._by_name: dict[str, Symbol] = {}
        for s in symbols:
            self.add_symbol(s)

    @classmethod
    def build(
        cls,
        coordinates: Iterable[str] = (),
        parameters: Iterable[str] = (),
        unknowns: Iterable[str] = (),
    ) -> "SymbolTable":
        table = cls()
        for name in coordinates:
            table.add(name, "coordinate")
        for name in parameters:
            table.add(name, "parameter")
        for name in unknowns:
            table.add(name, "unknown")
        return table

    def add(self, name: str, kind: Kind) -> Symbol:
        return self.add_symbol(Symbol(name, kind))

    def add_symbol(self, symbol: Symbol) -> Symbol:
        if symbol.name in self._by_name:
            raise DuplicateSymbolError(f"symbol '{symbol.name}' already defined")
        self._by_name[symbol.name] = symbol
        return symbol

    def fresh(self, base: str, kind: Kind = "unknown") -> Symbol:
        """Register ``base`` or, on collision, the first free ``base_N``."""
        name = base
        counter = 1
        while name in self._by_name:
            counter += 1
            name = f"{base}_{counter}"
        return self.add(name, kind)

    def get(self, name: str) -> Symbol | None:
        return self._by_name.get(name)

    def __getitem__(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no symbol named '{name}'") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._by_name.values())

    def __len__(self) -> int:
        return len(self._by_name)

    def of_kind(self, kind: Kind) -> tuple[Symbol, ...]:
        return tuple(s for s in self._by_name.values() if s.kind == kind)


ExprLike = Union["Expr", Symbol, int, Fraction]


def _canonical_pair(e: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    """Reduce a sympy expression to the canonical (numerator, denominator)."""
    e = sympy.cancel(sympy.together(e))
    num, den = sympy.fraction(e)
    num = sympy.expand(num)
    den = sympy.expand(den)
    if den == 0:
        raise DivisionByZeroError("denominator is identically zero")
    den_syms = sorted(den.free_symbols, key=lambda s: s.name)
    if den_syms:
        lc = sympy.Poly(den, *den_syms).LC(order="grlex")
    else:
        lc = den
    if lc != 1:
        num = sympy.expand(num / lc)
        den = sympy.expand(den / lc)
    return num, den


class Expr:
    """Canonical multivariate rational function over the rationals.

    Instances are immutable and freely shareable; all arithmetic returns new
    canonical instances.  Equality and hashing are structural, which by the
    canonical-form invariant coincides with equality of functions.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num: sympy.Expr, den: sympy.Expr, *, _canonical: bool = False):
        if not _canonical:
            num, den = _canonical_pair(num / den)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Expr is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def _from_sympy(cls, e: sympy.Expr) -> "Expr":
        num, den = _canonical_pair(e)
        return cls(num, den, _canonical=True)

    @classmethod
    def constant(cls, value: int | Fraction) -> "Expr":
        if isinstance(value, Fraction):
            return cls(sympy.Rational(value.numerator, value.denominator),
                       sympy.Integer(1), _canonical=True)
        return cls(sympy.Integer(value), sympy.Integer(1), _canonical=True)

    @classmethod
    def of(cls, value: ExprLike) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, Symbol):
            return cls(value.sym, sympy.Integer(1), _canonical=True)
        if isinstance(value, (int, Fraction)):
            return cls.constant(value)
        raise TypeError(f"cannot convert {value!r} to Expr")

    # -- inspection -------------------------------------------------------

    @property
    def numerator(self) -> "Expr":
        return Expr(self._num, sympy.Integer(1), _canonical=True)

    @property
    def denominator(self) -> "Expr":
        return Expr(self._den, sympy.Integer(1), _canonical=True)

    @property
    def is_zero(self) -> bool:
        return self._num == 0

    @property
    def symbol_names(self) -> frozenset[str]:
        names = {s.name for s in self._num.free_symbols}
        names.update(s.name for s in self._den.free_symbols)
        return frozenset(names)

    def depends_on(self, symbols: Iterable[Symbol]) -> bool:
        wanted = {s.name for s in symbols}
        return bool(wanted & self.symbol_names)

    def as_sympy(self) -> sympy.Expr:
        return self._num / self._den

    # -- arithmetic -------------------------------------------------------

    def _binary(self, other, op) -> "Expr":
        if isinstance(other, (int, Fraction)):
            other = Expr.of(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return Expr._from_sympy(op(self.as_sympy(), other.as_sympy()))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return Expr.of(other).__sub__(self)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.of(other)
        if not isinstance(other, Expr):
            return NotImplemented
        if other.is_zero:
            raise DivisionByZeroError("division by the zero expression")
        return Expr._from_sympy(self.as_sympy() / other.as_sympy())

    def __rtruediv__(self, other):
        return Expr.of(other).__truediv__(self)

    def __neg__(self) -> "Expr":
        return Expr(-self._num, self._den, _canonical=True)

    def __pos__(self) -> "Expr":
        return self

    def __pow__(self, exponent: int) -> "Expr":
        if not isinstance(exponent, int):
            raise TypeError("exponent must be an integer")
        if exponent == 0:
            return ONE
        if exponent < 0:
            if self.is_zero:
                raise DivisionByZeroError("zero raised to a negative power")
            return Expr(self._den ** (-exponent), self._num ** (-exponent))
        return Expr(self._num ** exponent, self._den ** exponent)

    # -- calculus and evaluation -------------------------------------------

    def diff(self, symbol: Symbol) -> "Expr":
        if symbol.name not in self.symbol_names:
            return ZERO
        return Expr._from_sympy(sympy.diff(self.as_sympy(), symbol.sym))

    def substitute(self, mapping: Mapping[Symbol, ExprLike]) -> "Expr":
        """Simultaneous exact substitution of symbols by expressions."""
        table = {s.sym: Expr.of(v).as_sympy() for s, v in mapping.items()}
        if not table:
            return self
        num = self._num.xreplace(table)
        den = self._den.xreplace(table)
        if den == 0 or sympy.cancel(den) == 0:
            raise DivisionByZeroError("substitution makes the denominator zero")
        return Expr._from_sympy(num / den)

    def evaluate(self, point: Mapping[Symbol, int | Fraction]) -> Fraction:
        """Exact value at a rational point; every symbol must be assigned."""
        table = {}
        for s, v in point.items():
            if isinstance(v, Fraction):
                table[s.sym] = sympy.Rational(v.numerator, v.denominator)
            elif isinstance(v, int):
                table[s.sym] = sympy.Integer(v)
            else:
                raise TypeError(f"point value for {s.name} must be rational, got {v!r}")
        missing = (self._num.free_symbols | self._den.free_symbols) - set(table)
        if missing:
            names = ", ".join(sorted(s.name for s in missing))
            raise ExprError(f"unassigned symbol(s): {names}")
        num_val = self._num.xreplace(table)
        den_val = self._den.xreplace(table)
        if den_val == 0:
            raise PoleError("denominator vanishes at the evaluation point")
        return Fraction(int(num_val.p), int(num_val.q)) / Fraction(int(den_val.p), int(den_val.q))

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Expr.of(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        return format_expr(self)

    def __repr__(self) -> str:
        return f"Expr({format_expr(self)})"


ZERO = Expr.constant(0)
ONE = Expr.constant(1)


def as_expr(value: ExprLike) -> Expr:
    return Expr.of(value)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------
#
# Grammar (whitespace insignificant):
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := '-' factor | base ('^' integer)?
#   base   := rational | symbol | '(' expr ')'
# Rational literals are integers, integer/integer quotients (via '/'), or
# finite decimals; decimals become exact rationals (0.25 -> 1/4).


@dataclass(frozen=True)
class _Token:
    kind: str  # number | name | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            m = re.match(r"\d+(\.\d+)?", text[i:])
            tokens.append(_Token("number", m.group(0), i))
            i += len(m.group(0))
            continue
        if c.isalpha() or c == "_":
            m = _NAME_RE.match(text, i)
            tokens.append(_Token("name", m.group(0), i))
            i = m.end()
            continue
        if c in "+-*/^()":
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], table: SymbolTable):
        self.tokens = tokens
        self.table = table
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise ExprSyntaxError(f"expected '{text}'", tok.pos)
        return self.advance()

    def parse(self) -> Expr:
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return value

    def expr(self) -> Expr:
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance()
            rhs = self.term()
            value = value + rhs if op.text == "+" else value - rhs
        return value

    def term(self) -> Expr:
        value = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance()
            rhs = self.factor()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero:
                    raise ExprSyntaxError("division by zero", op.pos)
                value = value / rhs
        return value

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return -self.factor()
        value = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            caret = self.advance()
            value = value ** self.exponent(caret)
        return value

    def exponent(self, caret: _Token) -> int:
        sign = 1
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            sign = -1
        tok = self.peek()
        if tok.kind != "number" or "." in tok.text:
            raise ExprSyntaxError("exponent is not an integer", tok.pos)
        self.advance()
        return sign * int(tok.text)

    def base(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            if "." in tok.text:
                return Expr.constant(Fraction(tok.text))
            return Expr.constant(int(tok.text))
        if tok.kind == "name":
            self.advance()
            symbol = self.table.get(tok.text)
            if symbol is None:
                raise UnknownSymbolError(tok.text, tok.pos)
            return Expr.of(symbol)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            value = self.expr()
            self.expect_op(")")
            return value
        raise ExprSyntaxError(
            f"expected a number, symbol or '(', got {tok.text!r}" if tok.kind != "end"
            else "unexpected end of input",
            tok.pos,
        )


def parse_expr(text: str, table: SymbolTable) -> Expr:
    """Parse ``text`` against ``table``; raises :class:`ExprSyntaxError`."""
    return _Parser(_tokenize(text), table).parse()


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _rational_str(value: sympy.Rational, with_monomial: bool) -> tuple[str, int]:
    num = abs(int(value.p))
    den = int(value.q)
    if not with_monomial:
        core = str(num)
    else:
        core = "" if num == 1 else str(num)
    if den != 1:
        return core, den
    return core, 1


def _poly_str(poly: sympy.Expr) -> str:
    """Deterministic sum-of-monomials printing, grlex-descending terms."""
    if poly == 0:
        return "0"
    gens = sorted(poly.free_symbols, key=lambda s: s.name)
    if not gens:
        return str(poly)  # exact sympy Rational printing: "3", "-8/3"
    terms = sympy.Poly(poly, *gens).terms(order="grlex")
    pieces = []
    for monom, coeff in terms:
        mono_parts = []
        for g, e in zip(gens, monom):
            if e == 1:
                mono_parts.append(g.name)
            elif e > 1:
                mono_parts.append(f"{g.name}^{e}")
        core, den = _rational_str(coeff, bool(mono_parts))
        body = "*".join(([core] if core else []) + mono_parts)
        if den != 1:
            body = f"{body}/{den}"
        pieces.append(("-" if coeff < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _is_single_term(poly: sympy.Expr) -> bool:
    return not isinstance(poly, sympy.Add)


def _is_plain_power(poly: sympy.Expr) -> bool:
    """True for a bare symbol or a symbol raised to a positive power."""
    if isinstance(poly, sympy.Symbol):
        return True
    return (isinstance(poly, sympy.Pow)
            and isinstance(poly.base, sympy.Symbol)
            and poly.exp.is_Integer and poly.exp > 0)


def format_expr(e: Expr) -> str:
    """Round-trips: ``parse_expr(format_expr(e), table) == e``."""
    num, den = e._num, e._den
    num_s = _poly_str(num)
    if den == 1:
        return num_s
    den_s = _poly_str(den)
    if not (_is_single_term(num) and "/" not in num_s):
        num_s = f"({num_s})"
    if not _is_plain_power(den):
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


# ---------------------------------------------------------------------------
# Spec-surface helpers
# ---------------------------------------------------------------------------


def arith(lhs: Expr, rhs: Expr, operator: str) -> Expr:
    ops = {
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
        "mul": lambda a, b: a * b,
        "div": lambda a, b: a / b,
    }
    try:
        fn = ops[operator]
    except KeyError:
        raise ExprError(f"unknown operator {operator!r}") from None
    return fn(lhs, rhs)


def differentiate(e: Expr, s: Symbol) -> Expr:
    return e.diff(s)


def is_zero(e: Expr) -> bool:
    return e.is_zero


def evaluate_at(e: Expr, point: Mapping[Symbol, int | Fraction]) -> Fraction:
    return e.evaluate(point)


# ---------------------------------------------------------------------------
# Linear solving over the rational-function field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearSystem:
    """Equations affine in the unknowns, with rational-function coefficients."""

    unknowns: tuple[Symbol, ...]
    equations: tuple[Expr, ...]

    def __post_init__(self) -> None:
        for u in self.unknowns:
            if u.kind != "unknown":
                raise NotAffineError(f"symbol '{u.name}' is not of kind 'unknown'")


@dataclass(frozen=True)
class UniqueSolution:
    assignment: Mapping[Symbol, Expr]


@dataclass(frozen=True)
class Underdetermined:
    free: tuple[Symbol, ...]
    assignment: Mapping[Symbol, Expr]  # pivot unknowns in terms of the free ones


@dataclass(frozen=True)
class Inconsistent:
    witness: Expr  # a combination forced to vanish that is not zero


def _affine_rows(system: LinearSystem) -> list[tuple[list[Expr], Expr]]:
    """Turn each equation into (coefficients, constant) with the unknowns cleared.

    An equation e = 0 is equivalent to numerator(e) = 0; affinity requires the
    canonical denominator to be free of the unknowns and the numerator to have
    total degree <= 1 in them, cross terms included.
    """
    syms = [u.sym for u in system.unknowns]
    zero_map = {u: ZERO for u in system.unknowns}
    rows = []
    for eq in system.equations:
        if eq._den.free_symbols & set(syms):
            raise NotAffineError(f"equation {eq} has an unknown in its denominator")
        num_expr = eq.numerator
        for i, ui in enumerate(system.unknowns):
            di = num_expr.diff(ui)
            for uj in system.unknowns[i:]:
                if not di.diff(uj).is_zero:
                    raise NotAffineError(
                        f"equation {eq} has degree > 1 in '{ui.name}', '{uj.name}'")
        coeffs = [num_expr.diff(u) for u in system.unknowns]
        const = num_expr.substitute(zero_map)
        rows.append((coeffs, const))
    return rows


def solve_linear(system: LinearSystem) -> UniqueSolution | Underdetermined | Inconsistent:
    """Exact Gauss-Jordan elimination over the rational-function field."""
    unknowns = system.unknowns
    k = len(unknowns)
    rows = _affine_rows(system)

    pivot_of: dict[int, int] = {}  # column -> row index
    next_row = 0
    for col in range(k):
        pivot_row = None
        for r in range(next_row, len(rows)):
            if not rows[r][0][col].is_zero:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[next_row], rows[pivot_row] = rows[pivot_row], rows[next_row]
        coeffs, const = rows[next_row]
        pivot = coeffs[col]
        coeffs = [c / pivot for c in coeffs]
        const = const / pivot
        rows[next_row] = (coeffs, const)
        for r in range(len(rows)):
            if r == next_row:
                continue
            factor = rows[r][0][col]
            if factor.is_zero:
                continue
            r_coeffs = [rc - factor * pc for rc, pc in zip(rows[r][0], coeffs)]
            r_const = rows[r][1] - factor * const
            rows[r] = (r_coeffs, r_const)
        pivot_of[col] = next_row
        next_row += 1

    for coeffs, const in rows[next_row:]:
        if not const.is_zero:
            return Inconsistent(witness=const)

    free = tuple(u for i, u in enumerate(unknowns) if i not in pivot_of)
    assignment: dict[Symbol, Expr] = {}
    for col, row in pivot_of.items():
        coeffs, const = rows[row]
        value = -const
        for j, u in enumerate(unknowns):
            if j == col or coeffs[j].is_zero:
                continue
            value = value - coeffs[j] * Expr.of(u)
        assignment[unknowns[col]] = value

    if free:
        return Underdetermined(free=free, assignment=assignment)
    return UniqueSolution(assignment=assignment)
