"""Coordinate-chart tensor calculus with exact rational-function components.

Tensors are dense arrays of :class:`~parasol.symexpr.Expr` over a single
chart.  The module provides the Levi-Civita connection, curvature, Lie
derivatives, exterior calculus, gradient/Hessian and exact pointwise
signatures.

Conventions (pinned by the regression fixtures, see tests):

* curvature: ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
  nabla_[X,Y] Z`` stored as ``R^l_{kij}`` with ``R(d_i, d_j) d_k =
  R^l_{kij} d_l``;
* Ricci: ``S(X,Y)`` is the trace of ``Z -> R(Z,X)Y``;
* exterior derivative uses the 1/(k+1) normalisation, so for a 1-form
  ``d eta(X,Y) = (X eta(Y) - Y eta(X) - eta([X,Y])) / 2``, and the wedge
  product carries the matching ``p! q! / (p+q)!`` weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .symexpr import Expr, ExprError, PoleError, Symbol, SymbolTable, ZERO, ONE, as_expr

__all__ = [
    "Chart",
    "TensorField",
    "Metric",
    "KForm",
    "Connection",
    "GeometryError",
    "ChartMismatchError",
    "DegenerateMetricError",
    "DegreeError",
    "christoffel",
    "covariant_derivative",
    "riemann",
    "ricci",
    "ricci_operator",
    "scalar_curvature",
    "lie_bracket",
    "lie_derivative",
    "exterior_derivative",
    "wedge",
    "gradient",
    "hessian",
    "lie_derivative_of_connection",
    "lie_derivative_of_curvature",
    "signature_at",
    "frame_component",
    "frame_coefficients",
    "vector_field",
    "one_form",
    "endomorphism",
    "identity_endomorphism",
    "metric_from_matrix",
    "find_regular_point",
]


class GeometryError(Exception):
    pass


class ChartMismatchError(GeometryError):
    pass


class DegenerateMetricError(GeometryError):
    pass


class DegreeError(GeometryError):
    pass


@dataclass(frozen=True)
class Chart:
    """An ordered coordinate system plus the manifold-constant parameters."""

    dim: int
    coords: tuple[Symbol, ...]
    params: tuple[Symbol, ...] = ()

    def __post_init__(self) -> None:
        if self.dim <= 0 or len(self.coords) != self.dim:
            raise GeometryError("chart needs exactly dim distinct coordinates")
        names = [s.name for s in self.coords] + [s.name for s in self.params]
        if len(set(names)) != len(names):
            raise GeometryError("chart symbols must have distinct names")
        for s in self.coords:
            if s.kind != "coordinate":
                raise GeometryError(f"'{s.name}' is not a coordinate symbol")
        for s in self.params:
            if s.kind != "parameter":
                raise GeometryError(f"'{s.name}' is not a parameter symbol")

    @classmethod
    def build(cls, coords: Sequence[str], params: Sequence[str] = ()) -> "Chart":
        table = SymbolTable.build(coordinates=coords, parameters=params)
        return cls(len(coords), table.of_kind("coordinate"), table.of_kind("parameter"))

    def index(self, symbol: Symbol) -> int:
        return self.coords.index(symbol)

    @cached_property
    def table(self) -> SymbolTable:
        return SymbolTable(self.coords + self.params)


def _indices(dim: int, rank: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(dim), repeat=rank)


@dataclass(frozen=True)
class TensorField:
    """Dense type-(r, s) tensor; components flat, row-major over
    (upper indices..., lower indices...)."""

    chart: Chart
    r: int
    s: int
    components: tuple[Expr, ...]

    def __post_init__(self) -> None:
        expected = self.chart.dim ** (self.r + self.s)
        if len(self.components) != expected:
            raise GeometryError(
                f"type-({self.r},{self.s}) tensor needs {expected} components, "
                f"got {len(self.components)}")

    @classmethod
    def build(cls, chart: Chart, r: int, s: int,
              fn: Callable[[tuple[int, ...]], Expr]) -> "TensorField":
        comps = tuple(fn(idx) for idx in _indices(chart.dim, r + s))
        return cls(chart, r, s, comps)

    @classmethod
    def zeros(cls, chart: Chart, r: int, s: int) -> "TensorField":
        return cls(chart, r, s, (ZERO,) * chart.dim ** (r + s))

    @property
    def rank(self) -> int:
        return self.r + self.s

    def _flat(self, idx: tuple[int, ...]) -> int:
        flat = 0
        for i in idx:
            flat = flat * self.chart.dim + i
        return flat

    def __getitem__(self, idx: tuple[int, ...] | int) -> Expr:
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise GeometryError(f"expected {self.rank} indices, got {len(idx)}")
        return self.components[self._flat(idx)]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return _indices(self.chart.dim, self.rank)

    @property
    def is_zero_tensor(self) -> bool:
        return all(c.is_zero for c in self.components)

    def first_nonzero(self) -> tuple[tuple[int, ...], Expr] | None:
        for idx in self.indices():
            value = self[idx]
            if not value.is_zero:
                return idx, value
        return None

    def _combine(self, other: "TensorField", op) -> "TensorField":
        if not isinstance(other, TensorField):
            return NotImplemented
        if (other.chart, other.r, other.s) != (self.chart, self.r, self.s):
            raise ChartMismatchError("tensor shapes or charts differ")
        comps = tuple(op(a, b) for a, b in zip(self.components, other.components))
        return TensorField(self.chart, self.r, self.s, comps)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "TensorField":
        return TensorField(self.chart, self.r, self.s,
                           tuple(-c for c in self.components))

    def scale(self, factor: Expr | int | Fraction) -> "TensorField":
        factor = as_expr(factor)
        return TensorField(self.chart, self.r, self.s,
                           tuple(factor * c for c in self.components))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorField):
            return NotImplemented
        return ((self.chart, self.r, self.s) == (other.chart, other.r, other.s)
                and self.components == other.components)

    def __hash__(self) -> int:
        return hash((self.chart.coords, self.r, self.s, self.components))


def vector_field(chart: Chart, comps: Sequence[Expr]) -> TensorField:
    return TensorField(chart, 1, 0, tuple(as_expr(c) for c in comps))


def one_form(chart: Chart, comps: Sequence[Expr]) -> TensorField:
    return TensorField(chart, 0, 1, tuple(as_expr(c) for c in comps))


def endomorphism(chart: Chart, rows: Sequence[Sequence[Expr]]) -> TensorField:
    """A (1,1) tensor from ``rows[i][j]`` = component i of the image of d_j."""
    comps = tuple(as_expr(rows[i][j]) for i in range(chart.dim) for j in range(chart.dim))
    return TensorField(chart, 1, 1, comps)


def identity_endomorphism(chart: Chart) -> TensorField:
    return TensorField.build(chart, 1, 1,
                             lambda idx: ONE if idx[0] == idx[1] else ZERO)


# ---------------------------------------------------------------------------
# Exact matrices of expressions (internal)
# ---------------------------------------------------------------------------


def _matrix_determinant(rows: list[list[Expr]]) -> Expr:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = ZERO
    sign = 1
    for j in range(n):
        entry = rows[0][j]
        if not entry.is_zero:
            minor = [[rows[i][c] for c in range(n) if c != j] for i in range(1, n)]
            term = entry * _matrix_determinant(minor)
            total = total + term if sign > 0 else total - term
        sign = -sign
    return total


def _matrix_inverse(rows: list[list[Expr]]) -> list[list[Expr]]:
    n = len(rows)
    work = [list(row) for row in rows]
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if not work[r][col].is_zero), None)
        if pivot_row is None:
            raise DegenerateMetricError("matrix is singular")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        pivot = work[col][col]
        work[col] = [v / pivot for v in work[col]]
        inv[col] = [v / pivot for v in inv[col]]
        for r in range(n):
            if r == col or work[r][col].is_zero:
                continue
            factor = work[r][col]
            work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
            inv[r] = [a - factor * b for a, b in zip(inv[r], inv[col])]
    return inv


# ---------------------------------------------------------------------------
# Metric and connection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Connection:
    """Christoffel symbols of the second kind, indexed (k; i, j), torsion-free."""

    chart: Chart
    gamma: tuple[Expr, ...]  # flat over (k, i, j)

    def __getitem__(self, idx: tuple[int, int, int]) -> Expr:
        k, i, j = idx
        dim = self.chart.dim
        return self.gamma[(k * dim + i) * dim + j]


@dataclass(frozen=True)
class Metric:
    """Symmetric nondegenerate (0,2) tensor with cached inverse and geometry.

    Nondegeneracy means the determinant is not the identically-zero
    expression; pointwise degeneracy is detected by :func:`signature_at`.
    """

    tensor: TensorField

    def __post_init__(self) -> None:
        t = self.tensor
        if (t.r, t.s) != (0, 2):
            raise GeometryError("a metric must be a (0,2) tensor")
        dim = t.chart.dim
        for i in range(dim):
            for j in range(i + 1, dim):
                if t[i, j] != t[j, i]:
                    raise GeometryError(f"metric is not symmetric at ({i},{j})")
        if self.determinant.is_zero:
            raise DegenerateMetricError("metric determinant is identically zero")

    @property
    def chart(self) -> Chart:
        return self.tensor.chart

    def __getitem__(self, idx: tuple[int, int]) -> Expr:
        return self.tensor[idx]

    def matrix(self) -> list[list[Expr]]:
        dim = self.chart.dim
        return [[self.tensor[i, j] for j in range(dim)] for i in range(dim)]

    @cached_property
    def determinant(self) -> Expr:
        return _matrix_determinant(self.matrix())

    @cached_property
    def inverse(self) -> TensorField:
        inv = _matrix_inverse(self.matrix())
        dim = self.chart.dim
        comps = tuple(inv[i][j] for i in range(dim) for j in range(dim))
        return TensorField(self.chart, 2, 0, comps)

    @cached_property
    def connection(self) -> Connection:
        dim = self.chart.dim
        coords = self.chart.coords
        ginv = self.inverse
        dg = [[[self.tensor[i, j].diff(coords[l]) for l in range(dim)]
               for j in range(dim)] for i in range(dim)]
        gamma = []
        for k in range(dim):
            for i in range(dim):
                for j in range(dim):
                    total = ZERO
                    for l in range(dim):
                        total = total + ginv[k, l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
                    gamma.append(total / 2)
        return Connection(self.chart, tuple(gamma))

    @cached_property
    def riemann_tensor(self) -> TensorField:
        dim = self.chart.dim
        coords = self.chart.coords
        conn = self.connection
        comps: dict[tuple[int, int, int, int], Expr] = {}
        for l in range(dim):
            for k in range(dim):
                for i in range(dim):
                    comps[(l, k, i, i)] = ZERO
                    for j in range(i + 1, dim):
                        value = (conn[l, j, k].diff(coords[i])
                                 - conn[l, i, k].diff(coords[j]))
                        for m in range(dim):
                            value = value + conn[l, i, m] * conn[m, j, k]
                            value = value - conn[l, j, m] * conn[m, i, k]
                        comps[(l, k, i, j)] = value
                        comps[(l, k, j, i)] = -value
        return TensorField.build(self.chart, 1, 3, lambda idx: comps[idx])

    @cached_property
    def ricci_tensor(self) -> TensorField:
        dim = self.chart.dim
        riem = self.riemann_tensor

        def entry(idx):
            i, j = idx
            total = ZERO
            for a in range(dim):
                total = total + riem[a, j, a, i]
            return total

        return TensorField.build(self.chart, 0, 2, entry)

    @cached_property
    def ricci_operator_tensor(self) -> TensorField:
        dim = self.chart.dim
        ginv = self.inverse
        ric = self.ricci_tensor

        def entry(idx):
            i, j = idx
            total = ZERO
            for k in range(dim):
                total = total + ginv[i, k] * ric[k, j]
            return total

        return TensorField.build(self.chart, 1, 1, entry)

    @cached_property
    def scalar(self) -> Expr:
        dim = self.chart.dim
        ginv = self.inverse
        ric = self.ricci_tensor
        total = ZERO
        for i in range(dim):
            for j in range(dim):
                total = total + ginv[i, j] * ric[i, j]
        return total


def metric_from_matrix(chart: Chart, rows: Sequence[Sequence[Expr]]) -> Metric:
    comps = tuple(as_expr(rows[i][j]) for i in range(chart.dim) for j in range(chart.dim))
    return Metric(TensorField(chart, 0, 2, comps))


def _require_same_chart(*objs) -> Chart:
    charts = {o.chart for o in objs}
    if len(charts) != 1:
        raise ChartMismatchError("operands live on different charts")
    return next(iter(charts))


# ---------------------------------------------------------------------------
# Connection-level operations
# ---------------------------------------------------------------------------


def christoffel(g: Metric) -> Connection:
    """Levi-Civita connection: Gamma^k_ij = g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)/2."""
    return g.connection


def covariant_derivative(t: TensorField, conn: Connection) -> TensorField:
    """nabla t, with the differentiation index appended as the last lower slot."""
    chart = _require_same_chart(t, conn)
    dim = chart.dim
    coords = chart.coords
    r, s = t.r, t.s

    def entry(idx):
        body, m = idx[:-1], idx[-1]
        value = t[body].diff(coords[m])
        for slot in range(r):
            a = body[slot]
            for c in range(dim):
                swapped = body[:slot] + (c,) + body[slot + 1:]
                value = value + conn[a, m, c] * t[swapped]
        for slot in range(s):
            pos = r + slot
            b = body[pos]
            for c in range(dim):
                swapped = body[:pos] + (c,) + body[pos + 1:]
                value = value - conn[c, m, b] * t[swapped]
        return value

    return TensorField.build(chart, r, s + 1, entry)


def riemann(g: Metric) -> TensorField:
    """(1,3) curvature, R(d_i, d_j) d_k = R^l_{kij} d_l, antisymmetric in (i, j)."""
    return g.riemann_tensor


def ricci(g: Metric) -> TensorField:
    """S(X, Y) = trace of Z -> R(Z, X)Y; symmetric for a Levi-Civita connection."""
    return g.ricci_tensor


def ricci_operator(g: Metric) -> TensorField:
    """Q with g(QX, Y) = S(X, Y), i.e. Q^i_j = g^{ik} S_{kj}."""
    return g.ricci_operator_tensor


def scalar_curvature(g: Metric) -> Expr:
    return g.scalar


def lie_bracket(x: TensorField, y: TensorField) -> TensorField:
    if (x.r, x.s) != (1, 0) or (y.r, y.s) != (1, 0):
        raise GeometryError("lie_bracket expects two vector fields")
    chart = _require_same_chart(x, y)
    coords = chart.coords

    def entry(idx):
        (k,) = idx
        total = ZERO
        for j in range(chart.dim):
            total = total + x[j,] * y[k,].diff(coords[j])
            total = total - y[j,] * x[k,].diff(coords[j])
        return total

    return TensorField.build(chart, 1, 0, entry)


def lie_derivative(t: TensorField, v: TensorField) -> TensorField:
    """L_v t for any tensor type; on a metric equals g(nabla_. v, .) + g(., nabla_. v)."""
    if (v.r, v.s) != (1, 0):
        raise GeometryError("lie_derivative expects a vector field direction")
    chart = _require_same_chart(t, v)
    dim = chart.dim
    coords = chart.coords
    r, s = t.r, t.s

    def entry(idx):
        value = ZERO
        for m in range(dim):
            value = value + v[m,] * t[idx].diff(coords[m])
        for slot in range(r):
            a = idx[slot]
            for m in range(dim):
                swapped = idx[:slot] + (m,) + idx[slot + 1:]
                value = value - t[swapped] * v[a,].diff(coords[m])
        for slot in range(s):
            pos = r + slot
            b = idx[pos]
            for m in range(dim):
                swapped = idx[:pos] + (m,) + idx[pos + 1:]
                value = value + t[swapped] * v[m,].diff(coords[b])
        return value

    return TensorField.build(chart, r, s, entry)


# ---------------------------------------------------------------------------
# Exterior calculus
# ---------------------------------------------------------------------------


def _permutation_sign(idx: Sequence[int]) -> int:
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class KForm:
    """Totally antisymmetric (0, k) tensor; degree 0 is a scalar."""

    chart: Chart
    degree: int
    tensor: TensorField

    def __post_init__(self) -> None:
        t = self.tensor
        if (t.r, t.s) != (0, self.degree) or t.chart != self.chart:
            raise GeometryError("KForm tensor does not match the declared degree/chart")
        if self.degree < 0 or self.degree > self.chart.dim:
            raise DegreeError("form degree outside 0..dim")
        for idx in t.indices():
            if len(set(idx)) < len(idx):
                if not t[idx].is_zero:
                    raise GeometryError(f"repeated-index component {idx} is nonzero")
                continue
            base = tuple(sorted(idx))
            expected = t[base] if _permutation_sign(idx) > 0 else -t[base]
            if t[idx] != expected:
                raise GeometryError(f"components are not antisymmetric at {idx}")

    @classmethod
    def scalar(cls, chart: Chart, value: Expr) -> "KForm":
        return cls(chart, 0, TensorField(chart, 0, 0, (as_expr(value),)))

    @classmethod
    def from_one_form(cls, omega: TensorField) -> "KForm":
        return cls(omega.chart, 1, omega)

    @classmethod
    def from_increasing(cls, chart: Chart, degree: int,
                        values: Mapping[tuple[int, ...], Expr]) -> "KForm":
        """Build a dense form from components on strictly increasing indices."""

        def entry(idx):
            if len(set(idx)) < len(idx):
                return ZERO
            base = tuple(sorted(idx))
            value = values.get(base, ZERO)
            return value if _permutation_sign(idx) > 0 else -value

        return cls(chart, degree, TensorField.build(chart, 0, degree, entry))

    def __getitem__(self, idx: tuple[int, ...]) -> Expr:
        return self.tensor[idx]

    @property
    def is_zero_form(self) -> bool:
        return self.tensor.is_zero_tensor


def exterior_derivative(omega: KForm) -> KForm:
    """d with the 1/(k+1) normalisation; satisfies d(d omega) = 0.

    Top-degree forms are rejected: there is no degree dim+1 slot to fill.
    """
    chart = omega.chart
    k = omega.degree
    if k >= chart.dim:
        raise DegreeError("cannot take d of a top-degree form")
    coords = chart.coords
    values: dict[tuple[int, ...], Expr] = {}
    for head in itertools.combinations(range(chart.dim), k + 1):
        total = ZERO
        for a, ia in enumerate(head):
            rest = head[:a] + head[a + 1:]
            term = omega[rest].diff(coords[ia])
            total = total + term if a % 2 == 0 else total - term
        values[head] = total / (k + 1)
    return KForm.from_increasing(chart, k + 1, values)


def wedge(alpha: KForm, beta: KForm) -> KForm:
    """Graded-commutative, associative product matching the d normalisation."""
    chart = _require_same_chart(alpha, beta)
    p, q = alpha.degree, beta.degree
    if p + q > chart.dim:
        raise DegreeError("wedge degree exceeds the chart dimension")
    weight = Fraction(factorial(p) * factorial(q), factorial(p + q))
    values: dict[tuple[int, ...], Expr] = {}
    for head in itertools.combinations(range(chart.dim), p + q):
        total = ZERO
        for chosen in itertools.combinations(range(p + q), p):
            rest = tuple(t for t in range(p + q) if t not in chosen)
            sign = 1
            for t, c in enumerate(chosen):
                if (c - t) % 2 == 1:
                    sign = -sign
            left = tuple(head[c] for c in chosen)
            right = tuple(head[t] for t in rest)
            term = alpha[left] * beta[right]
            total = total + term if sign > 0 else total - term
        values[head] = total * weight
    return KForm.from_increasing(chart, p + q, values)


# ---------------------------------------------------------------------------
# Gradient, Hessian, derived Lie derivatives
# ---------------------------------------------------------------------------


def gradient(f: Expr, g: Metric) -> TensorField:
    """(Df)^i = g^{ij} d_j f, the exact metric dual of df."""
    chart = g.chart
    ginv = g.inverse
    df = [f.diff(c) for c in chart.coords]

    def entry(idx):
        (i,) = idx
        total = ZERO
        for j in range(chart.dim):
            total = total + ginv[i, j] * df[j]
        return total

    return TensorField.build(chart, 1, 0, entry)


def hessian(f: Expr, g: Metric) -> TensorField:
    """Hess f = nabla df: (Hess f)_{ij} = d_i d_j f - Gamma^k_{ij} d_k f."""
    chart = g.chart
    coords = chart.coords
    conn = g.connection
    df = [f.diff(c) for c in coords]

    def entry(idx):
        i, j = idx
        value = df[j].diff(coords[i])
        for k in range(chart.dim):
            value = value - conn[k, i, j] * df[k]
        return value

    return TensorField.build(chart, 0, 2, entry)


def lie_derivative_of_connection(v: TensorField, conn: Connection) -> TensorField:
    """(L_v nabla)(X, Y) = L_v(nabla_X Y) - nabla_[v,X] Y - nabla_X(L_v Y).

    Symmetric (1,2) tensor for a torsion-free connection; vanishes exactly
    when v is affine, in particular for Killing fields.
    """
    if (v.r, v.s) != (1, 0):
        raise GeometryError("expected a vector field")
    chart = _require_same_chart(v, conn)
    dim = chart.dim
    coords = chart.coords

    def entry(idx):
        k, i, j = idx
        value = v[k,].diff(coords[i]).diff(coords[j])
        for m in range(dim):
            value = value + v[m,] * conn[k, i, j].diff(coords[m])
            value = value - conn[m, i, j] * v[k,].diff(coords[m])
            value = value + conn[k, m, j] * v[m,].diff(coords[i])
            value = value + conn[k, i, m] * v[m,].diff(coords[j])
        return value

    return TensorField.build(chart, 1, 2, entry)


def lie_derivative_of_curvature(v: TensorField, g: Metric) -> TensorField:
    """L_v R as a (1,3) tensor, via the general Lie derivative."""
    return lie_derivative(g.riemann_tensor, v)


# ---------------------------------------------------------------------------
# Pointwise signature
# ---------------------------------------------------------------------------


def signature_at(g: Metric, point: Mapping[Symbol, int | Fraction]) -> tuple[int, int, int]:
    """Exact inertia (n+, n-, n0) by symmetric congruence elimination over Q."""
    dim = g.chart.dim
    m = [[g[i, j].evaluate(point) for j in range(dim)] for i in range(dim)]
    npos = nneg = nzero = 0

    def add_row_col(target: int, source: int) -> None:
        for j in range(dim):
            m[target][j] += m[source][j]
        for i in range(dim):
            m[i][target] += m[i][source]

    def swap_row_col(a: int, b: int) -> None:
        m[a], m[b] = m[b], m[a]
        for row in m:
            row[a], row[b] = row[b], row[a]

    for k in range(dim):
        if m[k][k] == 0:
            swap = next((j for j in range(k + 1, dim) if m[j][j] != 0), None)
            if swap is not None:
                swap_row_col(k, swap)
            else:
                off = next((j for j in range(k + 1, dim) if m[k][j] != 0), None)
                if off is None:
                    nzero += 1
                    continue
                add_row_col(k, off)
        pivot = m[k][k]
        if pivot > 0:
            npos += 1
        else:
            nneg += 1
        for i in range(k + 1, dim):
            if m[i][k] == 0:
                continue
            factor = m[i][k] / pivot
            for j in range(dim):
                m[i][j] -= factor * m[k][j]
            for j in range(dim):
                m[j][i] -= factor * m[j][k]
    return npos, nneg, nzero


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


def frame_component(t: TensorField, frame: Sequence[TensorField]) -> Expr:
    """Full contraction of ``t`` against covectors (upper slots, in order)
    followed by vectors (lower slots)."""
    if len(frame) != t.rank:
        raise GeometryError(f"expected {t.rank} frame entries, got {len(frame)}")
    for pos, field in enumerate(frame):
        want = (0, 1) if pos < t.r else (1, 0)
        if (field.r, field.s) != want:
            kind = "covector" if want == (0, 1) else "vector"
            raise GeometryError(f"frame entry {pos} must be a {kind}")
        if field.chart != t.chart:
            raise ChartMismatchError("frame entry lives on a different chart")
    total = ZERO
    for idx in t.indices():
        term = t[idx]
        if term.is_zero:
            continue
        for pos, i in enumerate(idx):
            term = term * frame[pos][i,]
        total = total + term
    return total


def frame_coefficients(v: TensorField, frame: Sequence[TensorField]) -> tuple[Expr, ...]:
    """Coefficients c with v = sum c_a e_a, solved exactly (frame must be a basis)."""
    chart = v.chart
    dim = chart.dim
    if (v.r, v.s) != (1, 0) or len(frame) != dim:
        raise GeometryError("need a vector field and a full frame")
    columns = [[frame[a][i,] for a in range(dim)] for i in range(dim)]
    inv = _matrix_inverse(columns)
    coeffs = []
    for a in range(dim):
        total = ZERO
        for i in range(dim):
            total = total + inv[a][i] * v[i,]
        coeffs.append(total)
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# Deterministic regular points
# ---------------------------------------------------------------------------

_CANDIDATE_VALUES: tuple[Fraction, ...] = tuple(
    Fraction(v) for v in (0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3)
)


def find_regular_point(
    g: Metric,
    extra: Iterable[Expr] = (),
    param_value: Fraction = Fraction(1),
) -> dict[Symbol, Fraction]:
    """First candidate point (deterministic order) where the metric entries and
    ``extra`` expressions are finite and the metric is pointwise nondegenerate.

    Parameters are pinned to ``param_value`` so that evaluation is total.
    """
    chart = g.chart
    extra = tuple(extra)
    for values in itertools.product(_CANDIDATE_VALUES, repeat=chart.dim):
        point = dict(zip(chart.coords, values))
        point.update({p: param_value for p in chart.params})
        try:
            det = g.determinant.evaluate(point)
            if det == 0:
                continue
            for e in extra:
                e.evaluate(point)
        except (PoleError, ExprError):
            continue
        return point
    raise GeometryError("no regular rational sample point found")
