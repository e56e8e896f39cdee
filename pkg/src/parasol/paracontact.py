"""Almost paracontact metric structures and their verification suite.

A structure is the quadruple (phi, xi, eta, g) on an odd-dimensional chart.
Checks return :class:`StructureVerdict` values carrying an exact witness
component on failure; nothing is approximated.  The staged checks refuse to
run when their prerequisites fail (a residual computed from an incompatible
metric would be meaningless), raising :class:`StructurePreconditionError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .symexpr import Expr, ZERO, ONE
from .geometry import (
    Chart,
    Connection,
    GeometryError,
    KForm,
    Metric,
    TensorField,
    covariant_derivative,
    exterior_derivative,
    find_regular_point,
    identity_endomorphism,
    lie_derivative,
    wedge,
)

__all__ = [
    "ParacontactStructure",
    "StructureVerdict",
    "StructurePreconditionError",
    "check_almost_paracontact",
    "check_compatibility",
    "check_paracontact_metric",
    "compute_h",
    "nijenhuis",
    "check_para_sasakian",
    "para_sasakian_identity_suite",
]

Witness = tuple[tuple[int, ...], Expr]


class StructurePreconditionError(GeometryError):
    """A staged check was invoked on a structure that fails an earlier stage."""

    def __init__(self, stage: str, failed: "StructureVerdict"):
        super().__init__(f"{stage} requires '{failed.name}' to pass first")
        self.stage = stage
        self.failed = failed


@dataclass(frozen=True)
class StructureVerdict:
    """Outcome of one axiom or identity check.

    ``witness`` is the first component index whose residual is not the zero
    expression; ``passed`` is true exactly when the whole residual vanishes.
    """

    name: str
    passed: bool
    witness: Witness | None = None
    note: str = ""

    @classmethod
    def from_residual(cls, name: str, residual: TensorField, note: str = "") -> "StructureVerdict":
        found = residual.first_nonzero()
        return cls(name, found is None, found, note)

    @classmethod
    def from_scalar(cls, name: str, residual: Expr, note: str = "") -> "StructureVerdict":
        if residual.is_zero:
            return cls(name, True, None, note)
        return cls(name, False, ((), residual), note)


@dataclass(frozen=True)
class ParacontactStructure:
    """The quadruple (phi, xi, eta, g) on a (2n+1)-dimensional chart.

    Construction validates shapes only; whether the axioms actually hold is
    what the check functions decide, so deliberately broken structures can be
    built for negative tests.
    """

    chart: Chart
    phi: TensorField
    xi: TensorField
    eta: TensorField
    g: Metric

    def __post_init__(self) -> None:
        if self.chart.dim % 2 == 0 or self.chart.dim < 3:
            raise GeometryError("paracontact structures need odd dimension >= 3")
        if (self.phi.r, self.phi.s) != (1, 1):
            raise GeometryError("phi must be a (1,1) tensor")
        if (self.xi.r, self.xi.s) != (1, 0):
            raise GeometryError("xi must be a vector field")
        if (self.eta.r, self.eta.s) != (0, 1):
            raise GeometryError("eta must be a 1-form")
        for field in (self.phi, self.xi, self.eta, self.g.tensor):
            if field.chart != self.chart:
                raise GeometryError("all structure fields must share one chart")

    @property
    def n(self) -> int:
        return (self.chart.dim - 1) // 2

    @cached_property
    def eta_form(self) -> KForm:
        return KForm.from_one_form(self.eta)

    @cached_property
    def d_eta(self) -> KForm:
        return exterior_derivative(self.eta_form)

    @cached_property
    def connection(self) -> Connection:
        return self.g.connection

    def eta_of(self, v: TensorField) -> Expr:
        total = ZERO
        for i in range(self.chart.dim):
            total = total + self.eta[i,] * v[i,]
        return total

    def apply_phi(self, v: TensorField) -> TensorField:
        dim = self.chart.dim

        def entry(idx):
            (k,) = idx
            total = ZERO
            for j in range(dim):
                total = total + self.phi[k, j] * v[j,]
            return total

        return TensorField.build(self.chart, 1, 0, entry)

    def eta_times_eta(self) -> TensorField:
        return TensorField.build(
            self.chart, 0, 2, lambda idx: self.eta[idx[0],] * self.eta[idx[1],])


def _compose(a: TensorField, b: TensorField) -> TensorField:
    """(1,1) composition (a . b)^i_j = a^i_m b^m_j."""
    dim = a.chart.dim

    def entry(idx):
        i, j = idx
        total = ZERO
        for m in range(dim):
            total = total + a[i, m] * b[m, j]
        return total

    return TensorField.build(a.chart, 1, 1, entry)


# ---------------------------------------------------------------------------
# Exact rank over Q (for the pointwise eigensplit count)
# ---------------------------------------------------------------------------


def _rank(matrix: list[list[Fraction]]) -> int:
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        head = rows[rank][col]
        rows[rank] = [v / head for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _eigensplit_verdict(s: ParacontactStructure) -> StructureVerdict:
    """Count the +1/-1 eigenspaces of phi restricted to ker(eta) at one
    deterministic rational sample point; a generic-point surrogate for the
    equal-eigendistribution condition."""
    dim = s.chart.dim
    n = s.n
    name = "eigensplit-at-sample-point"
    extras = list(s.phi.components) + list(s.eta.components)
    try:
        point = find_regular_point(s.g, extras)
    except GeometryError:
        return StructureVerdict(name, False, None, "no regular sample point found")
    eta_vals = [s.eta[i,].evaluate(point) for i in range(dim)]
    if all(v == 0 for v in eta_vals):
        return StructureVerdict(name, False, None,
                                f"eta vanishes at sample point {_point_str(point)}")
    anchor = max(range(dim), key=lambda i: abs(eta_vals[i]))
    basis_cols = [i for i in range(dim) if i != anchor]
    phi_vals = [[s.phi[i, j].evaluate(point) for j in range(dim)] for i in range(dim)]

    # basis of ker eta: v_j = e_j - (eta_j / eta_anchor) e_anchor
    def basis_vector(j: int) -> list[Fraction]:
        v = [Fraction(0)] * dim
        v[j] = Fraction(1)
        v[anchor] = -eta_vals[j] / eta_vals[anchor]
        return v

    columns = []
    for j in basis_cols:
        v = basis_vector(j)
        image = [sum(phi_vals[i][m] * v[m] for m in range(dim)) for i in range(dim)]
        if sum(eta_vals[i] * image[i] for i in range(dim)) != 0:
            return StructureVerdict(
                name, False, None,
                f"phi does not preserve ker(eta) at sample point {_point_str(point)}")
        # coordinates of image in the basis: entry t is the e_{basis_cols[t]} part
        columns.append([image[t] for t in basis_cols])
    a = [[columns[j][t] for j in range(2 * n)] for t in range(2 * n)]
    a_squared = [[sum(a[i][m] * a[m][j] for m in range(2 * n)) for j in range(2 * n)]
                 for i in range(2 * n)]
    if any(a_squared[i][j] != (1 if i == j else 0) for i in range(2 * n) for j in range(2 * n)):
        return StructureVerdict(
            name, False, None,
            f"induced map is not an involution on ker(eta) at {_point_str(point)}")
    minus = [[a[i][j] - (1 if i == j else 0) for j in range(2 * n)] for i in range(2 * n)]
    plus = [[a[i][j] + (1 if i == j else 0) for j in range(2 * n)] for i in range(2 * n)]
    dim_plus = 2 * n - _rank(minus)
    dim_minus = 2 * n - _rank(plus)
    note = (f"generic-point check at {_point_str(point)}: "
            f"eigenspace dimensions (+1, -1) = ({dim_plus}, {dim_minus})")
    return StructureVerdict(name, dim_plus == n and dim_minus == n, None, note)


def _point_str(point) -> str:
    return "(" + ", ".join(f"{s.name}={v}" for s, v in sorted(point.items(), key=lambda kv: kv[0].name)) + ")"


# ---------------------------------------------------------------------------
# Structure checks
# ---------------------------------------------------------------------------


def check_almost_paracontact(s: ParacontactStructure) -> list[StructureVerdict]:
    """Axioms of the almost paracontact triple plus its direct consequences:
    phi^2 = I - eta(x)xi, eta(xi) = 1, phi(xi) = 0, eta o phi = 0, trace-free
    phi, and a pointwise eigenspace count on ker(eta)."""
    dim = s.chart.dim
    phi2 = _compose(s.phi, s.phi)
    projector = identity_endomorphism(s.chart) - TensorField.build(
        s.chart, 1, 1, lambda idx: s.xi[idx[0],] * s.eta[idx[1],])
    verdicts = [
        StructureVerdict.from_residual("phi-square-projector", phi2 - projector),
        StructureVerdict.from_scalar("reeb-normalization", s.eta_of(s.xi) - ONE),
        StructureVerdict.from_residual("phi-annihilates-reeb", s.apply_phi(s.xi)),
        StructureVerdict.from_residual(
            "eta-annihilates-phi-range",
            TensorField.build(s.chart, 0, 1,
                              lambda idx: sum((s.eta[i,] * s.phi[i, idx[0]]
                                               for i in range(dim)), ZERO))),
        StructureVerdict.from_scalar(
            "phi-traceless", sum((s.phi[i, i] for i in range(dim)), ZERO)),
        _eigensplit_verdict(s),
    ]
    return verdicts


def check_compatibility(s: ParacontactStructure) -> StructureVerdict:
    """g(phi X, phi Y) = -g(X, Y) + eta(X) eta(Y), componentwise exact."""
    dim = s.chart.dim

    def entry(idx):
        i, j = idx
        value = s.g[i, j] - s.eta[i,] * s.eta[j,]
        for a in range(dim):
            for b in range(dim):
                value = value + s.phi[a, i] * s.phi[b, j] * s.g[a, b]
        return value

    residual = TensorField.build(s.chart, 0, 2, entry)
    return StructureVerdict.from_residual("metric-compatibility", residual)


def fundamental_two_form(s: ParacontactStructure) -> TensorField:
    """Phi(X, Y) = g(X, phi Y)."""
    dim = s.chart.dim

    def entry(idx):
        i, j = idx
        total = ZERO
        for a in range(dim):
            total = total + s.g[i, a] * s.phi[a, j]
        return total

    return TensorField.build(s.chart, 0, 2, entry)


def check_paracontact_metric(s: ParacontactStructure, *,
                             require_prerequisites: bool = True) -> StructureVerdict:
    """d eta equals the fundamental 2-form and eta ^ (d eta)^n is nonzero.

    By default refuses to run on a structure that fails metric compatibility;
    pass ``require_prerequisites=False`` to audit such structures anyway.
    """
    if require_prerequisites:
        compat = check_compatibility(s)
        if not compat.passed:
            raise StructurePreconditionError("check_paracontact_metric", compat)
    residual = s.d_eta.tensor - fundamental_two_form(s)
    verdict = StructureVerdict.from_residual("fundamental-form-is-d-eta", residual)
    if not verdict.passed:
        return verdict
    volume = s.eta_form
    for _ in range(s.n):
        volume = wedge(volume, s.d_eta)
    if volume.is_zero_form:
        return StructureVerdict("fundamental-form-is-d-eta", False, None,
                                "contact volume form eta^(d eta)^n vanishes")
    return StructureVerdict("fundamental-form-is-d-eta", True, None,
                            "contact volume form is nonzero")


def compute_h(s: ParacontactStructure) -> TensorField:
    """The deformation operator h = (1/2) L_xi phi; self-adjoint, anticommutes
    with phi and vanishes exactly in the para-Sasakian case."""
    return lie_derivative(s.phi, s.xi).scale(Fraction(1, 2))


def nijenhuis(s: ParacontactStructure) -> tuple[TensorField, StructureVerdict]:
    """Torsion N(X,Y) = [phi,phi](X,Y) - 2 d eta(X,Y) xi on coordinate fields.

    The 2 d eta term uses the module-wide half-normalised d, which restores
    the unnormalised pairing; vanishing is normality.
    """
    dim = s.chart.dim
    coords = s.chart.coords
    d_eta = s.d_eta

    def entry(idx):
        k, i, j = idx
        value = ZERO
        for a in range(dim):
            value = value + s.phi[a, i] * s.phi[k, j].diff(coords[a])
            value = value - s.phi[a, j] * s.phi[k, i].diff(coords[a])
            value = value - s.phi[k, a] * s.phi[a, j].diff(coords[i])
            value = value + s.phi[k, a] * s.phi[a, i].diff(coords[j])
        return value - 2 * d_eta[(i, j)] * s.xi[k,]

    torsion = TensorField.build(s.chart, 1, 2, entry)
    return torsion, StructureVerdict.from_residual("normality-torsion", torsion)


def check_para_sasakian(s: ParacontactStructure, *,
                        require_prerequisites: bool = True) -> StructureVerdict:
    """(nabla_X phi)Y = -g(X, Y) xi + eta(Y) X, componentwise exact.

    A residual computed from an incompatible metric uses the wrong connection,
    so by default the check refuses to run unless compatibility and the
    paracontact-metric condition hold; ``require_prerequisites=False`` runs it
    regardless, for audits of broken fixtures.
    """
    if require_prerequisites:
        pcm = check_paracontact_metric(s)  # raises if compatibility fails
        if not pcm.passed:
            raise StructurePreconditionError("check_para_sasakian", pcm)
    nabla_phi = covariant_derivative(s.phi, s.connection)  # (1,1)+1: [k, j, m]

    def entry(idx):
        k, j, i = idx
        value = nabla_phi[k, j, i] + s.g[i, j] * s.xi[k,]
        if k == i:
            value = value - s.eta[j,]
        return value

    residual = TensorField.build(s.chart, 1, 2, entry)
    return StructureVerdict.from_residual("para-sasakian-covariant-identity", residual)


def para_sasakian_identity_suite(s: ParacontactStructure) -> list[StructureVerdict]:
    """The derived identities that hold on any para-Sasakian structure.

    Requires :func:`check_para_sasakian` to pass; each verdict is an exact
    componentwise residual test.
    """
    sasakian = check_para_sasakian(s)
    if not sasakian.passed:
        raise StructurePreconditionError("para_sasakian_identity_suite", sasakian)

    dim = s.chart.dim
    n = s.n
    conn = s.connection
    g = s.g
    riem = g.riemann_tensor
    q = g.ricci_operator_tensor
    verdicts = []

    nabla_xi = covariant_derivative(s.xi, conn)  # [k, i]
    verdicts.append(StructureVerdict.from_residual(
        "covariant-reeb-derivative",
        TensorField.build(s.chart, 1, 1, lambda idx: nabla_xi[idx] + s.phi[idx])))

    def curv_reeb_argument(idx):
        l, i, j = idx
        total = ZERO
        for k in range(dim):
            total = total + riem[l, k, i, j] * s.xi[k,]
        if l == j:
            total = total - s.eta[i,]
        if l == i:
            total = total + s.eta[j,]
        return total

    verdicts.append(StructureVerdict.from_residual(
        "curvature-reeb-argument", TensorField.build(s.chart, 1, 2, curv_reeb_argument)))

    def curv_reeb_slot(idx):
        l, i, j = idx
        total = ZERO
        for m in range(dim):
            total = total + riem[l, j, i, m] * s.xi[m,]
        total = total - g[i, j] * s.xi[l,]
        if l == i:
            total = total + s.eta[j,]
        return total

    verdicts.append(StructureVerdict.from_residual(
        "curvature-reeb-slot", TensorField.build(s.chart, 1, 2, curv_reeb_slot)))

    def ricci_reeb(idx):
        (i,) = idx
        total = 2 * n * s.xi[i,]
        for j in range(dim):
            total = total + q[i, j] * s.xi[j,]
        return total

    verdicts.append(StructureVerdict.from_residual(
        "ricci-reeb-eigenvalue", TensorField.build(s.chart, 1, 0, ricci_reeb)))

    verdicts.append(StructureVerdict.from_residual(
        "ricci-phi-commutation", _compose(q, s.phi) - _compose(s.phi, q)))

    nabla_q = covariant_derivative(q, conn)  # [k, j, m]

    def ricci_parallel_reeb(idx):
        k, j = idx
        total = ZERO
        for m in range(dim):
            total = total + nabla_q[k, j, m] * s.xi[m,]
        return total

    verdicts.append(StructureVerdict.from_residual(
        "ricci-parallel-along-reeb", TensorField.build(s.chart, 1, 1, ricci_parallel_reeb)))

    q_phi = _compose(q, s.phi)

    def ricci_derivative_at_reeb(idx):
        k, i = idx
        total = -q_phi[k, i] - 2 * n * s.phi[k, i]
        for j in range(dim):
            total = total + nabla_q[k, j, i] * s.xi[j,]
        return total

    verdicts.append(StructureVerdict.from_residual(
        "ricci-derivative-at-reeb", TensorField.build(s.chart, 1, 1, ricci_derivative_at_reeb)))

    nabla_phi = covariant_derivative(s.phi, conn)  # [k, j, m]

    def phi_second_identity(idx):
        k, i, j = idx
        total = -nabla_phi[k, j, i] - 2 * g[i, j] * s.xi[k,] + s.eta[j,] * s.eta[i,] * s.xi[k,]
        if k == i:
            total = total + s.eta[j,]
        for a in range(dim):
            for b in range(dim):
                total = total + nabla_phi[k, b, a] * s.phi[b, j] * s.phi[a, i]
        return total

    verdicts.append(StructureVerdict.from_residual(
        "phi-covariant-difference", TensorField.build(s.chart, 1, 2, phi_second_identity)))

    verdicts.append(StructureVerdict.from_residual(
        "deformation-operator-vanishes", compute_h(s)))

    verdicts.append(StructureVerdict.from_residual(
        "reeb-killing", lie_derivative(g.tensor, s.xi)))

    return verdicts
