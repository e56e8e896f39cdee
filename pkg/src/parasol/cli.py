"""Command-line front end: fixture-driven verification pipelines.

Subcommands::

    parasol check <file>                       structure axiom suite
    parasol curvature <file> [--frame NAME]    connection/curvature report
    parasol soliton <file> [--solve|--almost|--gradient]
                           [--lambda EXPR] [--mu EXPR]
    parasol report <file> [--json]             everything applicable

Exit codes: 0 all requested checks passed, 1 some check failed, 2 input
error.  ``not-applicable`` and ``outside-hypothesis`` outcomes do not fail.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__
from .symexpr import Expr, ExprError, ExprSyntaxError, parse_expr
from .geometry import (
    GeometryError,
    TensorField,
    find_regular_point,
    frame_coefficients,
    frame_component,
    signature_at,
)
from .paracontact import (
    ParacontactStructure,
    StructureVerdict,
    check_almost_paracontact,
    check_compatibility,
    check_paracontact_metric,
    check_para_sasakian,
    nijenhuis,
    para_sasakian_identity_suite,
)
from .soliton import (
    NonConstantSolution,
    NotASoliton,
    SolitonBranch,
    SolitonError,
    SolitonFamily,
    SolitonProblem,
    SolitonSolution,
    build_classification,
    conformal_residual,
    gradient_consistency,
    gradient_residual,
    ricci_form_checks,
    solve_almost,
    solve_constants,
)
from .manifest import Manifest, ManifestError, load_manifest
from .report import (
    FAIL,
    NOT_APPLICABLE,
    OUTSIDE_HYPOTHESIS,
    PASS,
    SOLVED,
    CheckOutcome,
    VerdictReport,
)

INPUT_ERROR = 2


# ---------------------------------------------------------------------------
# Rendering helpers
# ---------------------------------------------------------------------------


def _component_name(man: Manifest, idx: tuple[int, ...]) -> str:
    names = [man.chart.coords[i].name for i in idx]
    return "(" + ",".join(names) + ")"


def _verdict_outcome(man: Manifest, prefix: str, v: StructureVerdict) -> CheckOutcome:
    payload = {}
    if v.witness is not None:
        payload["witness_component"] = _component_name(man, v.witness[0])
        payload["witness_value"] = str(v.witness[1])
    if v.note:
        payload["note"] = v.note
    return CheckOutcome(f"{prefix}.{v.name}", PASS if v.passed else FAIL, payload)


def _skip(name: str, reason: str) -> CheckOutcome:
    return CheckOutcome(name, NOT_APPLICABLE, {"note": reason})


def _vector_in_frame(v: TensorField, frame, frame_name: str) -> str:
    coeffs = frame_coefficients(v, frame)
    pieces = []
    for a, c in enumerate(coeffs):
        if c.is_zero:
            continue
        label = f"{frame_name}{a + 1}"
        text = str(c)
        if text == "1":
            pieces.append(("+", label))
        elif text == "-1":
            pieces.append(("-", label))
        elif text.startswith("-"):
            pieces.append(("-", f"({text[1:]})*{label}" if any(op in text[1:] for op in " +-")
                           else f"{text[1:]}*{label}"))
        else:
            pieces.append(("+", f"({text})*{label}" if any(op in text for op in " +-")
                           else f"{text}*{label}"))
    if not pieces:
        return "0"
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------


def structure_checks(man: Manifest) -> list[CheckOutcome]:
    s = man.structure
    if s is None:
        raise ManifestError("manifest has no [structure] block")
    outcomes = [_verdict_outcome(man, "structure", v) for v in check_almost_paracontact(s)]

    compat = check_compatibility(s)
    outcomes.append(_verdict_outcome(man, "structure", compat))

    _, normality = nijenhuis(s)
    outcomes.append(_verdict_outcome(man, "structure", normality))

    if not compat.passed:
        outcomes.append(_skip("structure.fundamental-form-is-d-eta",
                              "metric compatibility failed"))
        outcomes.append(_skip("structure.para-sasakian-covariant-identity",
                              "metric compatibility failed"))
        outcomes.append(_skip("structure.identity-suite",
                              "metric compatibility failed"))
        return outcomes

    pcm = check_paracontact_metric(s)
    outcomes.append(_verdict_outcome(man, "structure", pcm))
    if not pcm.passed:
        outcomes.append(_skip("structure.para-sasakian-covariant-identity",
                              "paracontact metric condition failed"))
        outcomes.append(_skip("structure.identity-suite",
                              "paracontact metric condition failed"))
        return outcomes

    sasakian = check_para_sasakian(s)
    outcomes.append(_verdict_outcome(man, "structure", sasakian))
    if not sasakian.passed:
        outcomes.append(_skip("structure.identity-suite",
                              "para-Sasakian condition failed"))
        return outcomes

    for v in para_sasakian_identity_suite(s):
        outcomes.append(_verdict_outcome(man, "identity", v))
    return outcomes


def curvature_checks(man: Manifest, frame_name: str | None) -> list[CheckOutcome]:
    g = man.metric
    dim = man.chart.dim
    coords = [c.name for c in man.chart.coords]
    outcomes = []

    conn = g.connection
    gamma = {}
    for k in range(dim):
        for i in range(dim):
            for j in range(dim):
                value = conn[k, i, j]
                if not value.is_zero:
                    gamma[f"{coords[k]};{coords[i]},{coords[j]}"] = str(value)
    outcomes.append(CheckOutcome("curvature.christoffel", SOLVED,
                                 {"nonzero": gamma, "count": len(gamma)}))

    riem = g.riemann_tensor
    riem_payload = {}
    for l in range(dim):
        for k in range(dim):
            for i in range(dim):
                for j in range(i + 1, dim):
                    value = riem[l, k, i, j]
                    if not value.is_zero:
                        key = f"{coords[l]};{coords[k]},{coords[i]},{coords[j]}"
                        riem_payload[key] = str(value)
    outcomes.append(CheckOutcome("curvature.riemann", SOLVED,
                                 {"nonzero_upper": riem_payload, "count": len(riem_payload)}))

    ric = g.ricci_tensor
    ric_payload = {}
    for i in range(dim):
        for j in range(i, dim):
            value = ric[i, j]
            if not value.is_zero:
                ric_payload[f"{coords[i]},{coords[j]}"] = str(value)
    outcomes.append(CheckOutcome("curvature.ricci", SOLVED, {"nonzero_upper": ric_payload}))

    q = g.ricci_operator_tensor
    q_payload = {}
    for i in range(dim):
        for j in range(dim):
            value = q[i, j]
            if not value.is_zero:
                q_payload[f"{coords[i]};{coords[j]}"] = str(value)
    outcomes.append(CheckOutcome("curvature.ricci-operator", SOLVED, {"nonzero": q_payload}))

    outcomes.append(CheckOutcome("curvature.scalar", SOLVED, {"r": str(g.scalar)}))

    point = find_regular_point(g)
    inertia = signature_at(g, point)
    point_str = ", ".join(f"{s.name}={v}" for s, v in sorted(point.items(), key=lambda kv: kv[0].name))
    outcomes.append(CheckOutcome("curvature.signature", SOLVED,
                                 {"at": point_str,
                                  "positive": inertia[0],
                                  "negative": inertia[1],
                                  "null": inertia[2]}))

    if frame_name is not None:
        if frame_name not in man.frames:
            raise ManifestError(f"manifest defines no frame named '{frame_name}'")
        frame = man.frames[frame_name]
        values = {}
        for a in range(dim):
            for b in range(a + 1, dim):
                for c in range(dim):
                    vec = _curvature_vector(man, frame[a], frame[b], frame[c])
                    key = f"R({frame_name}{a + 1},{frame_name}{b + 1}){frame_name}{c + 1}"
                    values[key] = _vector_in_frame(vec, frame, frame_name)
        outcomes.append(CheckOutcome("curvature.frame-riemann", SOLVED, {"values": values}))

        gram = {}
        ric_frame = {}
        for a in range(dim):
            for b in range(a, dim):
                gram[f"{frame_name}{a + 1},{frame_name}{b + 1}"] = \
                    str(frame_component(g.tensor, [frame[a], frame[b]]))
                ric_frame[f"{frame_name}{a + 1},{frame_name}{b + 1}"] = \
                    str(frame_component(ric, [frame[a], frame[b]]))
        outcomes.append(CheckOutcome("curvature.frame-gram", SOLVED, {"g": gram}))
        outcomes.append(CheckOutcome("curvature.frame-ricci", SOLVED, {"S": ric_frame}))
        if man.structure is not None:
            eta_frame = {f"{frame_name}{a + 1}":
                         str(frame_component(man.structure.eta, [frame[a]]))
                         for a in range(dim)}
            outcomes.append(CheckOutcome("curvature.frame-eta", SOLVED, {"eta": eta_frame}))
    return outcomes


def _curvature_vector(man: Manifest, x: TensorField, y: TensorField, z: TensorField) -> TensorField:
    """R(x, y)z as a vector field (coordinate components)."""
    from .symexpr import ZERO

    g = man.metric
    riem = g.riemann_tensor
    dim = man.chart.dim

    def entry(idx):
        (l,) = idx
        total = ZERO
        for k in range(dim):
            zk = z[k,]
            if zk.is_zero:
                continue
            for i in range(dim):
                xi = x[i,]
                if xi.is_zero:
                    continue
                for j in range(dim):
                    total = total + riem[l, k, i, j] * zk * xi * y[j,]
        return total

    return TensorField.build(man.chart, 1, 0, entry)


def _solution_payload(sol: SolitonSolution) -> dict:
    return {"lambda": str(sol.lam), "mu": str(sol.mu), "kind": sol.kind,
            "residual_zero": sol.residual_zero}


def _residual_outcome(man: Manifest, name: str, residual: TensorField) -> tuple[CheckOutcome, bool]:
    found = residual.first_nonzero()
    if found is None:
        return CheckOutcome(name, PASS, {"residual": "0"}), True
    return CheckOutcome(name, FAIL, {
        "witness_component": _component_name(man, found[0]),
        "witness_value": str(found[1]),
    }), False


def _solve_outcomes(man: Manifest, prob: SolitonProblem, name: str, *,
                    gradient_mode: bool, almost: bool):
    """Run a solve, returning (outcomes, solution-or-None)."""
    solver = solve_almost if almost else solve_constants
    try:
        result = solver(prob, gradient_mode=gradient_mode)
    except NotASoliton as exc:
        payload = {"equation": f"{exc.equation} = 0"}
        if exc.component is not None:
            payload["witness_component"] = _component_name(man, exc.component)
        return [CheckOutcome(name, FAIL, payload)], None
    except NonConstantSolution as exc:
        return [CheckOutcome(name, FAIL, {
            "lambda": str(exc.lam), "mu": str(exc.mu),
            "note": "solution is coordinate-dependent; rerun with --almost",
        })], None
    if isinstance(result, SolitonFamily):
        return [CheckOutcome(name, SOLVED, {
            "underdetermined": True,
            "free": [u.name for u in result.free],
            "pivots": {u.name: str(e) for u, e in sorted(result.assignment.items(),
                                                         key=lambda kv: kv[0].name)},
        })], None
    return [CheckOutcome(name, SOLVED, _solution_payload(result))], result


def soliton_checks(man: Manifest, mode: str,
                   lam: Expr | None, mu: Expr | None) -> list[CheckOutcome]:
    if man.soliton is None:
        raise ManifestError("manifest has no [soliton] block")
    prob = man.soliton_problem(lam, mu)
    outcomes: list[CheckOutcome] = []
    sol: SolitonSolution | None = None

    if prob.v is not None and prob.f is not None:
        audit = gradient_consistency(prob)
        payload = {"V_equals_grad_f": audit.consistent,
                   "grad_f": [str(audit.computed[i,]) for i in range(man.chart.dim)]}
        if audit.witness is not None:
            payload["first_difference_component"] = _component_name(man, audit.witness[0])
            payload["note"] = ("supplied V is not the metric gradient of f; "
                               "potential-field and gradient readings differ")
        outcomes.append(CheckOutcome("soliton.gradient-consistency", SOLVED, payload))

    if mode == "gradient":
        if prob.f is None:
            raise ManifestError("--gradient requires f in the [soliton] block")
        if prob.v is not None:
            vec_outcomes, vec_sol = _solve_outcomes(
                man, prob, "soliton.potential-field-solve", gradient_mode=False, almost=False)
            outcomes.extend(vec_outcomes)
            sol = vec_sol
        grad_outcomes, grad_sol = _solve_outcomes(
            man, prob, "soliton.gradient-solve", gradient_mode=True, almost=True)
        outcomes.extend(grad_outcomes)
        outcomes.append(_ricci_form_outcome(man, grad_sol))
        if sol is None:
            sol = grad_sol
    elif prob.lam is not None and prob.mu is not None:
        residual = (gradient_residual(prob, prob.lam, prob.mu)
                    if prob.v is None else conformal_residual(prob, prob.lam, prob.mu))
        outcome, zero = _residual_outcome(man, "soliton.residual", residual)
        outcomes.append(outcome)
        if zero:
            coords = man.chart.coords
            kind = "constants" if not (prob.lam.depends_on(coords)
                                       or prob.mu.depends_on(coords)) else "functions"
            sol = SolitonSolution(prob.lam, prob.mu, kind, True)
    else:
        name = "soliton.solve" if mode == "solve" else "soliton.almost-solve"
        solve_outcomes, sol = _solve_outcomes(
            man, prob, name, gradient_mode=prob.v is None, almost=(mode == "almost"))
        outcomes.extend(solve_outcomes)

    if sol is None or not sol.residual_zero:
        outcomes.append(_skip("soliton.classification", "no residual-zero solution"))
        return outcomes
    if sol.kind != "constants":
        outcomes.append(_skip("soliton.classification",
                              "classification needs constant soliton coefficients"))
        return outcomes

    outcomes.extend(classification_outcomes(man, prob, sol))
    return outcomes


def _ricci_form_outcome(man: Manifest, grad_sol: SolitonSolution | None) -> CheckOutcome:
    s = man.structure
    sasakian = _para_sasakian_quietly(s)
    try:
        result = ricci_form_checks(s, grad_sol if grad_sol is not None
                                   and grad_sol.residual_zero else None)
    except SolitonError as exc:
        return CheckOutcome("soliton.ricci-operator-form", NOT_APPLICABLE, {"note": str(exc)})
    payload = {
        "mu": str(result.mu),
        "eta_einstein": {"a": str(result.coefficients[0]), "b": str(result.coefficients[1])},
        "operator_form_ok": result.form_ok,
        "trace_ok": result.trace_ok,
        "r": str(result.r_actual),
        "einstein": result.einstein,
    }
    if result.einstein_ok is not None:
        payload["einstein_ok"] = result.einstein_ok
    if not sasakian:
        payload["note"] = "structure is not para-Sasakian; theorem hypotheses not met"
        return CheckOutcome("soliton.ricci-operator-form", OUTSIDE_HYPOTHESIS, payload)
    status = PASS if result.form_ok and result.trace_ok else FAIL
    return CheckOutcome("soliton.ricci-operator-form", status, payload)


def _para_sasakian_quietly(s: ParacontactStructure) -> bool:
    try:
        return check_para_sasakian(s).passed
    except GeometryError:
        return False


def classification_outcomes(man: Manifest, prob: SolitonProblem,
                            sol: SolitonSolution) -> list[CheckOutcome]:
    rep = build_classification(prob, sol)
    outcomes = []

    if rep.eta_einstein is not None:
        a, b = rep.eta_einstein
        outcomes.append(CheckOutcome("soliton.eta-einstein", SOLVED, {
            "a": str(a), "b": str(b),
            "einstein": rep.einstein,
            "trace_identity_ok": rep.trace_identity_ok,
        }))
    else:
        outcomes.append(CheckOutcome("soliton.eta-einstein", SOLVED, {
            "eta_einstein": False, "note": "; ".join(rep.notes)}))

    branch = rep.branch
    if branch.branch is SolitonBranch.NOT_APPLICABLE:
        outcomes.append(_skip("soliton.branch-classification", branch.note))
    else:
        payload = {
            "branch": branch.branch.value,
            "killing_branch_residual": str(branch.killing_branch_residual),
            "phi_branch_residual": str(branch.phi_branch_residual),
        }
        if branch.killing is not None:
            payload["killing_verified"] = branch.killing.passed
        if branch.phi_invariant is not None:
            payload["phi_invariance_verified"] = branch.phi_invariant.passed
        if branch.ricci_shape_ok is not None:
            payload["ricci_shape_verified"] = branch.ricci_shape_ok
        if branch.note:
            payload["note"] = branch.note
        outcomes.append(CheckOutcome("soliton.branch-classification",
                                     PASS if branch.consistent else FAIL, payload))

    if rep.reeb_transport is not None:
        reeb = rep.reeb_transport
        outcomes.append(CheckOutcome(
            "soliton.reeb-transport-identity",
            PASS if reeb.passed else FAIL,
            {"eta_of_lie_V_xi": str(reeb.via_bracket),
             "minus_lie_V_eta_of_xi": str(reeb.via_form),
             "expected": str(reeb.expected)}))
    elif not rep.para_sasakian:
        outcomes.append(_skip("soliton.reeb-transport-identity",
                              "structure is not para-Sasakian"))

    killing_payload = {"killing": rep.killing.passed}
    if rep.killing.witness is not None:
        killing_payload["witness_component"] = _component_name(man, rep.killing.witness[0])
        killing_payload["witness_value"] = str(rep.killing.witness[1])
    outcomes.append(CheckOutcome("soliton.killing-field", SOLVED, killing_payload))

    phi_payload = {"phi_invariant": rep.phi_invariant.passed}
    if rep.phi_invariant.witness is not None:
        phi_payload["witness_component"] = _component_name(man, rep.phi_invariant.witness[0])
        phi_payload["witness_value"] = str(rep.phi_invariant.witness[1])
    outcomes.append(CheckOutcome("soliton.phi-invariance", SOLVED, phi_payload))

    if rep.contact is not None:
        payload = {"a": str(rep.contact.a), "strict": rep.contact.strict}
        if rep.contact_relation_ok is not None:
            payload["constant_relation_ok"] = rep.contact_relation_ok
        status = SOLVED
        if rep.para_sasakian and not rep.contact_within_hypothesis:
            status = OUTSIDE_HYPOTHESIS
            payload["note"] = "eta-Einstein conclusion assumes n > 1; this chart has n = 1"
        outcomes.append(CheckOutcome("soliton.contact-transformation", status, payload))
    else:
        comp, residual = rep.contact_witness
        outcomes.append(CheckOutcome("soliton.contact-transformation", SOLVED, {
            "contact_transformation": False,
            "witness_component": _component_name(man, (comp,)),
            "witness_value": str(residual)}))

    if rep.collinearity is not None:
        col = rep.collinearity
        payload = {"collinear": True, "factor": str(col.factor),
                   "factor_constant": col.constant}
        if col.r_formula_ok is not None:
            payload["r_traced_formula_ok"] = col.r_formula_ok
            payload["r_traced_formula_halved_ok"] = col.r_formula_halved_ok
            payload["r_expected"] = str(col.r_expected)
            payload["r_actual"] = str(col.r_actual)
        outcomes.append(CheckOutcome("soliton.collinearity", SOLVED, payload))
    else:
        comp, residual = rep.collinearity_witness
        outcomes.append(CheckOutcome("soliton.collinearity", SOLVED, {
            "collinear": False,
            "witness_component": _component_name(man, (comp,)),
            "witness_value": str(residual)}))

    if rep.ricci_form is not None:
        form = rep.ricci_form
        outcomes.append(CheckOutcome("soliton.ricci-form-consistency", SOLVED, {
            "mu": str(form.mu),
            "operator_form_ok": form.form_ok,
            "trace_ok": form.trace_ok,
            "einstein": form.einstein,
        }))
    return outcomes


# ---------------------------------------------------------------------------
# Command dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parasol",
        description="Exact verification of paracontact structures and "
                    "conformal eta-Ricci solitons.")
    parser.add_argument("--version", action="version", version=f"parasol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the structure axiom suite")
    p_check.add_argument("file")

    p_curv = sub.add_parser("curvature", help="report connection and curvature")
    p_curv.add_argument("file")
    p_curv.add_argument("--frame", default=None, metavar="NAME")

    p_sol = sub.add_parser("soliton", help="solve/verify the soliton equation")
    p_sol.add_argument("file")
    mode = p_sol.add_mutually_exclusive_group()
    mode.add_argument("--solve", action="store_true",
                      help="solve for constant lambda, mu (default)")
    mode.add_argument("--almost", action="store_true",
                      help="allow function-valued lambda, mu")
    mode.add_argument("--gradient", action="store_true",
                      help="use the gradient residual built from f")
    p_sol.add_argument("--lambda", dest="lam", default=None, metavar="EXPR")
    p_sol.add_argument("--mu", dest="mu", default=None, metavar="EXPR")

    p_rep = sub.add_parser("report", help="run every applicable pipeline")
    p_rep.add_argument("file")
    p_rep.add_argument("--json", action="store_true")

    return parser


def _parse_override(man: Manifest, text: str | None, flag: str) -> Expr | None:
    if text is None:
        return None
    try:
        return parse_expr(text, man.table)
    except ExprSyntaxError as exc:
        raise ManifestError(f"{flag}: {exc}") from exc


def _report(man: Manifest, checks: list[CheckOutcome]) -> VerdictReport:
    return VerdictReport(tool_version=__version__, fixture=man.name, checks=checks)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        man = load_manifest(args.file)
        if args.command == "check":
            report = _report(man, structure_checks(man))
            sys.stdout.write(report.to_text())
            return report.exit_code
        if args.command == "curvature":
            report = _report(man, curvature_checks(man, args.frame))
            sys.stdout.write(report.to_text())
            return report.exit_code
        if args.command == "soliton":
            mode = "gradient" if args.gradient else "almost" if args.almost else "solve"
            lam = _parse_override(man, args.lam, "--lambda")
            mu = _parse_override(man, args.mu, "--mu")
            report = _report(man, soliton_checks(man, mode, lam, mu))
            sys.stdout.write(report.to_text())
            return report.exit_code
        assert args.command == "report"
        checks: list[CheckOutcome] = []
        if man.structure is not None:
            checks.extend(structure_checks(man))
        frame_name = min(man.frames) if man.frames else None
        checks.extend(curvature_checks(man, frame_name))
        if man.soliton is not None and man.structure is not None:
            checks.extend(soliton_checks(man, "solve", None, None))
        report = _report(man, checks)
        sys.stdout.write(report.to_json() if args.json else report.to_text())
        return report.exit_code
    except (ManifestError, ExprError, GeometryError, SolitonError) as exc:
        sys.stderr.write(f"parasol: error: {exc}\n")
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
