"""Walkthrough: verify the ps3 fixture end to end with the library API.

Run from the repository root:

    python demos/ps3_walkthrough.py

Everything below is exact rational-function arithmetic; there is no floating
point and no tolerance anywhere.
"""

from pathlib import Path

from parasol import (
    build_classification,
    check_almost_paracontact,
    check_compatibility,
    check_para_sasakian,
    check_paracontact_metric,
    frame_component,
    load_manifest,
    nijenhuis,
    para_sasakian_identity_suite,
    ricci,
    scalar_curvature,
    signature_at,
    solve_constants,
)

ROOT = Path(__file__).resolve().parent.parent


def show(title):
    print(f"\n== {title} ==")


man = load_manifest(ROOT / "fixtures" / "ps3.toml")
s = man.structure
g = man.metric

show("structure axioms")
for verdict in check_almost_paracontact(s):
    print(f"  {verdict.name:34s} {'ok' if verdict.passed else 'FAIL'}")
print(f"  {'metric-compatibility':34s} {'ok' if check_compatibility(s).passed else 'FAIL'}")
print(f"  {'fundamental-form-is-d-eta':34s} {'ok' if check_paracontact_metric(s).passed else 'FAIL'}")
print(f"  {'normality':34s} {'ok' if nijenhuis(s)[1].passed else 'FAIL'}")
print(f"  {'para-sasakian':34s} {'ok' if check_para_sasakian(s).passed else 'FAIL'}")

show("derived identities")
for verdict in para_sasakian_identity_suite(s):
    print(f"  {verdict.name:34s} {'ok' if verdict.passed else 'FAIL'}")

show("curvature in the pseudo-orthonormal frame")
e1, e2, e3 = man.frames["e"]
ric = ricci(g)
print(f"  S(e1,e1) = {frame_component(ric, [e1, e1])}")
print(f"  S(e2,e2) = {frame_component(ric, [e2, e2])}")
print(f"  S(e3,e3) = {frame_component(ric, [e3, e3])}")
print(f"  scalar curvature r = {scalar_curvature(g)}")
origin = {c: 0 for c in man.chart.coords}
origin.update({p: 1 for p in man.chart.params})
print(f"  signature at the origin: {signature_at(g, origin)}")

show("soliton constants")
problem = man.soliton_problem()
solution = solve_constants(problem)
print(f"  lambda = {solution.lam}")
print(f"  mu     = {solution.mu}")

show("classification")
report = build_classification(problem, solution)
a, b = report.eta_einstein
print(f"  eta-Einstein coefficients: S = {a} g + ({b}) eta(x)eta")
print(f"  branch: {report.branch.branch.value}")
print(f"  potential field Killing: {report.killing.passed}")
print(f"  leaves phi invariant:    {report.phi_invariant.passed}")
print(f"  L_V eta = a eta with a = {report.contact.a}"
      f" (constant relation holds: {report.contact_relation_ok})")
print(f"  Reeb transport value:    {report.reeb_transport.via_bracket}")
