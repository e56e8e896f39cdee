"""parasol: exact verification of almost paracontact metric structures and
conformal eta-Ricci solitons on coordinate charts.

The library is organised in five layers:

* :mod:`parasol.symexpr` -- canonical rational-function arithmetic over Q,
  parsing/printing, and exact linear solving;
* :mod:`parasol.geometry` -- chart tensor calculus: connection, curvature,
  Lie derivatives, exterior calculus, signatures;
* :mod:`parasol.paracontact` -- structure axioms, normality, the
  para-Sasakian condition and its derived identity suite;
* :mod:`parasol.soliton` -- soliton residuals, exact constant solvers and
  the classification battery;
* :mod:`parasol.manifest` / :mod:`parasol.cli` -- TOML fixtures, pipelines
  and deterministic reports.
"""

__version__ = "0.1.0"

from .symexpr import (  # noqa: F401
    Expr,
    LinearSystem,
    Symbol,
    SymbolTable,
    arith,
    differentiate,
    evaluate_at,
    format_expr,
    is_zero,
    parse_expr,
    solve_linear,
)
from .geometry import (  # noqa: F401
    Chart,
    Connection,
    KForm,
    Metric,
    TensorField,
    christoffel,
    covariant_derivative,
    exterior_derivative,
    frame_component,
    gradient,
    hessian,
    lie_bracket,
    lie_derivative,
    lie_derivative_of_connection,
    lie_derivative_of_curvature,
    ricci,
    ricci_operator,
    riemann,
    scalar_curvature,
    signature_at,
    wedge,
)
from .paracontact import (  # noqa: F401
    ParacontactStructure,
    StructureVerdict,
    check_almost_paracontact,
    check_compatibility,
    check_para_sasakian,
    check_paracontact_metric,
    compute_h,
    nijenhuis,
    para_sasakian_identity_suite,
)
from .soliton import (  # noqa: F401
    ClassificationReport,
    SolitonProblem,
    SolitonSolution,
    build_classification,
    classify_branches,
    collinearity_analysis,
    conformal_residual,
    contact_transformation,
    eta_einstein_extract,
    gradient_residual,
    killing_check,
    phi_invariance_check,
    reeb_transport_check,
    ricci_form_checks,
    solve_almost,
    solve_constants,
)
from .manifest import Manifest, load_manifest  # noqa: F401
