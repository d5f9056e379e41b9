"""Numerical tensor calculus on 3D Riemannian manifolds with a circulant
metric and a cubic circulant structure q (q^3 = -id)."""

__version__ = "0.1.0"

from .errors import (
    CirculantError,
    ConstructionFailed,
    DegeneratePlane,
    DomainViolation,
    EvalDomainError,
    ExprSyntaxError,
    IdentityRNotSatisfied,
    NotAQBasis,
    PositivityViolation,
    SamplingExhausted,
    SpecFileError,
)
from .expressions import ScalarFieldExpr, eval_jet, eval_value, parse, to_source
from .jets import Jet2, constant, variable
from .metric import (
    MetricAtPoint,
    MetricFunctions,
    check_positive_definite,
    inner,
    metric_at,
)
from .qstructure import (
    AngleReport,
    Q_MATRIX,
    apply_q,
    construct_orthogonal_vector,
    construct_special_angle_vector,
    cos_angle_closed_form,
    induces_q_basis,
    isometry_residual,
    orthogonality_defect,
    q_basis_angles,
)
from .curvature import (
    ChristoffelTable,
    ClosedFormComponents,
    CurvatureTensor,
    check_equal_sectional_curvatures,
    check_q_invariance,
    check_sectional_combination_formula,
    check_sectional_difference_formula,
    christoffel,
    closed_form_components,
    is_flat,
    riemann,
    riemann_apply,
    sectional_curvature,
)
from .parallelism import (
    MIRROR_MATRIX,
    NablaQTensor,
    check_christoffel_equalities,
    metric_compatibility_residual,
    nabla_q,
    parallel_condition_residual,
)
from .sampling import sample_admissible_points
from .specfile import ManifoldSpec, builtin_example, load_spec, parse_spec_text

__all__ = [
    "AngleReport",
    "ChristoffelTable",
    "CirculantError",
    "ClosedFormComponents",
    "ConstructionFailed",
    "CurvatureTensor",
    "DegeneratePlane",
    "DomainViolation",
    "EvalDomainError",
    "ExprSyntaxError",
    "IdentityRNotSatisfied",
    "Jet2",
    "ManifoldSpec",
    "MetricAtPoint",
    "MetricFunctions",
    "MIRROR_MATRIX",
    "NablaQTensor",
    "NotAQBasis",
    "PositivityViolation",
    "Q_MATRIX",
    "SamplingExhausted",
    "ScalarFieldExpr",
    "SpecFileError",
    "apply_q",
    "builtin_example",
    "check_christoffel_equalities",
    "check_equal_sectional_curvatures",
    "check_positive_definite",
    "check_q_invariance",
    "check_sectional_combination_formula",
    "check_sectional_difference_formula",
    "christoffel",
    "closed_form_components",
    "constant",
    "construct_orthogonal_vector",
    "construct_special_angle_vector",
    "cos_angle_closed_form",
    "eval_jet",
    "eval_value",
    "induces_q_basis",
    "inner",
    "is_flat",
    "isometry_residual",
    "load_spec",
    "metric_at",
    "metric_compatibility_residual",
    "nabla_q",
    "orthogonality_defect",
    "parallel_condition_residual",
    "parse",
    "parse_spec_text",
    "q_basis_angles",
    "riemann",
    "riemann_apply",
    "sample_admissible_points",
    "sectional_curvature",
    "to_source",
    "variable",
]
