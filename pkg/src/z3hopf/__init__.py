"""Exact symbolic computation and verification for a Z3-graded quantum
supergroup: canonical forms in finitely presented graded algebras, the
Hopf structure maps, and machine-checked identity suites."""

from .coeff import Cyclo, QPoly, Scalar, eval_at, j_pow, scalar_arith
from .algebra import (
    Element,
    Generator,
    TensorElement,
    element_grade_components,
    grade_of,
    tensor_mul,
)
from .rewrite import (
    Presentation,
    RewriteRule,
    check_homogeneity,
    check_local_confluence,
    check_strategy_independence_exhaustive,
    derive_inverse_rules,
    normalize,
    reduce_against,
    substitute,
)
from .presets import (
    PRESET_NAMES,
    build_preset,
    check_product_closure,
    covariance_suite,
    cross_commutation_factor,
    defining_relations,
    derive_covariance_relations,
    free_entry_algebra,
)
from .supermatrix import (
    Matrix2,
    check_delta_relations,
    check_inverse_identity,
    check_inverse_membership,
    check_mixed_relations,
    check_sdet_commutation,
    check_supertranspose,
    delta_forms,
    generic_matrix,
    identity_matrix,
    inverse_entries,
    sdet,
    sdet_of_inverse,
    supertranspose,
)
from .hopf import (
    apply_antipode,
    apply_coproduct,
    apply_counit,
    check_antipode,
    check_coassociativity,
    check_coproduct_multiplicative,
    check_counit,
    check_morphism_preserves_relations,
)
from .hdeform import (
    HContext,
    build_h_context,
    contract_q_to_1,
    derive_theta_h_rule,
    h_deformation_suite,
    infer_h_grade,
    two_route_consistency,
    verify_h_relation,
    verify_theta_cubed,
)
from .parsing import (
    parse_expression,
    parse_scalar,
    presentation_from_json,
    presentation_to_json,
)
from .report import CheckReport, IdentityResult, REPORT_SCHEMA

__version__ = "1.0.0"
