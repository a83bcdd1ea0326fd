"""Exact-arithmetic engine for almost contact B-metric structures.

Single-tangent-space tensor constructions: the fundamental tensor and
its basic classes, the four-parameter family of torsions of compatible
connections, the distinguished torsion and its relatives, the torsion
class taxonomy, and left-invariant models from Lie-algebra bracket
tables.  All arithmetic is exact rational.
"""

from .errors import (
    AcbmError,
    BadData,
    BadDimension,
    InsufficientSamples,
    InvalidStructure,
    ParseError,
    ShapeMismatch,
    Singular,
    UnknownClass,
    ValidationError,
)
from .family import (
    AnsatzParams,
    FamilyParams,
    ansatz_torsion,
    canonical_identity_residual,
    canonical_torsion_closed,
    canonical_torsion_from_F,
    dual_torsion,
    family_direction,
    hayden_Q,
    is_canonical_identity,
    naturality_check,
    phiB_delta,
    pi_family,
    solve_natural_constraints,
    standard_torsion,
    torsion_family,
)
from .fundamental import (
    CLASS_TAGS,
    ClassData,
    LeeForms,
    build_class_F,
    class_data_f1,
    class_data_f4,
    class_data_f5,
    class_data_f11,
    class_data_main,
    classify_F,
    is_in_class,
    lee_forms,
    validate_F,
)
from .liealg import (
    LieAlgebra,
    fundamental_from_nabla,
    jacobi_check,
    koszul_levi_civita,
    levi_civita_report,
    make_lie_algebra,
    survey_random_lie_algebras,
    verify_natural_connection,
)
from .scalar import ONE, ZERO, Scalar, format_rational, parse_rational, rat
from .structure import (
    AcbStructure,
    associated_metric,
    canonical_structure,
    change_basis,
    make_structure,
    require_valid,
    transport_covariant,
    validate_structure,
)
from .taxonomy import (
    CLASS_IDS,
    class_predicate,
    class_subspace_basis,
    classify_torsion,
    sum_membership,
    torsion_forms,
    torsion_space_basis,
)
from .tensor import contract, cyclic_sum, eq, is_zero, pullback, tensor, zeros
from .verify import SUITES, run_suites

__version__ = "0.1.0"
