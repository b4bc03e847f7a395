"""Exact equivariant Schubert structure constants.

Builds root systems from (generalized) Cartan matrices, enumerates Weyl
group elements as integer matrices, computes fixed-point restriction
polynomials by the subword formula, solves for structure constants by
Bruhat-triangular elimination, and certifies the sign properties of the
results with exact integer arithmetic throughout.
"""

__version__ = "0.1.0"

from .errors import (
    ClosureOverflow,
    DomainViolation,
    EqschubError,
    InsufficientBound,
    InternalInconsistency,
    InvalidCartan,
    NotDivisible,
    NotFiniteType,
    NotGroupElement,
    RankMismatch,
    ResourceCap,
    SingularCartan,
)
from .localize import (
    CONVENTIONS,
    RestrictionTable,
    billey_restrict,
    convert_convention,
    restriction_table,
)
from .rootsys import (
    BUILTIN_TYPES,
    CartanMatrix,
    RootPolynomial,
    RootSystem,
    RootVector,
    alpha_sign,
    build_root_system,
    builtin_root_system,
    poly_add,
    poly_exact_divide_linear,
    poly_mul,
    poly_negate_variables,
)
from .structconst import (
    IdentityCheck,
    PositivityCertificate,
    StructureTable,
    billey_evaluate,
    opposite_constants,
    positivity_certificate,
    structure_constants,
    value_sign_ok,
    verify_product_identity,
)
from .weyl import (
    WeylElement,
    WeylRange,
    apply,
    bruhat_leq,
    canonicalize,
    element_from_word,
    enumerate_upto,
    identity,
    inverse,
    inversions,
    longest_element,
    multiply,
    simple_reflection,
)

__all__ = [
    "__version__",
    "BUILTIN_TYPES",
    "CONVENTIONS",
    "CartanMatrix",
    "ClosureOverflow",
    "DomainViolation",
    "EqschubError",
    "IdentityCheck",
    "InsufficientBound",
    "InternalInconsistency",
    "InvalidCartan",
    "NotDivisible",
    "NotFiniteType",
    "NotGroupElement",
    "PositivityCertificate",
    "RankMismatch",
    "ResourceCap",
    "RestrictionTable",
    "RootPolynomial",
    "RootSystem",
    "RootVector",
    "SingularCartan",
    "StructureTable",
    "WeylElement",
    "WeylRange",
    "alpha_sign",
    "apply",
    "billey_evaluate",
    "billey_restrict",
    "bruhat_leq",
    "build_root_system",
    "builtin_root_system",
    "canonicalize",
    "convert_convention",
    "element_from_word",
    "enumerate_upto",
    "identity",
    "inverse",
    "inversions",
    "longest_element",
    "multiply",
    "opposite_constants",
    "poly_add",
    "poly_exact_divide_linear",
    "poly_mul",
    "poly_negate_variables",
    "positivity_certificate",
    "restriction_table",
    "simple_reflection",
    "structure_constants",
    "value_sign_ok",
    "verify_product_identity",
]
