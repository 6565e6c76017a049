"""Finite-dimensional graded von Neumann algebras and their graded tensor products."""

from .algebra import (
    DEFAULT_SEED,
    ProjectionHandle,
    Summand,
    TypeReport,
    VNAlgebra,
    center,
    central_support,
    commutant,
    factor_decomposition,
    generate,
    is_abelian_projection,
    minimal_central_projections,
    minimal_projections,
    proj_equivalent,
    projection,
)
from .errors import (
    DegenerateSpectrumError,
    DocumentError,
    GradedVNAError,
    InputError,
    InternalLimitError,
    InvariantViolationError,
    NumericalInconsistencyError,
    PreconditionError,
)
from .graded import (
    GradedAlgebra,
    GradedSplit,
    balance_certificate,
    center_grading_split,
    even_algebra,
    find_odd_symmetry,
    graded_center,
    homogeneous_parts,
    implementing_symmetry,
    is_balanced,
    is_central,
    minimal_even_projections,
    odd_center_line,
    split,
    twist,
    v_conjugate,
)
from .linalg import (
    MatSubspace,
    Tolerances,
    get_tolerances,
    intersect,
    orthonormalize,
    set_tolerances,
    span,
    spectral_projections,
    subspace_equal,
    tolerances,
)
from .presets import (
    PresetSpec,
    build_preset,
    parse_algebra,
    parse_preset,
    serialize_algebra,
)
from .tensor import (
    GradedTensorProduct,
    HomogeneousTensor,
    abelian_grid,
    central_support_compare,
    commutant_formula,
    conditional_expectation,
    even_part_identity,
    factor_case_identity,
    graded_tensor,
    ordinary_tensor,
    pi_embed,
    swap_isomorphism,
    tensor_center_formula,
    verify_sign_rules,
)

__version__ = "0.1.0"
