"""Exact computation with isometries of quadratic spaces.

Fields GF(p), GF(2^k) and GF(2)(t); quadratic spaces and their subspace
lattice; isometries with their residual bilinear forms; decomposition of
unipotent isometries of index two into interchange blocks and reflections;
and, in characteristic two, Clifford algebras with the induced involution
and its invariants, all backed by a brute-force enumeration oracle.
"""

from .errors import WallformsError, PreconditionError, InvariantViolation
from .fields import (
    Field,
    FieldElement,
    Galois2Field,
    PrimeField,
    RationalFunctionField,
    parse_field,
)
from .linalg import Matrix
from .quadspace import (
    QuadraticSpace,
    Subspace,
    SymBilinearForm,
    complement_in,
    extend_to_hyperbolic_basis,
    hyperbolic_basis_alternating,
    orthogonal_basis,
)
from .isometry import (
    Isometry,
    ReflectionWord,
    SquareClass,
    eichler,
    identity_isometry,
    make_isometry,
    reflection,
    spinor_norm_word,
)
from .wallform import WallForm, assoc_quadratic, classify, wall_form
from .decompose import (
    Block,
    Decomposition,
    InterchangeBlock,
    ReflectionBlock,
    complement_W,
    decompose,
    interchange_block,
    interchange_normal_basis,
    is_interchanging_kind,
    reflection_block,
)
from .clifford import (
    AlgebraInvolution,
    CliffordAlgebra,
    CliffordElement,
    MatrixIso,
    PfisterDescriptor,
    PhiAlgebra,
    algebra_for_space,
    alternating_generators_check,
    explicit_matrix_iso,
    goldman_element,
    involution_type,
    natural_involution,
    pfister_invariant,
    phi_subalgebra,
    square_scalar_check,
    tensor_decomposition_witness,
    transpose_iso_criterion,
)
from .oracle import (
    GroupEnumeration,
    VerifyReport,
    enumerate_orthogonal_group,
    enumerate_unipotent2,
    exhaustive_verify,
)

__version__ = "0.1.0"
