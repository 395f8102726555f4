"""Exact deformation theory of associative algebras over coalgebra extensions."""

from .errors import (
    CocycleViolation,
    ConvDefError,
    DegreeMismatch,
    EmptyLayer,
    FieldMismatch,
    NoFiltration,
    NotASubspace,
    NotAnExtension,
    NotCocommutative,
    NotCompletelyReducible,
    NotExhaustive,
    NotInvertible,
    NotRankOne,
    NotUnital,
    RetractNotNormalized,
    ShapeError,
    SpecFileError,
    SpecMismatch,
    UnsupportedCoaction,
    UnsupportedSearch,
)
from .fields import QQ, PrimeField, RationalField, field_by_name
from .linalg import (
    Matrix,
    Subspace,
    image,
    kernel_basis,
    kernel_space,
    preimage,
    quotient_dim,
    rref,
    solve,
)
from .coalgebra import (
    Coalgebra,
    CoalgebraReport,
    GroupLikeSet,
    coradical_filtration,
    direct_sum,
    divided_power_t,
    find_grouplikes,
    grouplike_coalgebra,
    is_coalgebra_filtration,
    polynomial_multi,
    trivial_k,
)
from .extension import (
    Cocycle2,
    Comodule,
    Extension,
    build_extension,
    decompose_completely_reducible,
    graded_extension,
    grouplike_comodule,
    split_extension,
    zero_cocycle,
)
from .convolution import (
    ConvMorphism,
    MultiMap,
    congruent_mod,
    conv_compose,
    conv_tensor,
    epsilon_embed,
    identity_conv,
    pullback,
    takeuchi_invert,
)
from .cohomology import (
    Cochain,
    CohomologyResult,
    ComplexSpec,
    ProductDecomposition,
    Rank1Reduction,
    cochain_act,
    hochschild_dims,
    hochschild_spec,
    is_associative,
    product_decompose,
    rank1_reduce,
)
from .deformation import (
    AlgebraMC,
    ClassifyResult,
    Deformation,
    DeformationReport,
    SeriesBranch,
    SeriesResult,
    SeriesStep,
    UnitGaugeResult,
    check_associative,
    classify,
    equiv_check,
    gauge_transport,
    is_unit_of,
    make_deformation,
    mc_solve,
    obstruction_zeta,
    series_deform,
    unit_gauge,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
