"""Exact-arithmetic majorisation orbits on finite measure spaces.

The commutative core works entirely over rationals: measure spaces with
atoms and a diffuse part, simple functions, decreasing rearrangements,
the majorisation order, an extreme-point criterion with constructive
witnesses, and an independent polytope oracle. A numpy-based module
instantiates the same circle of ideas for Hermitian matrices under the
normalized trace.
"""

from .errors import MajorbitError
from .measure import (
    MeasureSpace,
    Refinement,
    SimpleFunction,
    add_functions,
    equal_ae,
    parse_function,
    parse_space,
    refine_diffuse,
    scale_function,
    serialize_function,
    serialize_space,
)
from .scales import (
    IncreasingScale,
    MajorisationReport,
    StepScale,
    add_scales,
    co_scale,
    cumulative,
    distribution,
    majorise_check,
    rearrange,
    singular_scale,
    submajorise_check,
)
from .extremality import (
    ConstancyInterval,
    ExtremalityVerdict,
    LevelKind,
    check_extreme,
    classify_level,
    constancy_intervals,
)
from .witness import (
    Perturbation,
    WitnessPair,
    admissible_delta,
    build_witness,
    verify_witness,
)
from .orbit import (
    OrbitPolytope,
    TightSet,
    enumerate_extreme,
    oracle_extreme,
    partial_average,
    sample_orbit,
)
from .hermitian import (
    BirkhoffDecomposition,
    DoublyStochastic,
    HermitianOperator,
    birkhoff_decompose,
    check_extreme_diag,
    diag_expectation,
    eig_scale,
    identity_suite,
    matrix_majorise,
    schur_horn_check,
    t_transform_chain,
)
from .prng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "MajorbitError",
    "MeasureSpace",
    "Refinement",
    "SimpleFunction",
    "add_functions",
    "equal_ae",
    "parse_function",
    "parse_space",
    "refine_diffuse",
    "scale_function",
    "serialize_function",
    "serialize_space",
    "IncreasingScale",
    "MajorisationReport",
    "StepScale",
    "add_scales",
    "co_scale",
    "cumulative",
    "distribution",
    "majorise_check",
    "rearrange",
    "singular_scale",
    "submajorise_check",
    "ConstancyInterval",
    "ExtremalityVerdict",
    "LevelKind",
    "check_extreme",
    "classify_level",
    "constancy_intervals",
    "Perturbation",
    "WitnessPair",
    "admissible_delta",
    "build_witness",
    "verify_witness",
    "OrbitPolytope",
    "TightSet",
    "enumerate_extreme",
    "oracle_extreme",
    "partial_average",
    "sample_orbit",
    "BirkhoffDecomposition",
    "DoublyStochastic",
    "HermitianOperator",
    "birkhoff_decompose",
    "check_extreme_diag",
    "diag_expectation",
    "eig_scale",
    "identity_suite",
    "matrix_majorise",
    "schur_horn_check",
    "t_transform_chain",
    "SplitMix64",
]
