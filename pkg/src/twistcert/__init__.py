"""Exact certificates for Dehn-twist words: homology actions, filling checks,
stretch factors, cyclic-cover constructions, and normal-generation verdicts."""

__version__ = "0.1.0"

from .cover import (
    CoverCertificate,
    CoverComplex,
    CoverSpec,
    DegreeTooSmall,
    InvalidDegree,
    LiftedCurve,
    LiftError,
    SpreadingBound,
    WitnessFailure,
    build_certificate,
    build_cover,
    homology_basis,
    lift_curve,
    lifted_multitwist_matrix,
    non_torelli_witness,
    spreading_bound,
)
from .jsonio import TOOL_VERSION, dumps_canonical, normalize_real, write_artifact
from .ledger import (
    DuplicateCurve,
    InconsistentLedger,
    IntersectionLedger,
    LedgerCurve,
    UnknownIntersection,
    base_construction,
    derive_reference_table,
)
from .penner import (
    InvalidPennerWord,
    IterationLimit,
    NotFilling,
    NotHyperbolic,
    NotPrimitive,
    PennerConfig,
    StretchCertificate,
    certify_stretch,
    stretch_factor,
    thurston_oracle,
    transition_matrix,
    validate_penner_word,
)
from .ribbon import (
    FillingReport,
    MalformedRibbon,
    RibbonConfig,
    parse_ribbon,
    random_ribbon,
    verify_filling,
)
from .surfacehomology import CellComplex, HomologyRankError, SurfaceHomology
from .symplectic import (
    H1Vector,
    InvalidDimension,
    InvalidModulus,
    SymplecticSpace,
    TwistWord,
    UnknownCurve,
    intersection_pairing,
    is_level_trivial,
    is_symplectic,
    is_torelli,
    symplectic_inverse,
    transvection_matrix,
    word_action,
)
from .verdict import (
    FiniteOrder,
    InconsistentProfile,
    MappingClassProfile,
    PartlyPA,
    Verdict,
    apply_rules,
    profile_for_cover,
)

__all__ = [
    "__version__",
    "TOOL_VERSION",
    "CellComplex",
    "CoverCertificate",
    "CoverComplex",
    "CoverSpec",
    "DegreeTooSmall",
    "DuplicateCurve",
    "FillingReport",
    "FiniteOrder",
    "H1Vector",
    "HomologyRankError",
    "InconsistentLedger",
    "InconsistentProfile",
    "IntersectionLedger",
    "InvalidDegree",
    "InvalidDimension",
    "InvalidModulus",
    "InvalidPennerWord",
    "IterationLimit",
    "LedgerCurve",
    "LiftError",
    "LiftedCurve",
    "MalformedRibbon",
    "MappingClassProfile",
    "NotFilling",
    "NotHyperbolic",
    "NotPrimitive",
    "PartlyPA",
    "PennerConfig",
    "RibbonConfig",
    "SpreadingBound",
    "StretchCertificate",
    "SurfaceHomology",
    "SymplecticSpace",
    "TwistWord",
    "UnknownCurve",
    "UnknownIntersection",
    "Verdict",
    "WitnessFailure",
    "apply_rules",
    "base_construction",
    "build_certificate",
    "build_cover",
    "certify_stretch",
    "derive_reference_table",
    "dumps_canonical",
    "homology_basis",
    "intersection_pairing",
    "is_level_trivial",
    "is_symplectic",
    "is_torelli",
    "lift_curve",
    "lifted_multitwist_matrix",
    "non_torelli_witness",
    "normalize_real",
    "parse_ribbon",
    "profile_for_cover",
    "random_ribbon",
    "spreading_bound",
    "stretch_factor",
    "symplectic_inverse",
    "thurston_oracle",
    "transition_matrix",
    "transvection_matrix",
    "validate_penner_word",
    "verify_filling",
    "word_action",
    "write_artifact",
]
