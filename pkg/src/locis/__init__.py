"""Finite windows of uniformly locally finite relational structures.

The package builds windows of infinite structures (colored lines, trees,
hyperbolic tilings, Cayley graphs, grids), decides bounded-radius pointed
isomorphism and extraction, checks the group-like algebraic properties, and
runs the constructive procedures: symmetry detection, period construction,
partial-isomorphism extension, and the rigid-limit trace. Every verdict is
certified at explicit radius bounds; nothing claims the unbounded statement.
"""

from .core import (
    Language,
    PointedBall,
    Structure,
    faithful_radius,
    validate_structure,
)
from .errors import (
    ArityMismatch,
    BadAddressEntry,
    CharacterizationFails,
    DanglingElement,
    GluingConflict,
    GroupClosureExceedsBound,
    HypothesisUnverified,
    InvariantViolation,
    LanguageMismatch,
    LocisError,
    NoFaithfulElements,
    NonClosedWindow,
    NoOrbitRepresentative,
    NotAutomorphism,
    NotEquational,
    NotFunctional,
    ParseError,
    RankBoundExceeded,
    RationalSlope,
    UnfaithfulRadius,
    UnknownSymbol,
    VerificationFailed,
    WindowExhausted,
)
from .textio import dumps, loads, save, load
from .iso import (
    BallSignature,
    CensusEntry,
    CensusTable,
    CompareReport,
    LipReport,
    PartialIso,
    census,
    class_ids,
    extraction_compare,
    lip_check,
    pointed_iso,
    signature,
    windowed_pointed_iso,
)
from .algebra import (
    CommutativityReport,
    EquationalReport,
    QuotientResult,
    RegularityReport,
    Step,
    Word,
    apply_step,
    apply_word,
    equational_check,
    quotient,
    step_vocabulary,
    strong_commutativity_check,
    strong_regularity_check,
)
from .symmetry import (
    PeriodReport,
    SymmetryReport,
    detect_periodicity,
    extend_partial_iso,
    extend_to_automorphism,
    find_symmetries,
    periodic_isomorphism,
)
from .rigidity import (
    QReport,
    RigidityReport,
    RigidLimitTrace,
    TraceStep,
    property_Q_check,
    rigid_limit,
    rigidity_characterization,
)
from .generators import (
    AddressSequence,
    QuadraticIrrational,
    checkerboard_colormap,
    gen_binary_hyperbolic,
    gen_cayley_free,
    gen_grid,
    gen_kary_tree,
    gen_sturmian,
    sturmian_colors,
)

__version__ = "0.1.0"

__all__ = [
    "Language",
    "Structure",
    "PointedBall",
    "validate_structure",
    "faithful_radius",
    "dumps",
    "loads",
    "save",
    "load",
    "BallSignature",
    "CensusEntry",
    "CensusTable",
    "CompareReport",
    "LipReport",
    "PartialIso",
    "census",
    "class_ids",
    "extraction_compare",
    "lip_check",
    "pointed_iso",
    "signature",
    "windowed_pointed_iso",
    "Step",
    "Word",
    "apply_step",
    "apply_word",
    "step_vocabulary",
    "equational_check",
    "strong_commutativity_check",
    "strong_regularity_check",
    "quotient",
    "EquationalReport",
    "CommutativityReport",
    "RegularityReport",
    "QuotientResult",
    "SymmetryReport",
    "PeriodReport",
    "find_symmetries",
    "detect_periodicity",
    "extend_to_automorphism",
    "extend_partial_iso",
    "periodic_isomorphism",
    "QReport",
    "RigidityReport",
    "RigidLimitTrace",
    "TraceStep",
    "property_Q_check",
    "rigidity_characterization",
    "rigid_limit",
    "QuadraticIrrational",
    "AddressSequence",
    "gen_sturmian",
    "gen_kary_tree",
    "gen_binary_hyperbolic",
    "gen_cayley_free",
    "gen_grid",
    "checkerboard_colormap",
    "sturmian_colors",
    "LocisError",
    "UnknownSymbol",
    "ArityMismatch",
    "DanglingElement",
    "UnfaithfulRadius",
    "LanguageMismatch",
    "NoFaithfulElements",
    "WindowExhausted",
    "NotFunctional",
    "NotEquational",
    "NotAutomorphism",
    "NonClosedWindow",
    "GroupClosureExceedsBound",
    "GluingConflict",
    "NoOrbitRepresentative",
    "VerificationFailed",
    "RankBoundExceeded",
    "CharacterizationFails",
    "RationalSlope",
    "BadAddressEntry",
    "ParseError",
    "InvariantViolation",
    "HypothesisUnverified",
]
