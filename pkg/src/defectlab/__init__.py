"""Exact computation with defect extensions of valued fields.

The package builds degree-p immediate extensions over truncated series
models, measures how well their generators can be approximated from the base
field, and classifies the resulting ramification data: the jump segment, the
ramification ideal and its idempotence, the equivalent independence
characterizations, the presentation of the differential module, and the
trace ideal.  Everything runs on exact rational arithmetic; independently
computed characterizations are cross-checked against each other and any
disagreement raises instead of being reported.
"""

from .artin_schreier import (
    ApproximationStep,
    ArtinSchreierExtension,
    ChainLink,
    CutDetection,
    DefectReport,
    ExtensionClassification,
    MinimalPolynomial,
    RamificationSampleReport,
    RootApproximation,
    approximate_root,
    classify_cut,
    classify_extension,
    detect_boundary,
    distance_and_jump,
    generator_chain,
    generator_minimal_polynomial,
    sample_ramification_values,
)
from .conditions import (
    CONDITION_NAMES,
    ConditionReport,
    ConditionTable,
    evaluate_conditions,
)
from .differentials import (
    ChainPresentationReport,
    ChainStage,
    DifferentialPresentation,
    differential_presentation,
    verify_chain_presentation,
)
from .elements import ExtensionElement, taylor_valuation
from .errors import (
    CoherenceError,
    DefectlabError,
    EmptySegmentError,
    GroupMismatchError,
    InconclusiveCutError,
    IndeterminateValuationError,
    InsufficientDataError,
    InvalidCharacteristicError,
    InvalidDistanceError,
    InvalidSegmentError,
    MalformedElementError,
    NotImmediateError,
    NotProperSubgroupError,
    PrecisionError,
    RootInBaseFieldError,
    SpecFileError,
    UndefinedComponentError,
    UnrepresentableCutError,
)
from .groups import (
    ArchimedeanComponent,
    ConvexSubgroup,
    GroupElement,
    OrderedGroup,
    Slot,
    archimedean_component,
    compare,
    deeply_ramified_value_group,
    group_from_json,
    is_prime,
    is_strongly_convex,
    parse_group,
    parse_rational,
    strongly_convex_subgroups,
)
from .kummer import (
    CyclotomicValue,
    KummerData,
    KummerReport,
    cyclotomic_unit_value,
    from_pth_power_distance,
    independence_conditions,
    normalizer_value,
    ramification_jump,
)
from .segments import (
    FinalSegment,
    Ideal,
    InitialSegment,
    ScaleInvariance,
    above_subgroup,
    below_subgroup,
    downward_closure,
    element_in,
    element_in_difference,
    empty_final,
    empty_initial,
    final_above,
    ideal_generated_by,
    ideal_power,
    initial_below,
    is_idempotent,
    positive_cone,
    prime_subgroup,
    scale_invariant_shape,
    upward_closure,
)
from .series import (
    AtLeast,
    BaseField,
    HahnSeries,
    Value,
    artin_schreier_map,
    series_from_literal,
)
from .trace import (
    TraceSampleReport,
    element_valuation,
    trace_element,
    trace_ideal,
    verify_trace_ideal,
)

__version__ = "0.1.0"

__all__ = [
    "ApproximationStep",
    "ArchimedeanComponent",
    "ArtinSchreierExtension",
    "AtLeast",
    "BaseField",
    "CONDITION_NAMES",
    "ChainLink",
    "ChainPresentationReport",
    "ChainStage",
    "CoherenceError",
    "ConditionReport",
    "ConditionTable",
    "ConvexSubgroup",
    "CutDetection",
    "CyclotomicValue",
    "DefectReport",
    "DefectlabError",
    "DifferentialPresentation",
    "EmptySegmentError",
    "ExtensionClassification",
    "ExtensionElement",
    "FinalSegment",
    "GroupElement",
    "GroupMismatchError",
    "HahnSeries",
    "Ideal",
    "InconclusiveCutError",
    "IndeterminateValuationError",
    "InitialSegment",
    "InsufficientDataError",
    "InvalidCharacteristicError",
    "InvalidDistanceError",
    "InvalidSegmentError",
    "KummerData",
    "KummerReport",
    "MalformedElementError",
    "MinimalPolynomial",
    "NotImmediateError",
    "NotProperSubgroupError",
    "OrderedGroup",
    "PrecisionError",
    "RamificationSampleReport",
    "RootApproximation",
    "RootInBaseFieldError",
    "ScaleInvariance",
    "Slot",
    "SpecFileError",
    "TraceSampleReport",
    "UndefinedComponentError",
    "UnrepresentableCutError",
    "Value",
    "above_subgroup",
    "approximate_root",
    "archimedean_component",
    "artin_schreier_map",
    "below_subgroup",
    "classify_cut",
    "classify_extension",
    "compare",
    "cyclotomic_unit_value",
    "deeply_ramified_value_group",
    "detect_boundary",
    "differential_presentation",
    "distance_and_jump",
    "downward_closure",
    "element_in",
    "element_in_difference",
    "element_valuation",
    "empty_final",
    "empty_initial",
    "evaluate_conditions",
    "final_above",
    "from_pth_power_distance",
    "generator_chain",
    "generator_minimal_polynomial",
    "group_from_json",
    "ideal_generated_by",
    "ideal_power",
    "independence_conditions",
    "initial_below",
    "is_idempotent",
    "is_prime",
    "is_strongly_convex",
    "normalizer_value",
    "parse_group",
    "parse_rational",
    "positive_cone",
    "prime_subgroup",
    "ramification_jump",
    "sample_ramification_values",
    "scale_invariant_shape",
    "series_from_literal",
    "strongly_convex_subgroups",
    "taylor_valuation",
    "trace_element",
    "trace_ideal",
    "upward_closure",
    "verify_chain_presentation",
    "verify_trace_ideal",
]
