"""Ship risk classification by the deck of cards method.

Value functions are elicited per criterion from blank-card judgments,
criterion weights from a ranking of swing profiles plus closeness cards and
one indifference statement, ships are scored by a weighted additive model,
and categories follow rules and a cutoff.  All arithmetic is exact; numbers
round only for display.
"""

from .errors import (
    EvaluationError,
    IncompleteSessionError,
    JudgmentError,
    MissingReferenceError,
    ParseError,
    SchemaError,
    ShipRiskError,
)
from .exact import as_fraction, display, format_ratio, round_half_up
from .riskmodel import (
    ClassificationPolicy,
    ClassificationResult,
    CriteriaFramework,
    Criterion,
    PerformanceRecord,
    RawShipRecord,
    ReferenceLists,
    aggregate,
    classify,
    classify_batch,
    default_framework,
    map_raw_to_performance,
)
from .robustness import ScenarioGrid, SweepResult, compare_to_baseline, default_grid, sweep
from .scale import (
    ComparisonTable,
    ConsistencyReport,
    ConsistencyViolation,
    ReferenceAssignment,
    ValueFunction,
    build_value_function,
    compute_alpha,
    evaluate,
    fill_transitive,
    new_comparison_table,
    validate_consistency,
)
from .session import (
    DerivedArtifacts,
    SessionDocument,
    ValidationReport,
    ZSource,
    derive,
    new_blank_document,
    validate_session,
)
from .weights import (
    ClosenessJudgments,
    SwingAction,
    WeightVector,
    build_swings,
    compute_weights,
    elicit_z_from_indifference,
    validate_closeness,
)

__version__ = "1.0.0"

__all__ = [
    "ShipRiskError",
    "JudgmentError",
    "EvaluationError",
    "MissingReferenceError",
    "ParseError",
    "SchemaError",
    "IncompleteSessionError",
    "as_fraction",
    "display",
    "format_ratio",
    "round_half_up",
    "ComparisonTable",
    "ConsistencyReport",
    "ConsistencyViolation",
    "ReferenceAssignment",
    "ValueFunction",
    "new_comparison_table",
    "fill_transitive",
    "validate_consistency",
    "compute_alpha",
    "build_value_function",
    "evaluate",
    "SwingAction",
    "ClosenessJudgments",
    "WeightVector",
    "build_swings",
    "elicit_z_from_indifference",
    "validate_closeness",
    "compute_weights",
    "Criterion",
    "CriteriaFramework",
    "RawShipRecord",
    "ReferenceLists",
    "PerformanceRecord",
    "ClassificationPolicy",
    "ClassificationResult",
    "default_framework",
    "map_raw_to_performance",
    "aggregate",
    "classify",
    "classify_batch",
    "ScenarioGrid",
    "SweepResult",
    "default_grid",
    "sweep",
    "compare_to_baseline",
    "SessionDocument",
    "ZSource",
    "DerivedArtifacts",
    "ValidationReport",
    "new_blank_document",
    "derive",
    "validate_session",
    "__version__",
]
