"""Confidence propagation for assurance arguments with Subjective Logic.

The package models an assurance argument as a typed graph, assigns
binomial opinions to its propositions, interprets every relation as a
Subjective Logic operator, and propagates belief/disbelief/uncertainty
bottom-up with full provenance.
"""

from .analysis import (
    BetaCurve,
    ComparisonTable,
    CurveSample,
    SweepRow,
    SweepSpec,
    compare_scenarios,
    export_beta_curve,
    export_triangle,
    sweep,
)
from .documents import (
    DEFAULT_QUALITATIVE_SCALE,
    Document,
    Scenario,
    Settings,
    load_document,
    parse_document,
    serialize_document,
)
from .engine import Assessment, NodeResult, ProvenanceStep, assess, explain
from .errors import (
    BaseRateDegenerate,
    BaseRateRange,
    BeliefcaseError,
    ContextReuse,
    DegenerateConditionals,
    DivergentEndpoint,
    DocumentError,
    DocumentSyntaxError,
    DogmaticOpinion,
    EngineError,
    InvalidAssignment,
    MissingPattern,
    OpinionError,
    SchemaError,
    SimplexViolation,
    UnknownNode,
    UnknownScenario,
    UnresolvedConditionals,
    ValidationFailed,
)
from .graph import (
    ArgEdge,
    ArgNode,
    ArgumentGraph,
    EdgeConditionals,
    EdgeKind,
    Issue,
    NodeKind,
    Pattern,
    PatternKind,
    ValidationReport,
    resolve_patterns,
    validate_argument,
)
from .opinions import (
    AVERAGING,
    CUMULATIVE,
    WEIGHTED,
    BetaShape,
    ConditionalPair,
    EvidenceCount,
    FusionMode,
    Opinion,
    beta_pdf,
    comultiply,
    deduce,
    display_opinion,
    display_round,
    from_evidence,
    fuse,
    marginal_base_rate,
    multiply,
    project,
    to_beta,
    to_evidence,
    validate_opinion,
)

__version__ = "0.1.0"
