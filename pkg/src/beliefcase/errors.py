"""Exception taxonomy for the beliefcase package.

Every failure mode raised by the library is a subclass of
:class:`BeliefcaseError`, grouped by the layer it originates from
(opinion algebra, document handling, assessment).  The CLI maps these
groups onto exit codes.
"""

from __future__ import annotations


class BeliefcaseError(Exception):
    """Base class for all errors raised by this package."""


# --------------------------------------------------------------------------
# Opinion algebra
# --------------------------------------------------------------------------

class OpinionError(BeliefcaseError, ValueError):
    """Invalid opinion value or undefined operator input."""


class SimplexViolation(OpinionError):
    """Belief masses do not lie on the b + d + u = 1 simplex."""


class BaseRateRange(OpinionError):
    """Base rate outside [0, 1]."""


class DogmaticOpinion(OpinionError):
    """Operation requires uncertainty > 0 (evidence would be unbounded)."""


class BaseRateDegenerate(OpinionError):
    """Operator undefined for this base-rate combination."""


class DegenerateConditionals(OpinionError):
    """Both conditionals vacuous: no marginal base rate exists."""


class DivergentEndpoint(OpinionError):
    """Beta density evaluated at an endpoint where it is unbounded."""


# --------------------------------------------------------------------------
# Documents
# --------------------------------------------------------------------------

class DocumentError(BeliefcaseError):
    """Base class for document parsing and serialization failures."""


class DocumentSyntaxError(DocumentError):
    """Input text is not well-formed JSON/YAML."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None) -> None:
        locus = ""
        if line is not None:
            locus = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + locus)
        self.line = line
        self.column = column


class SchemaError(DocumentError):
    """Well-formed input that violates the document schema."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationFailed(DocumentError):
    """Parsed document fails structural argument validation.

    Carries the full report so callers can render every issue, not just
    the first one.
    """

    def __init__(self, report) -> None:  # noqa: ANN001 - avoids import cycle
        super().__init__("argument validation failed:\n" + report.render())
        self.report = report


# --------------------------------------------------------------------------
# Assessment
# --------------------------------------------------------------------------

class EngineError(BeliefcaseError):
    """Base class for assessment-time failures."""

    def __init__(self, message: str, locus: str | None = None) -> None:
        super().__init__(f"{locus}: {message}" if locus else message)
        self.locus = locus


class UnknownScenario(EngineError):
    """Requested scenario name is not defined in the document."""


class UnknownNode(EngineError):
    """Referenced node id does not exist (or carries no result)."""


class UnresolvedConditionals(EngineError):
    """A deduction site has no conditional pair and no default is set."""


class MissingPattern(EngineError):
    """A support fan-in has no pattern and implicit patterns are disabled."""


class ContextReuse(EngineError):
    """An assumption would be marginalized more than once."""


class InvalidAssignment(EngineError):
    """Scenario or sweep assignment targets a node that is not an input."""
