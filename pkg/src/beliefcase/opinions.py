"""Binomial opinions and the Subjective Logic operator kernel.

A binomial opinion ``(b, d, u, a)`` expresses belief, disbelief and
uncommitted (uncertain) mass about a binary proposition, together with a
prior base rate ``a``.  The three masses live on the simplex
``b + d + u = 1``.  Opinions are equivalent to Beta distributions through
the evidence mapping

    b = r / (r + s + W),   d = s / (r + s + W),   u = W / (r + s + W)

with positive/negative evidence counts ``r, s`` and a non-informative
prior weight ``W`` (conventionally 2 for binary domains), giving Beta
shape parameters ``alpha = r + a*W`` and ``beta = s + (1 - a)*W``.

The operators implemented here are the standard Subjective Logic ones
(Jøsang, *Subjective Logic*, Springer 2016): binomial multiplication and
co-multiplication, cumulative / averaging / weighted fusion, and
conditional deduction.  Deduction follows the sub-simplex construction:
the image of a vacuous antecedent is placed at the most uncertain
opinion consistent with the conditionals (the "apex"), and every other
antecedent maps to the barycentric mix of the two conditionals and that
apex.

All values are immutable and all operators are pure functions, so the
kernel is safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

from .errors import (
    BaseRateDegenerate,
    BaseRateRange,
    DegenerateConditionals,
    DivergentEndpoint,
    DogmaticOpinion,
    SimplexViolation,
)

#: Tolerance for simplex membership and component clamping.
SIMPLEX_TOL = 1e-9

#: Sums this close to 1 are taken as exact, which makes validation
#: idempotent (renormalizing again would only shuffle final ulps).
_RENORM_EPS = 1e-15

#: Conventional prior weight for binary domains.
DEFAULT_PRIOR_WEIGHT = 2.0


@dataclass(frozen=True, slots=True)
class Opinion:
    """A binomial opinion ``(b, d, u, a)`` about a binary proposition.

    Attributes:
        b: belief mass in [0, 1]
        d: disbelief mass in [0, 1]
        u: uncommitted (uncertainty) mass in [0, 1]
        a: prior base rate in [0, 1], defaults to 0.5

    The constructor does not validate; use :func:`validate_opinion` (or
    :meth:`validated`) at trust boundaries.
    """

    b: float
    d: float
    u: float
    a: float = 0.5

    @property
    def projection(self) -> float:
        """Projected (expected) probability ``b + a*u``."""
        return self.b + self.a * self.u

    @property
    def is_vacuous(self) -> bool:
        return self.u == 1.0

    @property
    def is_dogmatic(self) -> bool:
        return self.u == 0.0

    def validated(self) -> "Opinion":
        return validate_opinion(self)

    def with_base_rate(self, a: float) -> "Opinion":
        return Opinion(self.b, self.d, self.u, a)

    @staticmethod
    def vacuous(a: float = 0.5) -> "Opinion":
        return Opinion(0.0, 0.0, 1.0, a)


@dataclass(frozen=True, slots=True)
class EvidenceCount:
    """Positive/negative evidence with prior weight and base rate."""

    r: float
    s: float
    W: float = DEFAULT_PRIOR_WEIGHT
    a: float = 0.5

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0:
            raise ValueError(f"evidence counts must be >= 0, got r={self.r}, s={self.s}")
        if self.W <= 0:
            raise ValueError(f"prior weight must be > 0, got {self.W}")
        if not 0.0 <= self.a <= 1.0:
            raise BaseRateRange(f"base rate must be in [0, 1], got {self.a}")


@dataclass(frozen=True, slots=True)
class BetaShape:
    """Beta distribution shape parameters (alpha, beta), both > 0."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError(
                f"Beta shape parameters must be > 0, got ({self.alpha}, {self.beta})"
            )

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @property
    def mode(self) -> float | None:
        """Interior mode, or None when the density peaks at an endpoint."""
        if self.alpha > 1 and self.beta > 1:
            return (self.alpha - 1) / (self.alpha + self.beta - 2)
        return None


@dataclass(frozen=True, slots=True)
class ConditionalPair:
    """Conditional opinions on a consequent given the antecedent truth value.

    ``pos`` is the opinion on the consequent given the antecedent is true,
    ``neg`` given it is false.  ``consequent_base_rate`` optionally pins the
    consequent base rate; when absent, deduction derives the marginal
    fixpoint consistent with the pair (see :func:`marginal_base_rate`).
    """

    pos: Opinion
    neg: Opinion
    consequent_base_rate: float | None = None


@dataclass(frozen=True, slots=True)
class FusionMode:
    """Fusion operator selector: cumulative, averaging, or weighted.

    ``gamma`` weights the first operand in the dogmatic limit of the
    cumulative and weighted variants (both sources dogmatic); it has no
    effect otherwise.
    """

    kind: str
    gamma: float = 0.5

    _KINDS = ("cumulative", "averaging", "weighted")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown fusion kind {self.kind!r}, expected one of {self._KINDS}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")


CUMULATIVE = FusionMode("cumulative")
AVERAGING = FusionMode("averaging")
WEIGHTED = FusionMode("weighted")


# --------------------------------------------------------------------------
# Validation and numeric hygiene
# --------------------------------------------------------------------------

def _clamp_component(x: float, what: str) -> float:
    if -SIMPLEX_TOL <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + SIMPLEX_TOL:
        return 1.0
    if not 0.0 <= x <= 1.0:
        raise SimplexViolation(f"{what} outside [0, 1]: {x!r}")
    return x


def validate_opinion(o: Opinion) -> Opinion:
    """Return ``o`` clamped and renormalized, or raise.

    Components within ``SIMPLEX_TOL`` of [0, 1] are clamped to the bound;
    a mass sum within ``SIMPLEX_TOL`` of 1 is rescaled to 1.  Anything
    further off raises :class:`SimplexViolation`.  A base rate outside
    [0, 1] raises :class:`BaseRateRange`.
    """
    if not 0.0 <= o.a <= 1.0:
        raise BaseRateRange(f"base rate must be in [0, 1], got {o.a!r}")
    b = _clamp_component(o.b, "belief")
    d = _clamp_component(o.d, "disbelief")
    u = _clamp_component(o.u, "uncertainty")
    total = b + d + u
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise SimplexViolation(f"b + d + u = {total!r}, expected 1 within {SIMPLEX_TOL}")
    if abs(total - 1.0) > _RENORM_EPS:
        b, d, u = b / total, d / total, u / total
    if (b, d, u, o.a) == (o.b, o.d, o.u, o.a):
        return o
    return Opinion(b, d, u, o.a)


def _result(b: float, d: float, u: float, a: float) -> Opinion:
    # Operator outputs accumulate float drift; pass through the same
    # hygiene rules as external input.
    return validate_opinion(Opinion(b, d, u, a))


def display_round(x: float, precision: int) -> str:
    """Format for display: round-half-even at ``precision`` decimals.

    The value is first snapped to 12 significant digits so that binary
    noise (0.855 stored as 0.85499...) does not flip a decimal half-point
    the wrong way.
    """
    quantum = Decimal(1).scaleb(-precision)
    return str(Decimal(f"{x:.12g}").quantize(quantum, rounding=ROUND_HALF_EVEN))


def display_opinion(o: Opinion, precision: int = 2) -> str:
    """Render ``(b, d, u)`` at display precision, e.g. ``(0.86, 0.00, 0.14)``."""
    return (f"({display_round(o.b, precision)}, {display_round(o.d, precision)}, "
            f"{display_round(o.u, precision)})")


# --------------------------------------------------------------------------
# Evidence and Beta bridges
# --------------------------------------------------------------------------

def from_evidence(e: EvidenceCount) -> Opinion:
    """Map evidence counts to an opinion: b, d, u = r, s, W over r+s+W."""
    total = e.r + e.s + e.W
    return Opinion(e.r / total, e.s / total, e.W / total, e.a)


def to_evidence(o: Opinion, prior_weight: float = DEFAULT_PRIOR_WEIGHT) -> EvidenceCount:
    """Invert the evidence mapping: r = W*b/u, s = W*d/u.

    Raises:
        DogmaticOpinion: when ``u == 0`` (the counts would be unbounded).
    """
    if o.u <= 0.0:
        raise DogmaticOpinion("dogmatic opinion carries unbounded evidence")
    return EvidenceCount(
        r=prior_weight * o.b / o.u,
        s=prior_weight * o.d / o.u,
        W=prior_weight,
        a=o.a,
    )


def project(o: Opinion) -> float:
    """Projected probability ``b + a*u`` (the Beta-mean equivalent)."""
    return o.b + o.a * o.u


def to_beta(o: Opinion, prior_weight: float = DEFAULT_PRIOR_WEIGHT) -> BetaShape:
    """Beta shape of a non-dogmatic opinion: alpha = W*b/u + a*W, beta = W*d/u + (1-a)*W."""
    if o.u <= 0.0:
        raise DogmaticOpinion(
            "dogmatic opinion corresponds to a point mass, not a Beta density"
        )
    return BetaShape(
        alpha=prior_weight * o.b / o.u + o.a * prior_weight,
        beta=prior_weight * o.d / o.u + (1.0 - o.a) * prior_weight,
    )


def beta_pdf(shape: BetaShape, p: float) -> float:
    """Beta density at ``p``.

    Endpoints use the limit convention: 0 where the exponent is positive,
    the finite limit where the exponent is 0, and
    :class:`DivergentEndpoint` where the density is unbounded.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    log_norm = (
        math.lgamma(shape.alpha + shape.beta)
        - math.lgamma(shape.alpha)
        - math.lgamma(shape.beta)
    )
    if p == 0.0:
        if shape.alpha > 1.0:
            return 0.0
        if shape.alpha == 1.0:
            return math.exp(log_norm)
        raise DivergentEndpoint(f"Beta({shape.alpha}, {shape.beta}) diverges at p=0")
    if p == 1.0:
        if shape.beta > 1.0:
            return 0.0
        if shape.beta == 1.0:
            return math.exp(log_norm)
        raise DivergentEndpoint(f"Beta({shape.alpha}, {shape.beta}) diverges at p=1")
    return math.exp(
        log_norm + (shape.alpha - 1.0) * math.log(p) + (shape.beta - 1.0) * math.log1p(-p)
    )


# --------------------------------------------------------------------------
# Logical combination
# --------------------------------------------------------------------------

def multiply(x: Opinion, y: Opinion) -> Opinion:
    """Opinion on the conjunction of two independent propositions.

    Projection is multiplicative: ``project(x*y) = project(x)*project(y)``.

    The correction terms are evaluated as bounded ratios
    ``(1-a)/denom`` so extreme base rates cannot underflow them.

    Raises:
        BaseRateDegenerate: when ``a_x * a_y == 1``.
    """
    co_ax, co_ay = 1.0 - x.a, 1.0 - y.a
    denom = co_ax + x.a * co_ay  # = 1 - a_x*a_y, without cancellation
    if denom == 0.0:
        raise BaseRateDegenerate("multiplication undefined for a_x * a_y = 1")
    rx, ry = co_ax / denom, co_ay / denom  # both in [0, 1]
    b = x.b * y.b + y.a * x.b * y.u * rx + x.a * x.u * y.b * ry
    d = x.d + y.d - x.d * y.d
    u = x.u * y.u + x.b * y.u * ry + x.u * y.b * rx
    return _result(b, d, u, x.a * y.a)


def comultiply(x: Opinion, y: Opinion) -> Opinion:
    """Opinion on the disjunction of two independent propositions.

    Projection follows the probabilistic sum:
    ``project(x|y) = px + py - px*py``.

    Raises:
        BaseRateDegenerate: when ``a_x = a_y = 0``.
    """
    denom = x.a + y.a - x.a * y.a
    if denom == 0.0:
        raise BaseRateDegenerate("co-multiplication undefined for a_x = a_y = 0")
    rx, ry = x.a / denom, y.a / denom  # both in [0, 1]
    b = x.b + y.b - x.b * y.b
    d = x.d * y.d + (1.0 - y.a) * x.d * y.u * rx + (1.0 - x.a) * x.u * y.d * ry
    u = x.u * y.u + x.d * y.u * ry + x.u * y.d * rx
    return _result(b, d, u, denom)


# --------------------------------------------------------------------------
# Fusion
# --------------------------------------------------------------------------

def _fuse_cumulative(x: Opinion, y: Opinion, gamma: float) -> Opinion:
    if x.u == 0.0 and y.u == 0.0:
        # Dogmatic limit: gamma-weighted average of the point opinions.
        b = gamma * x.b + (1.0 - gamma) * y.b
        a = gamma * x.a + (1.0 - gamma) * y.a
        return _result(b, 1.0 - b, 0.0, a)
    # A vacuous operand is neutral, bit-exactly (the a-formula reduces to
    # the other operand's base rate as well, unless both are vacuous).
    if y.u == 1.0 and x.u < 1.0:
        return x
    if x.u == 1.0 and y.u < 1.0:
        return y
    # Commitments 1-u are exact (Sterbenz) for u >= 0.5 and keep every
    # term below a sum of non-negatives: no cancellation anywhere.
    cx, cy = 1.0 - x.u, 1.0 - y.u
    denom = x.u * cy + y.u * cx + x.u * y.u  # = u_x + u_y - u_x*u_y
    b = (x.b * y.u + y.b * x.u) / denom
    d = (x.d * y.u + y.d * x.u) / denom
    u = x.u * y.u / denom
    a_denom = x.u * cy + y.u * cx  # = u_x + u_y - 2*u_x*u_y
    if a_denom != 0.0:
        a = (x.a * y.u * cx + y.a * x.u * cy) / a_denom
    else:
        a = (x.a + y.a) / 2.0
    return _result(b, d, u, a)


def _fuse_averaging(x: Opinion, y: Opinion) -> Opinion:
    if x.u == 0.0 and y.u == 0.0:
        return _result(
            (x.b + y.b) / 2.0, (x.d + y.d) / 2.0, 0.0, (x.a + y.a) / 2.0
        )
    denom = x.u + y.u
    b = (x.b * y.u + y.b * x.u) / denom
    d = (x.d * y.u + y.d * x.u) / denom
    u = 2.0 * x.u * y.u / denom
    return _result(b, d, u, (x.a + y.a) / 2.0)


def _fuse_weighted(x: Opinion, y: Opinion, gamma: float) -> Opinion:
    if x.u == 0.0 and y.u == 0.0:
        b = gamma * x.b + (1.0 - gamma) * y.b
        a = gamma * x.a + (1.0 - gamma) * y.a
        return _result(b, 1.0 - b, 0.0, a)
    if x.u == 1.0 and y.u == 1.0:
        return Opinion.vacuous((x.a + y.a) / 2.0)
    if y.u == 1.0:
        return x
    if x.u == 1.0:
        return y
    cx, cy = 1.0 - x.u, 1.0 - y.u  # source commitments
    denom = x.u * cy + y.u * cx  # = u_x + u_y - 2*u_x*u_y
    b = (x.b * cx * y.u + y.b * cy * x.u) / denom
    d = (x.d * cx * y.u + y.d * cy * x.u) / denom
    u = (cx + cy) * x.u * y.u / denom
    a = (x.a * cx + y.a * cy) / (cx + cy)
    return _result(b, d, u, a)


def fuse(x: Opinion, y: Opinion, mode: FusionMode = CUMULATIVE) -> Opinion:
    """Fuse two opinions about the same proposition.

    Cumulative fusion pools independent evidence (equivalent to adding
    the underlying evidence counts), averaging fusion handles dependent
    evidence (idempotent), and weighted fusion discounts each source by
    its commitment ``1 - u``.
    """
    if mode.kind == "cumulative":
        return _fuse_cumulative(x, y, mode.gamma)
    if mode.kind == "averaging":
        return _fuse_averaging(x, y)
    return _fuse_weighted(x, y, mode.gamma)


# --------------------------------------------------------------------------
# Conditional deduction
# --------------------------------------------------------------------------

def _marginal_split(c: ConditionalPair, a_x: float) -> tuple[float, float]:
    """(a_y, 1 - a_y) of the marginal fixpoint, both computed stably.

    The complement is formed as a mixture of disbelief masses instead of
    ``1 - a_y``, which would cancel catastrophically when a_y is close
    to 1 (near-dogmatic conditionals).
    """
    pos, neg = c.pos, c.neg
    if pos.u == 1.0 and neg.u == 1.0:
        raise DegenerateConditionals("both conditionals vacuous: marginal base rate undefined")
    num_b = a_x * pos.b + (1.0 - a_x) * neg.b
    num_d = a_x * pos.d + (1.0 - a_x) * neg.d
    denom = num_b + num_d  # = 1 - a_x*u_pos - (1-a_x)*u_neg
    if denom <= 0.0:
        # Only reachable when a boundary base rate zeroes out the one
        # non-vacuous side; the continuous extension drops a_x entirely.
        if pos.u == 1.0:
            committed = neg.b + neg.d
            return neg.b / committed, neg.d / committed
        committed = pos.b + pos.d
        return pos.b / committed, pos.d / committed
    return num_b / denom, num_d / denom


def marginal_base_rate(c: ConditionalPair, antecedent_base_rate: float) -> float:
    """Consequent base rate consistent with a conditional pair.

    Returns ``c.consequent_base_rate`` when pinned, otherwise the
    fixpoint of ``a_y = a_x*E_pos + (1-a_x)*E_neg``:

        a_y = (a_x*b_pos + (1-a_x)*b_neg) / (1 - a_x*u_pos - (1-a_x)*u_neg)

    This is the base rate that makes a vacuous antecedent deduce to a
    vacuous conclusion.

    Raises:
        DegenerateConditionals: when both conditionals are vacuous.
    """
    if c.consequent_base_rate is not None:
        return c.consequent_base_rate
    a_y, _ = _marginal_split(c, antecedent_base_rate)
    return min(1.0, max(0.0, a_y))


def deduce(x: Opinion, c: ConditionalPair, default_base_rate: float = 0.5) -> Opinion:
    """Deduce an opinion on the consequent from an antecedent opinion.

    The sub-simplex construction: the dogmatic antecedents map to the
    conditionals themselves; the vacuous antecedent maps to the apex,
    the most uncertain opinion whose projection equals the vacuous
    expectation ``E_vac = a_x*E_pos + (1-a_x)*E_neg`` while staying
    inside the triangle spanned by the conditionals
    (``b >= min(b_pos, b_neg)`` and ``d >= min(d_pos, d_neg)``).  A
    general antecedent mixes the three vertices barycentrically by
    ``(b_x, d_x, u_x)``.

    The deduced projection obeys the total-probability law:
    ``project(result) = project(x)*E_pos + (1-project(x))*E_neg``.

    When both conditionals are vacuous the result is vacuous with base
    rate ``c.consequent_base_rate`` or ``default_base_rate``.
    """
    pos, neg = c.pos, c.neg
    if pos.u == 1.0 and neg.u == 1.0:
        a_y = c.consequent_base_rate
        return Opinion.vacuous(default_base_rate if a_y is None else a_y)

    if c.consequent_base_rate is not None:
        a_y = c.consequent_base_rate
        co_a_y = 1.0 - a_y
    else:
        a_y, co_a_y = _marginal_split(c, x.a)

    # Dogmatic antecedents select the matching conditional bit-exactly.
    if x.b == 1.0:
        return Opinion(pos.b, pos.d, pos.u, min(1.0, max(0.0, a_y)))
    if x.d == 1.0:
        return Opinion(neg.b, neg.d, neg.u, min(1.0, max(0.0, a_y)))

    b_min = min(pos.b, neg.b)
    d_min = min(pos.d, neg.d)
    if c.consequent_base_rate is None and b_min == 0.0 and d_min == 0.0:
        # Under the marginal fixpoint e_vac equals a_y, so both apex
        # bounds evaluate to exactly 1: the apex is the vacuous opinion.
        # Taking the identity directly keeps vacuous antecedents mapping
        # to bit-exact vacuous conclusions instead of rounding noise.
        u_apex, b_apex, d_apex = 1.0, 0.0, 0.0
    else:
        # Belief/disbelief mixtures above the floor, kept as sums of
        # non-negative terms so near-dogmatic pairs stay accurate.
        mix_b = x.a * (pos.b - b_min) + (1.0 - x.a) * (neg.b - b_min)
        mix_d = x.a * (pos.d - d_min) + (1.0 - x.a) * (neg.d - d_min)
        mix_u = x.a * pos.u + (1.0 - x.a) * neg.u
        # Each branch is (e_vac - b_min)/a_y resp. ((1-e_vac) - d_min)/(1-a_y),
        # divided before adding so a tiny denominator cannot corrupt the
        # other addend (an oversized quotient just loses the min, harmless).
        branches = []
        if a_y > 0.0:
            branches.append(mix_b / a_y + mix_u)
        if co_a_y > 0.0:
            branches.append(mix_d / co_a_y + mix_u)
        u_apex = min(1.0, max(0.0, min(branches)))
        b_apex = max(0.0, b_min + mix_b + a_y * (mix_u - u_apex))
        d_apex = max(0.0, d_min + mix_d + co_a_y * (mix_u - u_apex))

    b = x.b * pos.b + x.d * neg.b + x.u * b_apex
    d = x.b * pos.d + x.d * neg.d + x.u * d_apex
    u = x.b * pos.u + x.d * neg.u + x.u * u_apex
    return _result(b, d, u, min(1.0, max(0.0, a_y)))


def deduction_internals(
    x: Opinion, c: ConditionalPair, default_base_rate: float = 0.5
) -> dict[str, float]:
    """Resolved intermediate quantities of :func:`deduce`, for provenance.

    Returns ``a_y``, ``u_apex`` and the uncertainty increase ``K``
    relative to the plain barycentric image of the conditionals
    (``K = u_result - (b_x*u_pos + d_x*u_neg + u_x*(a_x*u_pos + (1-a_x)*u_neg))``).
    """
    result = deduce(x, c, default_base_rate)
    pos, neg = c.pos, c.neg
    if pos.u == 1.0 and neg.u == 1.0:
        return {"a_y": result.a, "u_apex": 1.0, "K": 0.0}
    image_u = x.b * pos.u + x.d * neg.u + x.u * (x.a * pos.u + (1.0 - x.a) * neg.u)
    u_apex = (result.u - x.b * pos.u - x.d * neg.u) / x.u if x.u > 0.0 else 1.0
    return {"a_y": result.a, "u_apex": u_apex, "K": result.u - image_u}
