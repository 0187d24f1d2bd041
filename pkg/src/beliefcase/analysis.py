"""Scenario comparison, what-if sweeps, and plot-data exports.

Everything here is a pure function of the document: each scenario or
sweep point is an independent assessment, so results never leak between
runs and rows come out in a fixed order regardless of schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .documents import Document
from .engine import Assessment, assess
from .errors import EngineError, UnknownNode
from .opinions import BetaShape, EvidenceCount, Opinion, beta_pdf, from_evidence, to_beta

SWEEP_MODES = ("belief-tradeoff", "uncertainty", "evidence")


# --------------------------------------------------------------------------
# Scenario comparison
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    """One display row: a node (or its framed conditional claim)."""

    label: str
    node_id: str
    framed: bool
    opinions: tuple[Opinion, ...]


@dataclass(frozen=True)
class ComparisonTable:
    scenarios: tuple[str, ...]
    rows: tuple[ComparisonRow, ...]


def compare_scenarios(document: Document) -> ComparisonTable:
    """Assess every named scenario and line the results up per node.

    Nodes that consume contexts contribute two rows: the unconditional
    opinion and the framed conditional claim right below it.
    """
    names = tuple(document.scenarios)
    if not names:
        raise EngineError("document defines no scenarios to compare")
    assessments = [assess(document, name) for name in names]

    rows: list[ComparisonRow] = []
    reference = assessments[0]
    for node_id in reference.display_order:
        rows.append(ComparisonRow(
            label=reference.label(node_id),
            node_id=node_id,
            framed=False,
            opinions=tuple(a.opinion(node_id) for a in assessments),
        ))
        result = reference.result(node_id)
        if result.framed is not None:
            rows.append(ComparisonRow(
                label=Assessment.framed_label(result),
                node_id=node_id,
                framed=True,
                opinions=tuple(a.result(node_id).framed for a in assessments),
            ))
    return ComparisonTable(names, tuple(rows))


# --------------------------------------------------------------------------
# Sweeps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """What-if sweep: inject a parameterized opinion and re-assess.

    Modes (t runs over `steps` equally spaced points in [0, 1]):

    * ``belief-tradeoff``: b = t*(1-u_fix), d = (1-t)*(1-u_fix), u = u_fix
    * ``uncertainty``: u = t, committed mass split b:d by ``belief_share``
    * ``evidence``: r = t*r_max at fixed s = ``s_fix``, mapped through
      the evidence bridge with the document's prior weight
    """

    node: str
    mode: str = "belief-tradeoff"
    steps: int = 11
    u_fix: float = 0.0
    belief_share: float = 1.0
    r_max: float = 20.0
    s_fix: float = 0.0
    observe: tuple[str, ...] = ()
    scenario: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in SWEEP_MODES:
            raise ValueError(f"unknown sweep mode {self.mode!r}, expected one of {SWEEP_MODES}")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        for name in ("u_fix", "belief_share"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.r_max < 0 or self.s_fix < 0:
            raise ValueError("evidence parameters must be >= 0")


@dataclass(frozen=True)
class SweepRow:
    t: float
    injected: Opinion
    observed: dict[str, Opinion] = field(default_factory=dict)


def _sweep_opinion(spec: SweepSpec, t: float, document: Document) -> Opinion:
    settings = document.settings
    a = settings.default_base_rate
    if spec.mode == "belief-tradeoff":
        committed = 1.0 - spec.u_fix
        return Opinion(t * committed, (1.0 - t) * committed, spec.u_fix, a)
    if spec.mode == "uncertainty":
        committed = 1.0 - t
        return Opinion(committed * spec.belief_share,
                       committed * (1.0 - spec.belief_share), t, a)
    return from_evidence(EvidenceCount(
        r=t * spec.r_max, s=spec.s_fix, W=settings.prior_weight, a=a,
    ))


def sweep(document: Document, spec: SweepSpec) -> tuple[SweepRow, ...]:
    """Run the sweep; all inputs other than the target stay fixed."""
    if spec.node not in document.graph:
        raise UnknownNode(f"unknown sweep target {spec.node!r}")
    observed_ids = spec.observe or (document.graph.root,)

    rows: list[SweepRow] = []
    for i in range(spec.steps):
        t = i / (spec.steps - 1)
        injected = _sweep_opinion(spec, t, document)
        assessment = assess(document, spec.scenario, injections={spec.node: injected})
        observed = {}
        for node_id in observed_ids:
            observed[node_id] = assessment.opinion(node_id)
        rows.append(SweepRow(t=t, injected=injected, observed=observed))
    return tuple(rows)


# --------------------------------------------------------------------------
# Plot-data exports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveSample:
    p: float
    density: float


@dataclass(frozen=True)
class BetaCurve:
    """Sampled Beta density of a node opinion (or a point-mass marker).

    For dogmatic opinions there is no density; ``point_mass`` carries the
    probability the whole mass sits on and ``samples`` stays empty.
    """

    node_id: str
    samples: tuple[CurveSample, ...]
    projection: float
    shape: BetaShape | None = None
    point_mass: float | None = None


def export_beta_curve(assessment: Assessment, node_id: str,
                      samples: int = 512) -> BetaCurve:
    """Sample the Beta density corresponding to a node's opinion.

    The grid spans [0, 1] with endpoints included wherever the density
    has a finite limit; a divergent endpoint (shape parameter < 1) is
    left out.  With both shape parameters >= 1 the emitted samples
    trapezoid-integrate to 1 (within 1e-3 for a few hundred samples).
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    opinion = assessment.opinion(node_id)
    if opinion.is_dogmatic:
        return BetaCurve(node_id, (), opinion.projection, point_mass=opinion.b)
    shape = to_beta(opinion, assessment.settings.prior_weight)
    points: list[CurveSample] = []
    for i in range(samples):
        p = i / (samples - 1)
        if (p == 0.0 and shape.alpha < 1.0) or (p == 1.0 and shape.beta < 1.0):
            continue
        points.append(CurveSample(p, beta_pdf(shape, p)))
    return BetaCurve(node_id, tuple(points), opinion.projection, shape=shape)


@dataclass(frozen=True)
class TrianglePoint:
    label: str
    b: float
    d: float
    u: float
    projection: float


def export_triangle(assessment: Assessment,
                    node_ids: tuple[str, ...] | None = None) -> tuple[TrianglePoint, ...]:
    """Barycentric (b, d, u) coordinates for plotting on an opinion triangle."""
    ids = node_ids if node_ids is not None else assessment.display_order
    points = []
    for node_id in ids:
        o = assessment.opinion(node_id)
        points.append(TrianglePoint(node_id, o.b, o.d, o.u, o.projection))
    return tuple(points)


def trapezoid_mass(curve: BetaCurve) -> float:
    """Trapezoid integral over the emitted samples (diagnostic helper)."""
    total = 0.0
    for left, right in zip(curve.samples, curve.samples[1:]):
        total += (right.p - left.p) * (left.density + right.density) / 2.0
    return total
