"""Typed model of an assurance argument graph.

Nodes follow the usual goal-structuring vocabulary (goals, strategies,
solutions, assumptions, context, justifications); edges are either
inferential support (``supportedBy``) or contextual attachment
(``inContextOf``).  Edges are stored in drawing direction, parent first,
so documents read like the diagram; evaluation traverses the reverse.

Structural validation and strategy-pattern resolution live here.  Both
are pure: they never mutate the graph and report problems through
:class:`ValidationReport` or typed exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import MissingPattern, UnresolvedConditionals
from .opinions import ConditionalPair, Opinion


class NodeKind(str, Enum):
    GOAL = "goal"
    STRATEGY = "strategy"
    SOLUTION = "solution"
    ASSUMPTION = "assumption"
    CONTEXT = "context"
    JUSTIFICATION = "justification"


class EdgeKind(str, Enum):
    SUPPORTED_BY = "supportedBy"
    IN_CONTEXT_OF = "inContextOf"


class PatternKind(str, Enum):
    """How a one-to-many support fan-in combines its premises."""

    CONJUNCTION = "conjunction"
    DISJUNCTION = "disjunction"
    FUSION_CUMULATIVE = "fusion-cumulative"
    FUSION_AVERAGING = "fusion-averaging"
    FUSION_WEIGHTED = "fusion-weighted"


#: Node kinds that may carry an input opinion.
INPUT_KINDS = frozenset({NodeKind.GOAL, NodeKind.SOLUTION, NodeKind.ASSUMPTION})

#: Node kinds that may carry a pattern annotation.
PATTERN_KINDS = frozenset({NodeKind.GOAL, NodeKind.STRATEGY})

#: Valid targets of an inContextOf edge.
CONTEXT_TARGET_KINDS = frozenset(
    {NodeKind.ASSUMPTION, NodeKind.CONTEXT, NodeKind.JUSTIFICATION}
)


@dataclass(frozen=True, slots=True)
class Pattern:
    kind: PatternKind
    gamma: float | None = None


# Opinion sources, as written in a document.  They stay symbolic until
# assessment so that serialization round-trips omitted fields.

@dataclass(frozen=True, slots=True)
class DirectSource:
    b: float
    d: float
    u: float
    a: float | None = None


@dataclass(frozen=True, slots=True)
class EvidenceSource:
    r: float
    s: float
    W: float | None = None
    a: float | None = None


@dataclass(frozen=True, slots=True)
class QualitativeSource:
    level: str


OpinionSource = DirectSource | EvidenceSource | QualitativeSource


@dataclass(frozen=True, slots=True)
class ArgNode:
    id: str
    kind: NodeKind
    statement: str = ""
    input: OpinionSource | None = None
    pattern: Pattern | None = None


@dataclass(frozen=True, slots=True)
class EdgeConditionals:
    """Conditional annotations on an edge; parts may be omitted.

    Support edges require both conditionals.  Context edges may give
    only the negative conditional (the positive one defaults to the
    computed conditional claim) or only a pinned consequent base rate.
    """

    pos: Opinion | None = None
    neg: Opinion | None = None
    base_rate: float | None = None

    def as_pair(self) -> ConditionalPair:
        if self.pos is None or self.neg is None:
            raise UnresolvedConditionals("incomplete conditional pair")
        return ConditionalPair(self.pos, self.neg, self.base_rate)


@dataclass(frozen=True, slots=True)
class ArgEdge:
    source: str
    target: str
    kind: EdgeKind
    conditionals: EdgeConditionals | None = None

    @property
    def locus(self) -> str:
        return f"{self.source}->{self.target}"


class ArgumentGraph:
    """Immutable node/edge collection with precomputed adjacency.

    ``nodes`` and ``edges`` preserve declaration order; all adjacency
    queries return edges in that order, which fixes fold order during
    assessment.
    """

    def __init__(self, nodes: tuple[ArgNode, ...] | list[ArgNode],
                 edges: tuple[ArgEdge, ...] | list[ArgEdge]) -> None:
        self.nodes: tuple[ArgNode, ...] = tuple(nodes)
        self.edges: tuple[ArgEdge, ...] = tuple(edges)
        self._by_id: dict[str, ArgNode] = {}
        for node in self.nodes:
            self._by_id.setdefault(node.id, node)
        self._support_out: dict[str, list[ArgEdge]] = {}
        self._support_in: dict[str, list[ArgEdge]] = {}
        self._context_out: dict[str, list[ArgEdge]] = {}
        for edge in self.edges:
            if edge.kind is EdgeKind.SUPPORTED_BY:
                self._support_out.setdefault(edge.source, []).append(edge)
                self._support_in.setdefault(edge.target, []).append(edge)
            else:
                self._context_out.setdefault(edge.source, []).append(edge)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArgumentGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def node(self, node_id: str) -> ArgNode:
        return self._by_id[node_id]

    def support_edges(self, node_id: str) -> tuple[ArgEdge, ...]:
        """Outgoing supportedBy edges (this node's supporters), in order."""
        return tuple(self._support_out.get(node_id, ()))

    def supporters(self, node_id: str) -> tuple[str, ...]:
        return tuple(e.target for e in self._support_out.get(node_id, ()))

    def support_parents(self, node_id: str) -> tuple[str, ...]:
        return tuple(e.source for e in self._support_in.get(node_id, ()))

    def context_edges(self, node_id: str) -> tuple[ArgEdge, ...]:
        return tuple(self._context_out.get(node_id, ()))

    def root_goals(self) -> tuple[str, ...]:
        """Goals that no supportedBy edge names as a supporter."""
        return tuple(
            n.id for n in self.nodes
            if n.kind is NodeKind.GOAL and not self._support_in.get(n.id)
        )

    @property
    def root(self) -> str:
        roots = self.root_goals()
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root goal, found {list(roots)}")
        return roots[0]

    def reachable_from(self, node_id: str) -> frozenset[str]:
        """Ids reachable along support and context edges, including start."""
        seen: set[str] = set()
        stack = [node_id]
        while stack:
            current = stack.pop()
            if current in seen or current not in self._by_id:
                continue
            seen.add(current)
            for edge in self._support_out.get(current, ()):
                stack.append(edge.target)
            for edge in self._context_out.get(current, ()):
                stack.append(edge.target)
        return frozenset(seen)


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Issue:
    code: str
    locus: str
    message: str

    def render(self) -> str:
        return f"[{self.code}] {self.locus}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def render(self) -> str:
        lines = [f"error   {i.render()}" for i in self.errors]
        lines += [f"warning {i.render()}" for i in self.warnings]
        return "\n".join(lines) if lines else "no issues"


def _support_cycle_members(graph: ArgumentGraph) -> tuple[str, ...]:
    """Ids stuck on supportedBy cycles (Kahn's algorithm residue)."""
    out_degree = {n.id: len(graph.support_edges(n.id)) for n in graph.nodes}
    users: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    for edge in graph.edges:
        if edge.kind is EdgeKind.SUPPORTED_BY and edge.target in users and edge.source in out_degree:
            users[edge.target].append(edge.source)
    ready = [nid for nid, deg in out_degree.items() if deg == 0]
    while ready:
        nid = ready.pop()
        for parent in users.get(nid, ()):
            out_degree[parent] -= 1
            if out_degree[parent] == 0:
                ready.append(parent)
    return tuple(sorted(nid for nid, deg in out_degree.items() if deg > 0))


def _deduction_site_edge(graph: ArgumentGraph, goal_id: str) -> ArgEdge | None:
    """The edge that carries a goal's deduction conditionals, if any.

    Single supporter (plain or strategy-mediated): the goal's one
    outgoing support edge.  Direct multi-child fans have no single
    carrier edge and fall back to the settings default pair.
    """
    edges = graph.support_edges(goal_id)
    if len(edges) == 1:
        return edges[0]
    return None


def validate_argument(graph: ArgumentGraph, settings) -> ValidationReport:
    """Structural validation; returns a report instead of raising.

    ``settings`` needs ``default_conditionals``, ``allow_implicit_pattern``
    and ``implicit_pattern`` attributes (see ``documents.Settings``).
    """
    errors: list[Issue] = []
    warnings: list[Issue] = []

    def error(code: str, locus: str, message: str) -> None:
        errors.append(Issue(code, locus, message))

    def warn(code: str, locus: str, message: str) -> None:
        warnings.append(Issue(code, locus, message))

    seen: set[str] = set()
    for node in graph.nodes:
        if not node.id:
            error("DUPLICATE_ID", "<empty>", "node id must be a nonempty token")
        elif node.id in seen:
            error("DUPLICATE_ID", node.id, "node id declared more than once")
        seen.add(node.id)
        if node.input is not None and node.kind not in INPUT_KINDS:
            error("INPUT_NOT_ALLOWED", node.id,
                  f"{node.kind.value} nodes cannot carry an input opinion")
        if node.pattern is not None and node.kind not in PATTERN_KINDS:
            error("PATTERN_NOT_ALLOWED", node.id,
                  f"{node.kind.value} nodes cannot carry a pattern")

    dangling = False
    for edge in graph.edges:
        missing = [nid for nid in (edge.source, edge.target) if nid not in graph]
        if missing:
            dangling = True
            error("DANGLING_EDGE", edge.locus, f"unknown node id(s): {', '.join(missing)}")
    if dangling:
        # Kind/topology checks below assume resolvable endpoints.
        return ValidationReport(_sorted(errors), _sorted(warnings))

    for edge in graph.edges:
        src, tgt = graph.node(edge.source), graph.node(edge.target)
        if edge.kind is EdgeKind.SUPPORTED_BY:
            if src.kind not in (NodeKind.GOAL, NodeKind.STRATEGY):
                error("EDGE_SOURCE_KIND", edge.locus,
                      f"supportedBy source must be a goal or strategy, got {src.kind.value}")
            if tgt.kind not in (NodeKind.GOAL, NodeKind.STRATEGY, NodeKind.SOLUTION):
                error("EDGE_TARGET_KIND", edge.locus,
                      f"supportedBy target must be a goal, strategy or solution, got {tgt.kind.value}")
            elif tgt.kind is NodeKind.STRATEGY and src.kind is not NodeKind.GOAL:
                error("EDGE_TARGET_KIND", edge.locus, "only goals may be supported by a strategy")
        else:
            if src.kind not in (NodeKind.GOAL, NodeKind.STRATEGY):
                error("EDGE_SOURCE_KIND", edge.locus,
                      f"inContextOf source must be a goal or strategy, got {src.kind.value}")
            if tgt.kind not in CONTEXT_TARGET_KINDS:
                error("EDGE_TARGET_KIND", edge.locus,
                      f"inContextOf target must be an assumption, context or justification, "
                      f"got {tgt.kind.value}")

    cycle = _support_cycle_members(graph)
    if cycle:
        error("CYCLE", ",".join(cycle), "supportedBy edges form a cycle")

    roots = graph.root_goals()
    if not roots and not cycle:
        error("NO_ROOT", "<graph>", "no root goal (every goal is a supporter)")
    elif len(roots) > 1:
        error("MULTIPLE_ROOTS", ",".join(sorted(roots)),
              "more than one goal has no incoming supportedBy edge")

    reachable: frozenset[str] = frozenset()
    if len(roots) == 1 and not cycle:
        reachable = graph.reachable_from(roots[0])
        for node in graph.nodes:
            if node.id not in reachable:
                warn("UNREACHABLE", node.id, "not reachable from the root goal")
        for node in graph.nodes:
            if node.id in reachable and len(graph.support_parents(node.id)) > 1:
                warn("DEPENDENT_SUPPORT", node.id,
                     "supports multiple parents; fused or combined ancestors assume "
                     "evidential independence")

    for node in graph.nodes:
        supporters = graph.supporters(node.id)
        kinds = [graph.node(s).kind for s in supporters]
        if node.kind is NodeKind.STRATEGY and not supporters:
            error("STRATEGY_NO_SUPPORT", node.id, "strategy has no supporting children")
        if node.pattern is not None and len(supporters) < 2:
            error("PATTERN_ARITY", node.id,
                  f"pattern requires at least 2 supporting children, found {len(supporters)}")
        if node.kind is NodeKind.GOAL and NodeKind.STRATEGY in kinds:
            if len(supporters) > 1:
                error("MIXED_SUPPORT", node.id,
                      "a goal supported by a strategy may not have other supporters")
        if node.input is not None and supporters:
            warn("UNUSED_INPUT", node.id, "input opinion ignored: node is derived from supporters")
        if node.kind is NodeKind.GOAL and node.pattern is not None and kinds == [NodeKind.STRATEGY]:
            warn("UNUSED_PATTERN", node.id, "pattern ignored: aggregation happens at the strategy")

        if node.kind is NodeKind.GOAL and supporters:
            edges = graph.support_edges(node.id)
            site_edge = _deduction_site_edge(graph, node.id)
            if site_edge is None:
                for e in edges:
                    if e.conditionals is not None:
                        error("CONDITIONALS_NOT_ALLOWED", e.locus,
                              "conditionals on a multi-child fan edge are ambiguous; "
                              "use a strategy node or the settings default")
                if settings.default_conditionals is None:
                    error("MISSING_CONDITIONALS", node.id,
                          "multi-child fan needs settings.default_conditionals")
            else:
                cond = site_edge.conditionals
                if cond is not None and (cond.pos is None or cond.neg is None):
                    error("MISSING_CONDITIONALS", site_edge.locus,
                          "support conditionals need both pos and neg")
                elif cond is None and settings.default_conditionals is None:
                    error("MISSING_CONDITIONALS", site_edge.locus,
                          "deduction edge has no conditionals and no default is configured")
            if len(supporters) > 1 and node.pattern is None:
                if settings.allow_implicit_pattern:
                    warn("IMPLICIT_PATTERN", node.id,
                         f"no explicit pattern; {settings.implicit_pattern.value} assumed")
                else:
                    error("MISSING_PATTERN", node.id,
                          "multi-child fan has no pattern and implicit patterns are disabled")
        if node.kind is NodeKind.STRATEGY and len(supporters) > 1 and node.pattern is None:
            if settings.allow_implicit_pattern:
                warn("IMPLICIT_PATTERN", node.id,
                     f"no explicit pattern; {settings.implicit_pattern.value} assumed")
            else:
                error("MISSING_PATTERN", node.id,
                      "strategy fan has no pattern and implicit patterns are disabled")
        for e in graph.support_edges(node.id):
            if node.kind is NodeKind.STRATEGY and e.conditionals is not None:
                error("CONDITIONALS_NOT_ALLOWED", e.locus,
                      "strategy-to-child edges aggregate; conditionals belong on the "
                      "goal-to-strategy edge")

        assumption_edges = [
            e for e in graph.context_edges(node.id)
            if graph.node(e.target).kind is NodeKind.ASSUMPTION
        ]
        if len(assumption_edges) > 1:
            for e in assumption_edges:
                if e.conditionals is not None:
                    error("CONDITIONALS_NOT_ALLOWED", e.locus,
                          "explicit conditionals are ambiguous with multiple assumptions "
                          "on one node; they are conjoined into a single antecedent")

    return ValidationReport(_sorted(errors), _sorted(warnings))


def _sorted(issues: list[Issue]) -> tuple[Issue, ...]:
    return tuple(sorted(issues, key=lambda i: (i.code, i.locus, i.message)))


# --------------------------------------------------------------------------
# Pattern resolution
# --------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class DeductionSite:
    """One inferential step: premises, optional aggregation, one deduction.

    ``operand_ids`` lists the premises in document order; a fold applies
    when there is more than one.  The conditional pair parameterizes the
    deduction of ``goal_id`` from the (aggregated) premise.
    """

    goal_id: str
    operand_ids: tuple[str, ...]
    strategy_id: str | None
    pattern: Pattern | None
    pair: ConditionalPair


@dataclass(frozen=True)
class ResolvedArgument:
    graph: ArgumentGraph
    sites: dict[str, DeductionSite]
    patterns: dict[str, Pattern]  # fan node id (goal or strategy) -> pattern
    warnings: tuple[Issue, ...] = ()

    def site(self, goal_id: str) -> DeductionSite | None:
        return self.sites.get(goal_id)


def resolve_patterns(graph: ArgumentGraph, settings) -> ResolvedArgument:
    """Assign a pattern to every support fan-in and a pair to every site.

    Explicit annotations win; otherwise ``settings.implicit_pattern``
    applies with a warning (or :class:`MissingPattern` when implicit
    patterns are disabled).  Idempotent: resolving the annotated graph
    again yields the same sites and no new warnings.

    Requires a structurally valid graph (``validate_argument`` clean).
    """
    warnings: list[Issue] = []
    sites: dict[str, DeductionSite] = {}
    patterns: dict[str, Pattern] = {}
    annotated: list[ArgNode] = list(graph.nodes)
    index = {node.id: i for i, node in enumerate(graph.nodes)}

    def resolve_fan(node: ArgNode, fan_size: int) -> Pattern | None:
        if fan_size < 2:
            return node.pattern
        if node.pattern is not None:
            return node.pattern
        if not settings.allow_implicit_pattern:
            raise MissingPattern(
                "no pattern and implicit patterns are disabled", locus=node.id
            )
        warnings.append(Issue(
            "IMPLICIT_PATTERN", node.id,
            f"no explicit pattern; {settings.implicit_pattern.value} assumed",
        ))
        pattern = Pattern(settings.implicit_pattern)
        annotated[index[node.id]] = replace(node, pattern=pattern)
        return pattern

    for node in graph.nodes:
        if node.kind is not NodeKind.GOAL:
            continue
        supporters = graph.supporters(node.id)
        if not supporters:
            continue
        strategy_id: str | None = None
        operand_ids = supporters
        fan_owner = node
        if len(supporters) == 1 and graph.node(supporters[0]).kind is NodeKind.STRATEGY:
            strategy_id = supporters[0]
            operand_ids = graph.supporters(strategy_id)
            fan_owner = graph.node(strategy_id)

        pattern = resolve_fan(fan_owner, len(operand_ids))
        if pattern is not None and len(operand_ids) >= 2:
            patterns[fan_owner.id] = pattern

        site_edge = _deduction_site_edge(graph, node.id)
        if site_edge is not None and site_edge.conditionals is not None:
            pair = site_edge.conditionals.as_pair()
        elif settings.default_conditionals is not None:
            pair = settings.default_conditionals
        else:
            raise UnresolvedConditionals(
                "deduction site has no conditional pair and no default is configured",
                locus=node.id,
            )
        sites[node.id] = DeductionSite(
            goal_id=node.id,
            operand_ids=operand_ids,
            strategy_id=strategy_id,
            pattern=pattern if len(operand_ids) >= 2 else None,
            pair=pair,
        )

    return ResolvedArgument(
        graph=ArgumentGraph(tuple(annotated), graph.edges),
        sites=sites,
        patterns=patterns,
        warnings=tuple(warnings),
    )
