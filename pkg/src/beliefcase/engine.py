"""Bottom-up confidence propagation over an argument graph.

Each assessment evaluates supporters before the claims they support:
leaves take their opinion from the scenario, the node's own input, or
the vacuous default; every support fan-in is aggregated by its resolved
pattern and then deduced through the site's conditional pair; contextual
assumptions are either tracked as explicit conditions on the claim
("conditional" mode) or consumed once through conditional deduction
("marginalize" mode), never both and never twice.

Under the default ``aggregate_base_rate = "default-reset"`` policy,
derived opinions are published at the configured default base rate and
aggregates enter deduction with it, which keeps base rates from
compounding through operator chains; ``"composed"`` keeps every
operator-produced base rate instead.

Every step is recorded as provenance so a result can be explained
operator by operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Mapping

from .documents import Document, Settings, resolve_source
from .errors import (
    ContextReuse,
    EngineError,
    InvalidAssignment,
    OpinionError,
    UnknownNode,
    UnknownScenario,
    ValidationFailed,
)
from .graph import (
    ArgNode,
    ArgumentGraph,
    EdgeConditionals,
    Issue,
    NodeKind,
    Pattern,
    PatternKind,
    ResolvedArgument,
    resolve_patterns,
    validate_argument,
)
from .opinions import (
    ConditionalPair,
    FusionMode,
    Opinion,
    comultiply,
    deduce,
    deduction_internals,
    display_opinion,
    fuse,
    multiply,
    validate_opinion,
)

_FOLD_OPERATORS = {
    PatternKind.CONJUNCTION: "multiply",
    PatternKind.DISJUNCTION: "comultiply",
    PatternKind.FUSION_CUMULATIVE: "fuse-cumulative",
    PatternKind.FUSION_AVERAGING: "fuse-averaging",
    PatternKind.FUSION_WEIGHTED: "fuse-weighted",
}

#: Node kinds that carry opinions and therefore get results.
ASSESSED_KINDS = (NodeKind.GOAL, NodeKind.STRATEGY, NodeKind.SOLUTION,
                  NodeKind.ASSUMPTION)


@dataclass(frozen=True)
class ProvenanceStep:
    """One recorded operator application.

    ``operands`` mixes node ids (whose own provenance lives on their
    result) and nested steps (intermediate values with no node of their
    own, e.g. the fold feeding a deduction).
    """

    operator: str
    operands: tuple["ProvenanceStep | str", ...]
    opinion: Opinion
    params: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class NodeResult:
    node_id: str
    opinion: Opinion
    context_set: frozenset[str] = frozenset()
    consumed_contexts: frozenset[str] = frozenset()
    provenance: ProvenanceStep | None = None
    framed: Opinion | None = None
    framed_contexts: tuple[str, ...] = ()

    @property
    def projection(self) -> float:
        return self.opinion.projection


@dataclass(frozen=True)
class Assessment:
    """Per-node results of one propagation run."""

    scenario: str | None
    results: Mapping[str, NodeResult]
    settings: Settings
    warnings: tuple[Issue, ...] = ()
    display_order: tuple[str, ...] = ()
    root_id: str = ""

    def result(self, node_id: str) -> NodeResult:
        try:
            return self.results[node_id]
        except KeyError:
            raise UnknownNode(f"no result for node {node_id!r}") from None

    def opinion(self, node_id: str) -> Opinion:
        return self.result(node_id).opinion

    def label(self, node_id: str) -> str:
        """Display label; conditional claims read ``G | A``."""
        result = self.result(node_id)
        if result.context_set:
            return f"{node_id} | {','.join(sorted(result.context_set))}"
        return node_id

    @staticmethod
    def framed_label(result: NodeResult) -> str:
        return f"{result.node_id} | {','.join(result.framed_contexts)}"


def assess(
    document: Document,
    scenario: str | None = None,
    overrides: Mapping[str, Any] | None = None,
    injections: Mapping[str, Opinion] | None = None,
) -> Assessment:
    """Evaluate the argument bottom-up under one scenario.

    ``overrides`` are settings deltas for this run (e.g.
    ``{"context_mode": "conditional"}``).  ``injections`` replace input
    opinions by node id on top of the scenario, used by what-if sweeps.
    """
    settings = document.settings.replace(**overrides) if overrides else document.settings

    report = validate_argument(document.graph, settings)
    if not report.ok:
        raise ValidationFailed(report)

    if scenario is not None and scenario not in document.scenarios:
        raise UnknownScenario(
            f"scenario {scenario!r} not defined; known: {sorted(document.scenarios)}"
        )

    resolved = resolve_patterns(document.graph, settings)
    graph = resolved.graph

    assignments: dict[str, Opinion] = {}
    if scenario is not None:
        for node_id, source in document.scenarios[scenario].assignments.items():
            assignments[node_id] = resolve_source(source, settings)
    if injections:
        for node_id, opinion in injections.items():
            _check_assignable(graph, node_id)
            assignments[node_id] = validate_opinion(opinion)

    evaluator = _Evaluator(graph, resolved, settings, assignments)
    root = graph.root
    evaluator.result(root)
    # Assumptions hang off inContextOf edges; make sure each reachable one
    # has a result even in conditional mode (where nothing deduces from it).
    for node_id in sorted(graph.reachable_from(root)):
        node = graph.node(node_id)
        if node.kind in ASSESSED_KINDS:
            evaluator.result(node_id)

    order = _display_order(graph, root, evaluator.results)
    return Assessment(
        scenario=scenario,
        results=dict(evaluator.results),
        settings=settings,
        warnings=tuple(report.warnings) + tuple(resolved.warnings),
        display_order=order,
        root_id=root,
    )


def _check_assignable(graph: ArgumentGraph, node_id: str) -> None:
    if node_id not in graph:
        raise UnknownNode(f"unknown node {node_id!r}")
    node = graph.node(node_id)
    if node.kind not in (NodeKind.GOAL, NodeKind.SOLUTION, NodeKind.ASSUMPTION) \
            or graph.supporters(node_id):
        raise InvalidAssignment(
            "only input nodes (solutions, assumptions, or goals without "
            "supporters) accept opinions", locus=node_id,
        )


def _display_order(graph: ArgumentGraph, root: str,
                   results: Mapping[str, NodeResult]) -> tuple[str, ...]:
    # Root first, then goals, strategies, solutions, assumptions in
    # declaration order: mirrors the usual top-level-down reading.
    buckets: dict[NodeKind, list[str]] = {k: [] for k in ASSESSED_KINDS}
    for node in graph.nodes:
        if node.id != root and node.id in results:
            buckets.setdefault(node.kind, []).append(node.id)
    order = [root]
    for kind in ASSESSED_KINDS:
        order.extend(buckets.get(kind, ()))
    return tuple(order)


class _Evaluator:
    def __init__(self, graph: ArgumentGraph, resolved: ResolvedArgument,
                 settings: Settings, assignments: Mapping[str, Opinion]) -> None:
        self.graph = graph
        self.resolved = resolved
        self.settings = settings
        self.assignments = assignments
        self.results: dict[str, NodeResult] = {}
        # assumption id -> node id where it was marginalized
        self._consumption: dict[str, dict[str, str]] = {}

    # -- publication policy ------------------------------------------------

    def _publish(self, opinion: Opinion) -> Opinion:
        if self.settings.aggregate_base_rate == "default-reset":
            return opinion.with_base_rate(self.settings.default_base_rate)
        return opinion

    # -- evaluation --------------------------------------------------------

    def result(self, node_id: str) -> NodeResult:
        if node_id in self.results:
            return self.results[node_id]
        node = self.graph.node(node_id)
        try:
            if node.kind is NodeKind.STRATEGY:
                result = self._eval_strategy(node)
            elif self.graph.supporters(node_id):
                result = self._eval_derived_goal(node)
            else:
                result = self._eval_leaf(node)
            result = self._apply_contexts(node, result)
        except OpinionError as exc:
            raise EngineError(str(exc), locus=node_id) from exc
        self.results[node_id] = result
        return result

    def _eval_leaf(self, node: ArgNode) -> NodeResult:
        if node.id in self.assignments:
            opinion = self.assignments[node.id]
            step = ProvenanceStep("input", (), opinion, {"source": "assignment"})
        elif node.input is not None:
            opinion = resolve_source(node.input, self.settings)
            step = ProvenanceStep("input", (), opinion, {"source": "node"})
        else:
            opinion = Opinion.vacuous(self.settings.default_base_rate)
            step = ProvenanceStep("default-vacuous", (), opinion)
        return NodeResult(node.id, opinion, provenance=step)

    def _eval_strategy(self, node: ArgNode) -> NodeResult:
        children = [self.result(child) for child in self.graph.supporters(node.id)]
        context_set, consumed = self._merge_context_info(children, node.id)
        if len(children) == 1:
            child = children[0]
            step = ProvenanceStep("passthrough", (child.node_id,), child.opinion)
            opinion = child.opinion
        else:
            pattern = self.resolved.patterns[node.id]
            opinion, step = self._fold(children, pattern)
            opinion = self._publish(opinion)
            step = ProvenanceStep(step.operator, step.operands, opinion, step.params)
        return NodeResult(node.id, opinion, context_set, consumed, step)

    def _eval_derived_goal(self, node: ArgNode) -> NodeResult:
        site = self.resolved.site(node.id)
        assert site is not None
        if site.strategy_id is not None:
            antecedent_result = self.result(site.strategy_id)
            antecedent = antecedent_result.opinion
            operand: ProvenanceStep | str = site.strategy_id
            children = [antecedent_result]
        else:
            children = [self.result(child) for child in site.operand_ids]
            if len(children) == 1:
                antecedent = children[0].opinion
                operand = children[0].node_id
            else:
                folded, fold_step = self._fold(children, self.resolved.patterns[node.id])
                antecedent = self._publish(folded)
                operand = ProvenanceStep(
                    fold_step.operator, fold_step.operands, antecedent, fold_step.params
                )
        context_set, consumed = self._merge_context_info(children, node.id)

        opinion = self._publish(deduce(antecedent, site.pair,
                                       self.settings.default_base_rate))
        internals = deduction_internals(antecedent, site.pair,
                                        self.settings.default_base_rate)
        step = ProvenanceStep("deduce", (operand,), opinion, internals)
        return NodeResult(node.id, opinion, context_set, consumed, step)

    # -- folds ---------------------------------------------------------------

    def _fold(self, children: list[NodeResult],
              pattern: Pattern) -> tuple[Opinion, ProvenanceStep]:
        opinions = [c.opinion for c in children]
        params: dict[str, Any] = {"pattern": pattern.kind.value}
        if pattern.kind is PatternKind.CONJUNCTION:
            folded = reduce(multiply, opinions)
        elif pattern.kind is PatternKind.DISJUNCTION:
            folded = reduce(comultiply, opinions)
        else:
            gamma = self.settings.dogmatic_gamma if pattern.gamma is None else pattern.gamma
            mode = FusionMode(pattern.kind.value.removeprefix("fusion-"), gamma)
            folded = reduce(lambda x, y: fuse(x, y, mode), opinions)
            params["gamma"] = gamma
        step = ProvenanceStep(
            _FOLD_OPERATORS[pattern.kind],
            tuple(c.node_id for c in children),
            folded,
            params,
        )
        return folded, step

    # -- context handling ----------------------------------------------------

    def _merge_context_info(
        self, children: list[NodeResult], locus: str
    ) -> tuple[frozenset[str], frozenset[str]]:
        context_set: set[str] = set()
        merged_sites: dict[str, str] = {}
        for child in children:
            context_set |= child.context_set
            child_sites = self._consumption.get(child.node_id, {})
            for assumption_id, site in child_sites.items():
                prior = merged_sites.get(assumption_id)
                if prior is not None and prior != site:
                    raise ContextReuse(
                        f"assumption {assumption_id!r} marginalized in two branches "
                        f"(at {prior!r} and {site!r})", locus=locus,
                    )
                merged_sites[assumption_id] = site
        self._consumption[locus] = merged_sites
        return frozenset(context_set), frozenset(merged_sites)

    def _apply_contexts(self, node: ArgNode, result: NodeResult) -> NodeResult:
        edges = [
            e for e in self.graph.context_edges(node.id)
            if self.graph.node(e.target).kind is NodeKind.ASSUMPTION
        ]
        if not edges:
            return result
        assumption_results = [self.result(e.target) for e in edges]
        assumption_ids = tuple(r.node_id for r in assumption_results)

        if self.settings.context_mode == "conditional":
            return NodeResult(
                node_id=result.node_id,
                opinion=result.opinion,
                context_set=result.context_set | set(assumption_ids),
                consumed_contexts=result.consumed_contexts,
                provenance=result.provenance,
            )

        sites = self._consumption.setdefault(node.id, {})
        for assumption_id in assumption_ids:
            if assumption_id in sites:
                raise ContextReuse(
                    f"assumption {assumption_id!r} was already marginalized at "
                    f"{sites[assumption_id]!r} and must not be consumed again upstream",
                    locus=node.id,
                )

        framed = result.opinion
        if len(assumption_results) == 1:
            antecedent = assumption_results[0].opinion
            antecedent_ref: tuple[ProvenanceStep | str, ...] = (assumption_ids[0],)
        else:
            antecedent = reduce(multiply, (r.opinion for r in assumption_results))
            antecedent_ref = (ProvenanceStep(
                "multiply", assumption_ids, antecedent, {"role": "conjoined-assumptions"},
            ),)

        conditionals = edges[0].conditionals if len(edges) == 1 else None
        pair = _context_pair(conditionals, framed, self.settings)
        opinion = deduce(antecedent, pair, self.settings.default_base_rate)
        internals = deduction_internals(antecedent, pair, self.settings.default_base_rate)

        for assumption_id in assumption_ids:
            sites[assumption_id] = node.id
        step = ProvenanceStep(
            "marginalize",
            antecedent_ref + (result.provenance or result.node_id,),
            opinion,
            {**internals, "consumed": ",".join(assumption_ids)},
        )
        return NodeResult(
            node_id=result.node_id,
            opinion=opinion,
            context_set=result.context_set,
            consumed_contexts=result.consumed_contexts | set(assumption_ids),
            provenance=step,
            framed=framed,
            framed_contexts=assumption_ids,
        )


def _context_pair(conditionals: EdgeConditionals | None, framed: Opinion,
                  settings: Settings) -> ConditionalPair:
    """Conditional pair for consuming an assumption into a framed claim.

    The positive conditional defaults to the claim's computed conditional
    opinion and then carries that opinion's base rate as the consequent
    base rate; the negative conditional defaults to full disbelief (the
    assumption is treated as necessary).
    """
    pos = neg = None
    base_rate = None
    if conditionals is not None:
        pos, neg, base_rate = conditionals.pos, conditionals.neg, conditionals.base_rate
    if base_rate is None and pos is None:
        base_rate = framed.a
    if pos is None:
        pos = framed
    if neg is None:
        neg = Opinion(0.0, 1.0, 0.0, settings.default_base_rate)
    return ConditionalPair(pos, neg, base_rate)


# --------------------------------------------------------------------------
# Provenance rendering
# --------------------------------------------------------------------------

def explain(assessment: Assessment, node_id: str) -> str:
    """Depth-first rendering of how a node's opinion was computed."""
    precision = assessment.settings.display_precision
    lines: list[str] = []
    rendered: set[str] = set()

    def fmt(o: Opinion) -> str:
        return display_opinion(o, precision)

    def fmt_params(params: Mapping[str, Any]) -> str:
        if not params:
            return ""
        parts = []
        for key, value in params.items():
            if isinstance(value, float):
                parts.append(f"{key}={value:.5g}")
            else:
                parts.append(f"{key}={value}")
        return " [" + ", ".join(parts) + "]"

    def operand_names(step: ProvenanceStep) -> str:
        names = []
        for op in step.operands:
            names.append(op if isinstance(op, str) else f"<{op.operator}>")
        return ", ".join(names)

    def render_step(step: ProvenanceStep, depth: int) -> None:
        indent = "  " * depth
        lines.append(
            f"{indent}{step.operator}({operand_names(step)})"
            f"{fmt_params(step.params)} -> {fmt(step.opinion)}"
        )
        for op in step.operands:
            if isinstance(op, ProvenanceStep):
                render_step(op, depth + 1)
            else:
                render_node(op, depth + 1)

    def render_node(nid: str, depth: int) -> None:
        indent = "  " * depth
        result = assessment.result(nid)
        if nid in rendered:
            lines.append(f"{indent}{nid} = {fmt(result.opinion)} (shown above)")
            return
        rendered.add(nid)
        lines.append(f"{indent}{assessment.label(nid)} = {fmt(result.opinion)}")
        if result.provenance is not None:
            render_step(result.provenance, depth + 1)

    render_node(node_id, 0)
    return "\n".join(lines)
