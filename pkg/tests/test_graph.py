"""Structural validation and pattern resolution."""

from __future__ import annotations

import pytest

from beliefcase import (
    ArgEdge,
    ArgNode,
    ArgumentGraph,
    ConditionalPair,
    EdgeConditionals,
    EdgeKind,
    MissingPattern,
    NodeKind,
    Opinion,
    Pattern,
    PatternKind,
    Settings,
    resolve_patterns,
    validate_argument,
)
from beliefcase.graph import DirectSource

PAIR = ConditionalPair(Opinion(0.95, 0.0, 0.05), Opinion(0.0, 1.0, 0.0))
SETTINGS = Settings(default_conditionals=PAIR)


def goal(node_id: str, **kwargs) -> ArgNode:
    return ArgNode(node_id, NodeKind.GOAL, **kwargs)


def solution(node_id: str) -> ArgNode:
    return ArgNode(node_id, NodeKind.SOLUTION)


def supported(source: str, target: str, conditionals=None) -> ArgEdge:
    return ArgEdge(source, target, EdgeKind.SUPPORTED_BY, conditionals)


def codes(issues) -> set[str]:
    return {i.code for i in issues}


def two_node_graph() -> ArgumentGraph:
    return ArgumentGraph(
        (goal("G"), solution("Sn")), (supported("G", "Sn"),)
    )


class TestValidation:
    def test_clean_two_node_argument(self):
        report = validate_argument(two_node_graph(), SETTINGS)
        assert report.ok
        assert not report.warnings

    def test_corpus_is_clean(self, corpus_document):
        report = validate_argument(corpus_document.graph, corpus_document.settings)
        assert report.ok and not report.warnings

    def test_cycle_detected(self):
        g = ArgumentGraph(
            (goal("G1"), goal("G2"), solution("Sn")),
            (supported("G1", "G2"), supported("G2", "G1"), supported("G2", "Sn")),
        )
        report = validate_argument(g, SETTINGS)
        assert "CYCLE" in codes(report.errors)

    def test_duplicate_id(self):
        g = ArgumentGraph((goal("G"), goal("G"), solution("Sn")),
                          (supported("G", "Sn"),))
        report = validate_argument(g, SETTINGS)
        assert "DUPLICATE_ID" in codes(report.errors)

    def test_dangling_edge(self):
        g = ArgumentGraph((goal("G"),), (supported("G", "Nowhere"),))
        report = validate_argument(g, SETTINGS)
        assert "DANGLING_EDGE" in codes(report.errors)

    def test_multiple_roots(self):
        g = ArgumentGraph(
            (goal("G1"), goal("G2"), solution("Sn")),
            (supported("G1", "Sn"), supported("G2", "Sn")),
        )
        report = validate_argument(g, SETTINGS)
        assert "MULTIPLE_ROOTS" in codes(report.errors)

    def test_missing_conditionals(self):
        report = validate_argument(two_node_graph(), Settings())
        assert "MISSING_CONDITIONALS" in codes(report.errors)

    def test_explicit_edge_conditionals_suffice(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn")),
            (supported("G", "Sn", EdgeConditionals(PAIR.pos, PAIR.neg)),),
        )
        assert validate_argument(g, Settings()).ok

    def test_partial_support_conditionals_rejected(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn")),
            (supported("G", "Sn", EdgeConditionals(pos=PAIR.pos)),),
        )
        report = validate_argument(g, Settings())
        assert "MISSING_CONDITIONALS" in codes(report.errors)

    def test_shared_evidence_diamond_warns(self):
        g = ArgumentGraph(
            (goal("G"), goal("G2"), goal("G3"), solution("Sn"),
             ArgNode("S", NodeKind.STRATEGY, pattern=Pattern(PatternKind.CONJUNCTION))),
            (supported("G", "S"), supported("S", "G2"), supported("S", "G3"),
             supported("G2", "Sn"), supported("G3", "Sn")),
        )
        report = validate_argument(g, SETTINGS)
        assert report.ok
        dependent = [i for i in report.warnings if i.code == "DEPENDENT_SUPPORT"]
        assert [i.locus for i in dependent] == ["Sn"]

    def test_input_on_strategy_rejected(self):
        g = ArgumentGraph(
            (goal("G"), ArgNode("S", NodeKind.STRATEGY, input=DirectSource(1, 0, 0)),
             solution("Sn")),
            (supported("G", "S"), supported("S", "Sn")),
        )
        report = validate_argument(g, SETTINGS)
        assert "INPUT_NOT_ALLOWED" in codes(report.errors)

    def test_pattern_arity(self):
        g = ArgumentGraph(
            (goal("G", pattern=Pattern(PatternKind.CONJUNCTION)), solution("Sn")),
            (supported("G", "Sn"),),
        )
        report = validate_argument(g, SETTINGS)
        assert "PATTERN_ARITY" in codes(report.errors)

    def test_implicit_pattern_warning(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn1"), solution("Sn2")),
            (supported("G", "Sn1"), supported("G", "Sn2")),
        )
        report = validate_argument(g, SETTINGS)
        assert report.ok
        assert "IMPLICIT_PATTERN" in codes(report.warnings)

    def test_implicit_pattern_disabled_is_error(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn1"), solution("Sn2")),
            (supported("G", "Sn1"), supported("G", "Sn2")),
        )
        settings = SETTINGS.replace(allow_implicit_pattern=False)
        assert "MISSING_PATTERN" in codes(validate_argument(g, settings).errors)

    def test_context_edge_kind_constraints(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn"), solution("Sn2")),
            (supported("G", "Sn"), ArgEdge("G", "Sn2", EdgeKind.IN_CONTEXT_OF)),
        )
        report = validate_argument(g, SETTINGS)
        assert "EDGE_TARGET_KIND" in codes(report.errors)

    def test_support_by_assumption_rejected(self):
        g = ArgumentGraph(
            (goal("G"), ArgNode("A", NodeKind.ASSUMPTION)),
            (supported("G", "A"),),
        )
        report = validate_argument(g, SETTINGS)
        assert "EDGE_TARGET_KIND" in codes(report.errors)

    def test_order_independence(self):
        nodes = (goal("G"), solution("Sn1"), solution("Sn2"))
        edges = (supported("G", "Sn1"), supported("G", "Sn2"))
        forward = validate_argument(ArgumentGraph(nodes, edges), SETTINGS)
        backward = validate_argument(
            ArgumentGraph(tuple(reversed(nodes)), tuple(reversed(edges))), SETTINGS
        )
        assert codes(forward.errors) == codes(backward.errors)
        assert codes(forward.warnings) == codes(backward.warnings)


class TestPatternResolution:
    def test_corpus_patterns(self, corpus_document):
        resolved = resolve_patterns(corpus_document.graph, corpus_document.settings)
        assert resolved.patterns["S1"].kind is PatternKind.CONJUNCTION
        assert resolved.patterns["S2"].kind is PatternKind.FUSION_CUMULATIVE
        assert resolved.patterns["S3"].kind is PatternKind.DISJUNCTION
        assert not resolved.warnings

    def test_corpus_sites(self, corpus_document):
        resolved = resolve_patterns(corpus_document.graph, corpus_document.settings)
        site = resolved.site("G2")
        assert site.strategy_id == "S2"
        assert site.operand_ids == ("G4", "G5")
        assert site.pair.pos.b == 0.95
        one_to_one = resolved.site("G4")
        assert one_to_one.strategy_id is None
        assert one_to_one.operand_ids == ("Sn1",)
        assert one_to_one.pattern is None

    def test_implicit_pattern_applied_with_warning(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn1"), solution("Sn2")),
            (supported("G", "Sn1"), supported("G", "Sn2")),
        )
        resolved = resolve_patterns(g, SETTINGS)
        assert resolved.patterns["G"].kind is PatternKind.CONJUNCTION
        assert [w.code for w in resolved.warnings] == ["IMPLICIT_PATTERN"]

    def test_resolution_is_idempotent(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn1"), solution("Sn2")),
            (supported("G", "Sn1"), supported("G", "Sn2")),
        )
        first = resolve_patterns(g, SETTINGS)
        second = resolve_patterns(first.graph, SETTINGS)
        assert not second.warnings  # implicit pattern now explicit
        assert second.sites == first.sites
        assert second.graph == first.graph

    def test_missing_pattern_raises_when_disabled(self):
        g = ArgumentGraph(
            (goal("G"), solution("Sn1"), solution("Sn2")),
            (supported("G", "Sn1"), supported("G", "Sn2")),
        )
        with pytest.raises(MissingPattern):
            resolve_patterns(g, SETTINGS.replace(allow_implicit_pattern=False))

    def test_explicit_annotation_wins(self):
        g = ArgumentGraph(
            (goal("G", pattern=Pattern(PatternKind.DISJUNCTION)),
             solution("Sn1"), solution("Sn2")),
            (supported("G", "Sn1"), supported("G", "Sn2")),
        )
        resolved = resolve_patterns(g, SETTINGS)
        assert resolved.patterns["G"].kind is PatternKind.DISJUNCTION
        assert not resolved.warnings
