"""Scenario comparison, sweeps, and plot-data exports."""

from __future__ import annotations

import json

import pytest

from beliefcase import (
    EngineError,
    Opinion,
    SweepSpec,
    UnknownNode,
    assess,
    compare_scenarios,
    export_beta_curve,
    export_triangle,
    parse_document,
    serialize_document,
    sweep,
)
from beliefcase.analysis import trapezoid_mass


class TestCompareScenarios:
    def test_corpus_table_layout(self, corpus_document):
        table = compare_scenarios(corpus_document)
        assert table.scenarios == ("full-uncertainty", "full-confidence", "partial")
        labels = [row.label for row in table.rows]
        assert labels[0] == "G1"
        assert labels[1] == "G1 | A1"
        assert "G7" in labels

    def test_cells_match_independent_assessments(self, corpus_document):
        table = compare_scenarios(corpus_document)
        for i, name in enumerate(table.scenarios):
            independent = assess(corpus_document, name)
            for row in table.rows:
                if row.framed:
                    assert row.opinions[i] == independent.result(row.node_id).framed
                else:
                    assert row.opinions[i] == independent.opinion(row.node_id)

    def test_single_scenario_document(self, corpus_document):
        data = json.loads(serialize_document(corpus_document, fmt="json"))
        data["scenarios"] = {"partial": data["scenarios"]["partial"]}
        reduced = parse_document(json.dumps(data))
        table = compare_scenarios(reduced)
        assert table.scenarios == ("partial",)
        assert all(len(row.opinions) == 1 for row in table.rows)

    def test_no_scenarios_rejected(self, corpus_document):
        data = json.loads(serialize_document(corpus_document, fmt="json"))
        del data["scenarios"]
        bare = parse_document(json.dumps(data))
        with pytest.raises(EngineError):
            compare_scenarios(bare)


class TestSweep:
    def test_row_count_and_grid(self, corpus_document):
        spec = SweepSpec(node="A1", steps=11, scenario="partial")
        rows = sweep(corpus_document, spec)
        assert len(rows) == 11
        assert rows[0].t == 0.0 and rows[-1].t == 1.0
        assert rows[5].t == pytest.approx(0.5)

    def test_belief_tradeoff_endpoints(self, corpus_document):
        spec = SweepSpec(node="A1", mode="belief-tradeoff", steps=11, u_fix=0.0,
                         scenario="partial")
        rows = sweep(corpus_document, spec)
        assert rows[-1].injected == Opinion(1.0, 0.0, 0.0, 0.5)
        assert rows[0].injected == Opinion(0.0, 1.0, 0.0, 0.5)
        # t = 1 is full belief in the assumption: the scenario's own value
        direct = assess(corpus_document, "partial")
        assert rows[-1].observed["G1"] == direct.opinion("G1")
        # t = 0 is a dogmatic-false assumption: the negative conditional
        o = rows[0].observed["G1"]
        assert (o.b, o.d, o.u) == (0.0, 1.0, 0.0)

    def test_belief_tradeoff_projection_monotone(self, corpus_document):
        spec = SweepSpec(node="A1", steps=21, scenario="partial")
        rows = sweep(corpus_document, spec)
        projections = [row.observed["G1"].projection for row in rows]
        assert all(a <= b + 1e-12 for a, b in zip(projections, projections[1:]))

    def test_uncertainty_mode(self, corpus_document):
        spec = SweepSpec(node="Sn1", mode="uncertainty", steps=5,
                         belief_share=1.0, scenario="partial")
        rows = sweep(corpus_document, spec)
        assert rows[0].injected == Opinion(1.0, 0.0, 0.0, 0.5)
        assert rows[-1].injected == Opinion(0.0, 0.0, 1.0, 0.5)

    def test_evidence_mode(self, corpus_document):
        spec = SweepSpec(node="Sn1", mode="evidence", steps=3, r_max=8.0,
                         scenario="partial")
        rows = sweep(corpus_document, spec)
        assert rows[0].injected == Opinion(0.0, 0.0, 1.0, 0.5)
        # r = 8, s = 0, W = 2 maps to (0.8, 0, 0.2)
        assert rows[-1].injected.b == pytest.approx(0.8, abs=1e-12)
        assert rows[-1].injected.u == pytest.approx(0.2, abs=1e-12)

    def test_observes_default_root_and_explicit_nodes(self, corpus_document):
        rows = sweep(corpus_document, SweepSpec(node="A1", steps=2))
        assert set(rows[0].observed) == {"G1"}
        rows = sweep(corpus_document,
                     SweepSpec(node="Sn1", steps=2, observe=("G4", "G2")))
        assert set(rows[0].observed) == {"G4", "G2"}

    def test_unknown_target(self, corpus_document):
        with pytest.raises(UnknownNode):
            sweep(corpus_document, SweepSpec(node="Ghost", steps=2))

    def test_bad_spec_rejected(self):
        with pytest.raises(ValueError):
            SweepSpec(node="A1", steps=1)
        with pytest.raises(ValueError):
            SweepSpec(node="A1", mode="wiggle")
        with pytest.raises(ValueError):
            SweepSpec(node="A1", u_fix=1.5)


class TestBetaCurves:
    def test_vacuous_node_is_flat(self, corpus_document):
        assessment = assess(corpus_document, "full-uncertainty")
        curve = export_beta_curve(assessment, "G5", samples=201)
        assert curve.point_mass is None
        assert all(s.density == pytest.approx(1.0, abs=1e-12) for s in curve.samples)
        assert trapezoid_mass(curve) == pytest.approx(1.0, abs=1e-9)

    def test_strong_belief_curve(self, corpus_document):
        assessment = assess(corpus_document, "partial")
        curve = export_beta_curve(assessment, "Sn1", samples=512)
        # (0.9, 0, 0.1) with W=2: alpha = 19, beta = 1, rising toward p=1
        assert curve.shape.alpha == pytest.approx(19.0, abs=1e-9)
        assert curve.shape.beta == pytest.approx(1.0, abs=1e-9)
        densities = [s.density for s in curve.samples]
        assert densities[-1] == max(densities)
        assert trapezoid_mass(curve) == pytest.approx(1.0, abs=1e-3)

    def test_dogmatic_node_yields_point_mass(self, corpus_document):
        assessment = assess(corpus_document, "full-confidence")
        curve = export_beta_curve(assessment, "Sn1")
        assert curve.point_mass == 1.0
        assert curve.samples == ()
        assert curve.shape is None

    def test_sample_count_and_range(self, corpus_document):
        assessment = assess(corpus_document, "partial")
        curve = export_beta_curve(assessment, "G1", samples=256)
        assert len(curve.samples) == 256
        assert curve.samples[0].p == 0.0 and curve.samples[-1].p == 1.0

    def test_projection_companion(self, corpus_document):
        assessment = assess(corpus_document, "partial")
        curve = export_beta_curve(assessment, "G1")
        assert curve.projection == assessment.opinion("G1").projection

    def test_unknown_node(self, corpus_document):
        assessment = assess(corpus_document, "partial")
        with pytest.raises(UnknownNode):
            export_beta_curve(assessment, "Ghost")

    def test_random_curves_carry_unit_mass(self):
        """Emitted samples trapezoid-integrate to 1 within 1e-3.

        Scope: even base rate, W = 2, u >= 0.05, and committed masses at
        least u/2 so both Beta shape parameters are >= 2.  That keeps the
        density continuously differentiable with bounded curvature; a
        shape parameter inside (1, 2) puts an unbounded slope at an
        endpoint and needs far more than a few hundred samples.
        """
        import random

        document = parse_document("""
version: "1"
settings:
  default_conditionals:
    pos: {b: 0.95, d: 0.0, u: 0.05}
    neg: {b: 0.0, d: 1.0, u: 0.0}
nodes:
  - {id: G, kind: goal}
  - {id: Sn, kind: solution}
edges:
  - {source: G, target: Sn, kind: supportedBy}
""")
        rng = random.Random(2024)
        produced = 0
        while produced < 25:
            b = rng.random()
            d = rng.random() * (1.0 - b)
            u = 1.0 - b - d
            if u < 0.05 or b < u / 2 or d < u / 2:
                continue
            produced += 1
            assessment = assess(document,
                                injections={"Sn": Opinion(b, d, u, 0.5)})
            curve = export_beta_curve(assessment, "Sn", samples=512)
            assert trapezoid_mass(curve) == pytest.approx(1.0, abs=1e-3)


class TestTriangle:
    def test_partial_scenario_inputs(self, corpus_document):
        assessment = assess(corpus_document, "partial")
        points = {p.label: p for p in export_triangle(assessment)}
        sn1 = points["Sn1"]
        assert (sn1.b, sn1.d, sn1.u) == pytest.approx((0.9, 0.0, 0.1), abs=1e-12)
        sn3 = points["Sn3"]
        assert (sn3.b, sn3.d, sn3.u) == pytest.approx((0.6, 0.3, 0.1), abs=1e-12)
        g5 = points["G5"]
        assert (g5.b, g5.d, g5.u) == (0.0, 0.0, 1.0)

    def test_explicit_node_selection(self, corpus_document):
        assessment = assess(corpus_document, "partial")
        points = export_triangle(assessment, ("G1", "G2"))
        assert [p.label for p in points] == ["G1", "G2"]
