"""Command-line interface.

Subcommands: ``validate``, ``assess``, ``scenarios``, ``sweep``,
``beta``, ``triangle``.  Exit codes: 0 success, 1 validation failure,
2 I/O or parse error, 3 assessment/numeric error, 4 usage error.

Identical invocations produce identical bytes on stdout; warnings and
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, Sequence

from .analysis import (
    BetaCurve,
    ComparisonTable,
    SweepSpec,
    compare_scenarios,
    export_beta_curve,
    export_triangle,
    sweep,
)
from .documents import Document, load_document
from .engine import Assessment, assess, explain
from .errors import (
    BeliefcaseError,
    DocumentError,
    EngineError,
    OpinionError,
    ValidationFailed,
)
from .opinions import Opinion, display_opinion

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_ASSESSMENT = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _g(value: float) -> str:
    return f"{value:.12g}"


def _display(o: Opinion, precision: int) -> str:
    return display_opinion(o, precision)


def _opinion_json(o: Opinion, precision: int) -> dict[str, Any]:
    return {
        "b": o.b, "d": o.d, "u": o.u, "a": o.a,
        "projection": o.projection,
        "display": _display(o, precision),
    }


def _print_warnings(assessment_warnings, quiet: bool) -> None:
    if quiet:
        return
    for issue in assessment_warnings:
        print(f"warning {issue.render()}", file=sys.stderr)


def _precision(args: argparse.Namespace, document: Document) -> int:
    if args.precision is not None:
        return args.precision
    return document.settings.display_precision


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        document = load_document(args.file)
    except ValidationFailed as exc:
        print(exc.report.render())
        return EXIT_VALIDATION
    print(document.validation.render())
    return EXIT_OK


def _assessment_rows(assessment: Assessment, node_ids: Sequence[str] | None):
    """(label, opinion, result, framed) display rows."""
    order = node_ids if node_ids else assessment.display_order
    rows = []
    for node_id in order:
        result = assessment.result(node_id)
        rows.append((assessment.label(node_id), result.opinion, result, False))
        if result.framed is not None and not node_ids:
            rows.append((Assessment.framed_label(result), result.framed, result, True))
    return rows


def _cmd_assess(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    overrides = {}
    if args.context_mode:
        overrides["context_mode"] = args.context_mode
    assessment = assess(document, args.scenario, overrides or None)
    precision = _precision(args, document)
    _print_warnings(assessment.warnings, args.quiet)

    rows = _assessment_rows(assessment, args.node)
    if args.format == "table":
        for label, opinion, _result, _framed in rows:
            print(f"{label}: {_display(opinion, precision)}")
    elif args.format == "json":
        payload = {
            "scenario": assessment.scenario,
            "context_mode": assessment.settings.context_mode,
            "nodes": [
                {
                    "id": result.node_id,
                    "label": label,
                    "framed": framed,
                    "opinion": _opinion_json(opinion, precision),
                    "context": sorted(result.context_set),
                    "consumed": sorted(result.consumed_contexts),
                }
                for label, opinion, result, framed in rows
            ],
        }
        print(json.dumps(payload, indent=2))
    else:  # csv
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["node", "b", "d", "u", "projection"])
        for label, opinion, _result, _framed in rows:
            writer.writerow([label, _g(opinion.b), _g(opinion.d), _g(opinion.u),
                             _g(opinion.projection)])
    if args.explain:
        print()
        print(explain(assessment, args.explain))
    return EXIT_OK


def _cmd_scenarios(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    table = compare_scenarios(document)
    precision = _precision(args, document)
    if args.format == "table":
        _print_comparison(table, precision)
    elif args.format == "json":
        payload = {
            "scenarios": list(table.scenarios),
            "rows": [
                {
                    "label": row.label,
                    "node": row.node_id,
                    "framed": row.framed,
                    "opinions": {
                        name: _opinion_json(o, precision)
                        for name, o in zip(table.scenarios, row.opinions)
                    },
                }
                for row in table.rows
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["node", "scenario", "b", "d", "u", "projection"])
        for row in table.rows:
            for name, o in zip(table.scenarios, row.opinions):
                writer.writerow([row.label, name, _g(o.b), _g(o.d), _g(o.u),
                                 _g(o.projection)])
    return EXIT_OK


def _print_comparison(table: ComparisonTable, precision: int) -> None:
    header = ["node", *table.scenarios]
    cells = [
        [row.label, *(_display(o, precision) for o in row.opinions)]
        for row in table.rows
    ]
    widths = [max(len(header[i]), *(len(line[i]) for line in cells))
              for i in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for line in cells:
        print("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip())


def _cmd_sweep(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    spec = SweepSpec(
        node=args.node,
        mode=args.mode,
        steps=args.steps,
        u_fix=args.fix_u,
        belief_share=args.belief_share,
        r_max=args.r_max,
        s_fix=args.fix_s,
        observe=tuple(args.observe or ()),
        scenario=args.scenario,
    )
    rows = sweep(document, spec)
    if args.format == "json":
        payload = [
            {
                "t": row.t,
                "injected": {"b": row.injected.b, "d": row.injected.d,
                             "u": row.injected.u, "a": row.injected.a},
                "observed": {
                    node_id: {"b": o.b, "d": o.d, "u": o.u,
                              "projection": o.projection}
                    for node_id, o in row.observed.items()
                },
            }
            for row in rows
        ]
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["t", "b_in", "d_in", "u_in", "node", "b", "d", "u", "projection"])
    for row in rows:
        for node_id, o in row.observed.items():
            writer.writerow([
                _g(row.t), _g(row.injected.b), _g(row.injected.d), _g(row.injected.u),
                node_id, _g(o.b), _g(o.d), _g(o.u), _g(o.projection),
            ])
    return EXIT_OK


def _cmd_beta(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    assessment = assess(document, args.scenario)
    curve = export_beta_curve(assessment, args.node, args.samples)
    if args.format == "json":
        print(json.dumps(_curve_json(curve), indent=2))
        return EXIT_OK
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["p", "density"])
    for sample in curve.samples:
        writer.writerow([_g(sample.p), _g(sample.density)])
    if curve.point_mass is not None:
        print(f"# point-mass p={_g(curve.point_mass)}")
    return EXIT_OK


def _curve_json(curve: BetaCurve) -> dict[str, Any]:
    return {
        "node": curve.node_id,
        "projection": curve.projection,
        "shape": None if curve.shape is None else
            {"alpha": curve.shape.alpha, "beta": curve.shape.beta},
        "point_mass": curve.point_mass,
        "samples": [{"p": s.p, "density": s.density} for s in curve.samples],
    }


def _cmd_triangle(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    assessment = assess(document, args.scenario)
    points = export_triangle(assessment, tuple(args.node) if args.node else None)
    if args.format == "json":
        payload = [
            {"node": p.label, "b": p.b, "d": p.d, "u": p.u, "projection": p.projection}
            for p in points
        ]
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["node", "b", "d", "u", "projection"])
    for p in points:
        writer.writerow([p.label, _g(p.b), _g(p.d), _g(p.u), _g(p.projection)])
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="display precision (defaults to document settings)")
    common.add_argument("--quiet", action="store_true", help="suppress warnings")

    parser = _Parser(prog="beliefcase",
                     description="Propagate confidence opinions through an "
                                 "assurance argument.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common],
                       help="structurally validate a document")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("assess", parents=[common],
                       help="propagate opinions and print per-node results")
    p.add_argument("file")
    p.add_argument("--scenario", default=None)
    p.add_argument("--context-mode", choices=["conditional", "marginalize"],
                   default=None)
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.add_argument("--node", action="append", help="limit output to these nodes")
    p.add_argument("--explain", metavar="ID", default=None,
                   help="print the provenance tree of a node")
    p.set_defaults(func=_cmd_assess)

    p = sub.add_parser("scenarios", parents=[common],
                       help="compare all named scenarios side by side")
    p.add_argument("file")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.set_defaults(func=_cmd_scenarios)

    p = sub.add_parser("sweep", parents=[common],
                       help="inject a swept opinion at a node and re-assess")
    p.add_argument("file")
    p.add_argument("--node", required=True)
    p.add_argument("--mode", choices=["belief-tradeoff", "uncertainty", "evidence"],
                   default="belief-tradeoff")
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--fix-u", type=float, default=0.0, dest="fix_u",
                   help="fixed uncertainty for belief-tradeoff mode")
    p.add_argument("--belief-share", type=float, default=1.0, dest="belief_share",
                   help="share of committed mass that is belief (uncertainty mode)")
    p.add_argument("--r-max", type=float, default=20.0, dest="r_max",
                   help="positive evidence at t=1 (evidence mode)")
    p.add_argument("--fix-s", type=float, default=0.0, dest="fix_s",
                   help="fixed negative evidence (evidence mode)")
    p.add_argument("--observe", action="append",
                   help="node(s) to record (default: the root goal)")
    p.add_argument("--scenario", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("beta", parents=[common],
                       help="export the Beta density curve of a node opinion")
    p.add_argument("file")
    p.add_argument("--node", required=True)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--scenario", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_beta)

    p = sub.add_parser("triangle", parents=[common],
                       help="export opinion-triangle coordinates")
    p.add_argument("file")
    p.add_argument("--scenario", default=None)
    p.add_argument("--node", action="append", help="limit to these nodes")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_triangle)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ValidationFailed as exc:
        print(exc.report.render(), file=sys.stderr)
        return EXIT_VALIDATION
    except (DocumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EngineError, OpinionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ASSESSMENT
    except BeliefcaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSESSMENT


if __name__ == "__main__":
    sys.exit(main())
