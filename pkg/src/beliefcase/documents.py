"""Argument document format: parsing, validation and serialization.

Documents are JSON or YAML (isomorphic structure)::

    {
      "version": "1",
      "settings": { ... },
      "nodes":  [{"id", "kind", "statement"?, "opinion"?, "pattern"?}, ...],
      "edges":  [{"source", "target", "kind", "conditionals"?}, ...],
      "scenarios": {"name": {"nodeId": <opinion source>, ...}, ...}
    }

An opinion source is one of three spellings::

    {"b": .., "d": .., "u": .., "a"?: ..}
    {"evidence": {"r": .., "s": .., "W"?: .., "a"?: ..}}
    {"qualitative": "<level>"}

Unknown fields are rejected with their path; structural problems are
reported through the full :class:`~beliefcase.graph.ValidationReport`.
Parsing never crashes on malformed input: every failure is a typed
error carrying a locus.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping

import yaml

from .errors import DocumentSyntaxError, SchemaError, ValidationFailed
from .graph import (
    ArgEdge,
    ArgNode,
    ArgumentGraph,
    DirectSource,
    EdgeConditionals,
    EdgeKind,
    EvidenceSource,
    Issue,
    NodeKind,
    OpinionSource,
    Pattern,
    PatternKind,
    QualitativeSource,
    ValidationReport,
    validate_argument,
)
from .opinions import (
    ConditionalPair,
    EvidenceCount,
    Opinion,
    from_evidence,
    validate_opinion,
)

DOCUMENT_VERSION = "1"

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

#: Default mapping from qualitative confidence levels to opinions.
DEFAULT_QUALITATIVE_SCALE: Mapping[str, Opinion] = MappingProxyType({
    "very-high": Opinion(0.90, 0.02, 0.08),
    "high": Opinion(0.80, 0.10, 0.10),
    "medium": Opinion(0.60, 0.20, 0.20),
    "low": Opinion(0.40, 0.40, 0.20),
    "very-low": Opinion(0.20, 0.60, 0.20),
})


@dataclass(frozen=True)
class Settings:
    """Assessment knobs with their document-level defaults."""

    prior_weight: float = 2.0
    default_base_rate: float = 0.5
    context_mode: str = "marginalize"  # or "conditional"
    aggregate_base_rate: str = "default-reset"  # or "composed"
    implicit_pattern: PatternKind = PatternKind.CONJUNCTION
    allow_implicit_pattern: bool = True
    dogmatic_gamma: float = 0.5
    default_conditionals: ConditionalPair | None = None
    qualitative_scale: Mapping[str, Opinion] = field(default=DEFAULT_QUALITATIVE_SCALE)
    display_precision: int = 2

    def __post_init__(self) -> None:
        if self.prior_weight <= 0:
            raise ValueError(f"prior_weight must be > 0, got {self.prior_weight}")
        if not 0.0 <= self.default_base_rate <= 1.0:
            raise ValueError(f"default_base_rate must be in [0, 1], got {self.default_base_rate}")
        if self.context_mode not in ("conditional", "marginalize"):
            raise ValueError(f"unknown context_mode {self.context_mode!r}")
        if self.aggregate_base_rate not in ("default-reset", "composed"):
            raise ValueError(f"unknown aggregate_base_rate {self.aggregate_base_rate!r}")
        if not 0.0 <= self.dogmatic_gamma <= 1.0:
            raise ValueError(f"dogmatic_gamma must be in [0, 1], got {self.dogmatic_gamma}")
        if self.display_precision < 0:
            raise ValueError("display_precision must be >= 0")

    def replace(self, **deltas: Any) -> "Settings":
        """Copy with the given fields changed; unknown names raise."""
        names = {f.name for f in dataclasses.fields(self)}
        unknown = set(deltas) - names
        if unknown:
            raise ValueError(f"unknown settings field(s): {sorted(unknown)}")
        return dataclasses.replace(self, **deltas)


@dataclass(frozen=True)
class Scenario:
    """A named set of input assignments, node id -> opinion source."""

    name: str
    assignments: Mapping[str, OpinionSource]


@dataclass(frozen=True)
class Document:
    version: str
    settings: Settings
    graph: ArgumentGraph
    scenarios: Mapping[str, Scenario]
    validation: ValidationReport = field(default_factory=ValidationReport, compare=False)


def resolve_source(source: OpinionSource, settings: Settings) -> Opinion:
    """Turn a symbolic opinion source into a validated opinion."""
    if isinstance(source, DirectSource):
        a = settings.default_base_rate if source.a is None else source.a
        return validate_opinion(Opinion(source.b, source.d, source.u, a))
    if isinstance(source, EvidenceSource):
        return from_evidence(EvidenceCount(
            r=source.r,
            s=source.s,
            W=settings.prior_weight if source.W is None else source.W,
            a=settings.default_base_rate if source.a is None else source.a,
        ))
    return settings.qualitative_scale[source.level]


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def _load_raw(text: str, fmt: str | None) -> Any:
    if fmt is None:
        fmt = "json" if text.lstrip()[:1] == "{" else "yaml"
    if fmt == "json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    try:
        return yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        raise DocumentSyntaxError(
            exc.problem or "invalid YAML",
            None if mark is None else mark.line + 1,
            None if mark is None else mark.column + 1,
        ) from exc
    except yaml.YAMLError as exc:
        raise DocumentSyntaxError(str(exc)) from exc


def _expect_mapping(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"expected a mapping, got {type(value).__name__}", path)
    for key in value:
        if not isinstance(key, str):
            raise SchemaError(f"mapping keys must be strings, got {key!r}", path)
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"expected a list, got {type(value).__name__}", path)
    return value


def _reject_unknown(mapping: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise SchemaError(f"unknown field {key!r}", f"{path}.{key}")


def _get_number(mapping: dict, key: str, path: str, *, required: bool = False,
                default: float | None = None) -> float | None:
    if key not in mapping:
        if required:
            raise SchemaError(f"missing required field {key!r}", path)
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {value!r}", f"{path}.{key}")
    return float(value)


def _get_str(mapping: dict, key: str, path: str, *, required: bool = False,
             default: str | None = None) -> str | None:
    if key not in mapping:
        if required:
            raise SchemaError(f"missing required field {key!r}", path)
        return default
    value = mapping[key]
    if not isinstance(value, str):
        raise SchemaError(f"expected a string, got {value!r}", f"{path}.{key}")
    return value


def _get_bool(mapping: dict, key: str, path: str, default: bool) -> bool:
    if key not in mapping:
        return default
    value = mapping[key]
    if not isinstance(value, bool):
        raise SchemaError(f"expected a boolean, got {value!r}", f"{path}.{key}")
    return value


def _parse_id(value: Any, path: str) -> str:
    if not isinstance(value, str) or not _ID_RE.match(value):
        raise SchemaError(
            f"expected an id matching {_ID_RE.pattern}, got {value!r}", path
        )
    return value


def _parse_opinion_literal(value: Any, path: str, default_a: float) -> Opinion:
    mapping = _expect_mapping(value, path)
    _reject_unknown(mapping, ("b", "d", "u", "a"), path)
    b = _get_number(mapping, "b", path, required=True)
    d = _get_number(mapping, "d", path, required=True)
    u = _get_number(mapping, "u", path, required=True)
    a = _get_number(mapping, "a", path, default=default_a)
    try:
        return validate_opinion(Opinion(b, d, u, a))
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def _parse_source(value: Any, path: str) -> OpinionSource:
    mapping = _expect_mapping(value, path)
    if "qualitative" in mapping:
        _reject_unknown(mapping, ("qualitative",), path)
        return QualitativeSource(_get_str(mapping, "qualitative", path, required=True))
    if "evidence" in mapping:
        _reject_unknown(mapping, ("evidence",), path)
        inner = _expect_mapping(mapping["evidence"], f"{path}.evidence")
        _reject_unknown(inner, ("r", "s", "W", "a"), f"{path}.evidence")
        r = _get_number(inner, "r", f"{path}.evidence", required=True)
        s = _get_number(inner, "s", f"{path}.evidence", required=True)
        if r < 0 or s < 0:
            raise SchemaError("evidence counts must be >= 0", f"{path}.evidence")
        w = _get_number(inner, "W", f"{path}.evidence")
        if w is not None and w <= 0:
            raise SchemaError("prior weight W must be > 0", f"{path}.evidence.W")
        a = _get_number(inner, "a", f"{path}.evidence")
        if a is not None and not 0.0 <= a <= 1.0:
            raise SchemaError("base rate must be in [0, 1]", f"{path}.evidence.a")
        return EvidenceSource(r, s, w, a)
    _reject_unknown(mapping, ("b", "d", "u", "a"), path)
    b = _get_number(mapping, "b", path, required=True)
    d = _get_number(mapping, "d", path, required=True)
    u = _get_number(mapping, "u", path, required=True)
    a = _get_number(mapping, "a", path)
    try:
        validate_opinion(Opinion(b, d, u, 0.5 if a is None else a))
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc
    return DirectSource(b, d, u, a)


def _parse_pattern(value: Any, path: str) -> Pattern:
    if isinstance(value, str):
        try:
            return Pattern(PatternKind(value))
        except ValueError:
            raise SchemaError(
                f"unknown pattern {value!r}, expected one of "
                f"{[k.value for k in PatternKind]}", path
            ) from None
    mapping = _expect_mapping(value, path)
    _reject_unknown(mapping, ("kind", "gamma"), path)
    kind = _get_str(mapping, "kind", path, required=True)
    try:
        pattern_kind = PatternKind(kind)
    except ValueError:
        raise SchemaError(f"unknown pattern kind {kind!r}", f"{path}.kind") from None
    gamma = _get_number(mapping, "gamma", path)
    if gamma is not None and not 0.0 <= gamma <= 1.0:
        raise SchemaError("gamma must be in [0, 1]", f"{path}.gamma")
    return Pattern(pattern_kind, gamma)


def _parse_conditionals(value: Any, path: str, kind: EdgeKind,
                        default_a: float) -> EdgeConditionals:
    mapping = _expect_mapping(value, path)
    _reject_unknown(mapping, ("pos", "neg", "base_rate"), path)
    pos = neg = None
    if "pos" in mapping:
        pos = _parse_opinion_literal(mapping["pos"], f"{path}.pos", default_a)
    if "neg" in mapping:
        neg = _parse_opinion_literal(mapping["neg"], f"{path}.neg", default_a)
    base_rate = _get_number(mapping, "base_rate", path)
    if base_rate is not None and not 0.0 <= base_rate <= 1.0:
        raise SchemaError("base_rate must be in [0, 1]", f"{path}.base_rate")
    if kind is EdgeKind.SUPPORTED_BY and (pos is None or neg is None):
        raise SchemaError("support conditionals need both pos and neg", path)
    if pos is None and neg is None and base_rate is None:
        raise SchemaError("conditionals object is empty", path)
    return EdgeConditionals(pos, neg, base_rate)


def _parse_settings(value: Any, path: str) -> Settings:
    mapping = _expect_mapping(value, path)
    allowed = (
        "prior_weight", "default_base_rate", "context_mode", "aggregate_base_rate",
        "implicit_pattern", "allow_implicit_pattern", "dogmatic_gamma",
        "default_conditionals", "qualitative_scale", "display_precision",
    )
    _reject_unknown(mapping, allowed, path)
    defaults = Settings()
    default_a = _get_number(mapping, "default_base_rate", path,
                            default=defaults.default_base_rate)

    implicit = _get_str(mapping, "implicit_pattern", path,
                        default=defaults.implicit_pattern.value)
    try:
        implicit_kind = PatternKind(implicit)
    except ValueError:
        raise SchemaError(f"unknown pattern {implicit!r}", f"{path}.implicit_pattern") from None

    default_conditionals = None
    if "default_conditionals" in mapping:
        cond = _parse_conditionals(
            mapping["default_conditionals"], f"{path}.default_conditionals",
            EdgeKind.SUPPORTED_BY, default_a,
        )
        default_conditionals = cond.as_pair()

    scale: Mapping[str, Opinion] = defaults.qualitative_scale
    if "qualitative_scale" in mapping:
        raw_scale = _expect_mapping(mapping["qualitative_scale"], f"{path}.qualitative_scale")
        scale = {
            level: _parse_opinion_literal(
                spec, f"{path}.qualitative_scale.{level}", default_a)
            for level, spec in raw_scale.items()
        }

    precision = _get_number(mapping, "display_precision", path,
                            default=float(defaults.display_precision))
    if precision != int(precision):
        raise SchemaError("display_precision must be an integer",
                          f"{path}.display_precision")

    try:
        return Settings(
            prior_weight=_get_number(mapping, "prior_weight", path,
                                     default=defaults.prior_weight),
            default_base_rate=default_a,
            context_mode=_get_str(mapping, "context_mode", path,
                                  default=defaults.context_mode),
            aggregate_base_rate=_get_str(mapping, "aggregate_base_rate", path,
                                         default=defaults.aggregate_base_rate),
            implicit_pattern=implicit_kind,
            allow_implicit_pattern=_get_bool(mapping, "allow_implicit_pattern", path,
                                             defaults.allow_implicit_pattern),
            dogmatic_gamma=_get_number(mapping, "dogmatic_gamma", path,
                                       default=defaults.dogmatic_gamma),
            default_conditionals=default_conditionals,
            qualitative_scale=scale,
            display_precision=int(precision),
        )
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def _document_issues(graph: ArgumentGraph, settings: Settings,
                     scenarios: Mapping[str, Scenario]) -> list[Issue]:
    """Cross-checks between the graph and the rest of the document."""
    issues: list[Issue] = []
    known_levels = set(settings.qualitative_scale)

    def check_source(source: OpinionSource, locus: str) -> None:
        if isinstance(source, QualitativeSource) and source.level not in known_levels:
            issues.append(Issue(
                "UNKNOWN_LEVEL", locus,
                f"qualitative level {source.level!r} not in the configured scale",
            ))

    for node in graph.nodes:
        if node.input is not None:
            check_source(node.input, node.id)
    for scenario in scenarios.values():
        for node_id, source in scenario.assignments.items():
            locus = f"scenarios.{scenario.name}.{node_id}"
            if node_id not in graph:
                issues.append(Issue("SCENARIO_UNKNOWN_NODE", locus,
                                    "assignment references an unknown node"))
                continue
            node = graph.node(node_id)
            if node.kind.value not in ("goal", "solution", "assumption") or \
                    graph.supporters(node_id):
                issues.append(Issue(
                    "SCENARIO_NOT_INPUT", locus,
                    "assignments may only target input nodes "
                    "(solutions, assumptions, or goals without supporters)",
                ))
            check_source(source, locus)
    return issues


def parse_document(text: str, *, fmt: str | None = None) -> Document:
    """Parse and validate an argument document.

    Raises:
        DocumentSyntaxError: malformed JSON/YAML.
        SchemaError: well-formed input that violates the schema.
        ValidationFailed: schema-clean document whose argument graph (or
            scenario table) fails structural validation; carries the report.
    """
    raw = _load_raw(text, fmt)
    top = _expect_mapping(raw, "$")
    _reject_unknown(top, ("version", "settings", "nodes", "edges", "scenarios"), "$")

    version = top.get("version")
    if isinstance(version, int) and not isinstance(version, bool):
        version = str(version)
    if version is None:
        raise SchemaError("missing required field 'version'", "$")
    if version != DOCUMENT_VERSION:
        raise SchemaError(
            f"unrecognized document version {version!r}, expected {DOCUMENT_VERSION!r}",
            "$.version",
        )

    settings = _parse_settings(top.get("settings", {}), "$.settings")

    nodes: list[ArgNode] = []
    for i, raw_node in enumerate(_expect_list(top.get("nodes"), "$.nodes")):
        path = f"$.nodes[{i}]"
        mapping = _expect_mapping(raw_node, path)
        _reject_unknown(mapping, ("id", "kind", "statement", "opinion", "pattern"), path)
        node_id = _parse_id(mapping.get("id"), f"{path}.id")
        kind_token = _get_str(mapping, "kind", path, required=True)
        try:
            kind = NodeKind(kind_token)
        except ValueError:
            raise SchemaError(
                f"unknown node kind {kind_token!r}, expected one of "
                f"{[k.value for k in NodeKind]}", f"{path}.kind"
            ) from None
        nodes.append(ArgNode(
            id=node_id,
            kind=kind,
            statement=_get_str(mapping, "statement", path, default="") or "",
            input=(_parse_source(mapping["opinion"], f"{path}.opinion")
                   if "opinion" in mapping else None),
            pattern=(_parse_pattern(mapping["pattern"], f"{path}.pattern")
                     if "pattern" in mapping else None),
        ))

    edges: list[ArgEdge] = []
    for i, raw_edge in enumerate(_expect_list(top.get("edges"), "$.edges")):
        path = f"$.edges[{i}]"
        mapping = _expect_mapping(raw_edge, path)
        _reject_unknown(mapping, ("source", "target", "kind", "conditionals"), path)
        kind_token = _get_str(mapping, "kind", path, required=True)
        try:
            kind = EdgeKind(kind_token)
        except ValueError:
            raise SchemaError(
                f"unknown edge kind {kind_token!r}, expected one of "
                f"{[k.value for k in EdgeKind]}", f"{path}.kind"
            ) from None
        edges.append(ArgEdge(
            source=_parse_id(mapping.get("source"), f"{path}.source"),
            target=_parse_id(mapping.get("target"), f"{path}.target"),
            kind=kind,
            conditionals=(_parse_conditionals(
                mapping["conditionals"], f"{path}.conditionals", kind,
                settings.default_base_rate,
            ) if "conditionals" in mapping else None),
        ))

    scenarios: dict[str, Scenario] = {}
    raw_scenarios = _expect_mapping(top.get("scenarios", {}), "$.scenarios")
    for name, raw_assignments in raw_scenarios.items():
        path = f"$.scenarios.{name}"
        _parse_id(name, path)
        assignments = {
            _parse_id(node_id, f"{path}.{node_id}"):
                _parse_source(source, f"{path}.{node_id}")
            for node_id, source in _expect_mapping(raw_assignments, path).items()
        }
        scenarios[name] = Scenario(name, assignments)

    graph = ArgumentGraph(tuple(nodes), tuple(edges))
    report = validate_argument(graph, settings)
    extra = _document_issues(graph, settings, scenarios)
    if extra:
        report = ValidationReport(
            tuple(sorted(report.errors + tuple(extra),
                         key=lambda i: (i.code, i.locus, i.message))),
            report.warnings,
        )
    if not report.ok:
        raise ValidationFailed(report)
    return Document(DOCUMENT_VERSION, settings, graph, scenarios, report)


def load_document(path: str) -> Document:
    """Read a document file, picking the format from the extension."""
    fmt = None
    lowered = path.lower()
    if lowered.endswith(".json"):
        fmt = "json"
    elif lowered.endswith((".yaml", ".yml")):
        fmt = "yaml"
    with open(path, encoding="utf-8") as handle:
        return parse_document(handle.read(), fmt=fmt)


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def _num(x: float) -> float | int:
    """Canonical number rendering: ints stay ints, floats get <= 12 digits."""
    if isinstance(x, int) or x == int(x):
        return int(x)
    return float(f"{x:.12g}")


def _opinion_data(o: Opinion, default_a: float) -> dict:
    data: dict[str, Any] = {"b": _num(o.b), "d": _num(o.d), "u": _num(o.u)}
    if o.a != default_a:
        data["a"] = _num(o.a)
    return data


def _source_data(source: OpinionSource) -> dict:
    if isinstance(source, DirectSource):
        data: dict[str, Any] = {
            "b": _num(source.b), "d": _num(source.d), "u": _num(source.u),
        }
        if source.a is not None:
            data["a"] = _num(source.a)
        return data
    if isinstance(source, EvidenceSource):
        inner: dict[str, Any] = {"r": _num(source.r), "s": _num(source.s)}
        if source.W is not None:
            inner["W"] = _num(source.W)
        if source.a is not None:
            inner["a"] = _num(source.a)
        return {"evidence": inner}
    return {"qualitative": source.level}


def _pattern_data(pattern: Pattern) -> str | dict:
    if pattern.gamma is None:
        return pattern.kind.value
    return {"kind": pattern.kind.value, "gamma": _num(pattern.gamma)}


def _conditionals_data(cond: EdgeConditionals, default_a: float) -> dict:
    data: dict[str, Any] = {}
    if cond.pos is not None:
        data["pos"] = _opinion_data(cond.pos, default_a)
    if cond.neg is not None:
        data["neg"] = _opinion_data(cond.neg, default_a)
    if cond.base_rate is not None:
        data["base_rate"] = _num(cond.base_rate)
    return data


def _settings_data(settings: Settings) -> dict:
    defaults = Settings()
    data: dict[str, Any] = {}
    if settings.prior_weight != defaults.prior_weight:
        data["prior_weight"] = _num(settings.prior_weight)
    if settings.default_base_rate != defaults.default_base_rate:
        data["default_base_rate"] = _num(settings.default_base_rate)
    if settings.context_mode != defaults.context_mode:
        data["context_mode"] = settings.context_mode
    if settings.aggregate_base_rate != defaults.aggregate_base_rate:
        data["aggregate_base_rate"] = settings.aggregate_base_rate
    if settings.implicit_pattern != defaults.implicit_pattern:
        data["implicit_pattern"] = settings.implicit_pattern.value
    if settings.allow_implicit_pattern != defaults.allow_implicit_pattern:
        data["allow_implicit_pattern"] = settings.allow_implicit_pattern
    if settings.dogmatic_gamma != defaults.dogmatic_gamma:
        data["dogmatic_gamma"] = _num(settings.dogmatic_gamma)
    if settings.default_conditionals is not None:
        pair = settings.default_conditionals
        pair_data: dict[str, Any] = {
            "pos": _opinion_data(pair.pos, settings.default_base_rate),
            "neg": _opinion_data(pair.neg, settings.default_base_rate),
        }
        if pair.consequent_base_rate is not None:
            pair_data["base_rate"] = _num(pair.consequent_base_rate)
        data["default_conditionals"] = pair_data
    if dict(settings.qualitative_scale) != dict(defaults.qualitative_scale):
        data["qualitative_scale"] = {
            level: _opinion_data(o, settings.default_base_rate)
            for level, o in settings.qualitative_scale.items()
        }
    if settings.display_precision != defaults.display_precision:
        data["display_precision"] = settings.display_precision
    return data


def document_data(document: Document) -> dict:
    """The canonical plain-data form of a document (what gets serialized)."""
    default_a = document.settings.default_base_rate
    data: dict[str, Any] = {"version": document.version}
    settings_data = _settings_data(document.settings)
    if settings_data:
        data["settings"] = settings_data

    nodes = []
    for node in document.graph.nodes:
        node_data: dict[str, Any] = {"id": node.id, "kind": node.kind.value}
        if node.statement:
            node_data["statement"] = node.statement
        if node.input is not None:
            node_data["opinion"] = _source_data(node.input)
        if node.pattern is not None:
            node_data["pattern"] = _pattern_data(node.pattern)
        nodes.append(node_data)
    data["nodes"] = nodes

    edges = []
    for edge in document.graph.edges:
        edge_data: dict[str, Any] = {
            "source": edge.source, "target": edge.target, "kind": edge.kind.value,
        }
        if edge.conditionals is not None:
            edge_data["conditionals"] = _conditionals_data(edge.conditionals, default_a)
        edges.append(edge_data)
    data["edges"] = edges

    if document.scenarios:
        data["scenarios"] = {
            name: {nid: _source_data(src) for nid, src in scenario.assignments.items()}
            for name, scenario in document.scenarios.items()
        }
    return data


def serialize_document(document: Document, *, fmt: str = "json") -> str:
    """Render a document as canonical JSON or YAML text.

    Round-trips: parsing the output yields an equal document; fields at
    their default values are omitted; numbers carry at most 12
    significant digits.
    """
    data = document_data(document)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "yaml":
        return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)
    raise ValueError(f"unknown format {fmt!r}, expected 'json' or 'yaml'")
