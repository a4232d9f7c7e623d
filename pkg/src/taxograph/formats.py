"""Text formats: taxonomy documents, edge lists and curation inputs.

All writers produce UTF-8 text with ``\\n`` line endings and a fixed
ordering, so serializing the same graph twice gives identical bytes.

Edge-list document::

    #taxograph-edges v1
    @cluster d16t3
    washing [event] <action>
    dishes [event]
    @edges
    dishes<TAB>kitchen<TAB>0.5

Member lines carry the label's subset kinds in brackets and an optional
object/action tag in angle brackets. Clique edges inside a cluster are
implied by the block and never written out.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import jsonschema

from .errors import InvalidGraph, InvalidLabel, ParseError, ThesaurusError, UnknownFormatVersion
from .framework import Action, CurationRecord, LabelSpec
from .graph import SubsetKind, TaxonomyGraph, as_kinds, errors_only, validate
from .labels import ACTION, KINDS, OBJECT, UNTAGGED, Label, is_normalized
from .thesaurus import Synset, Thesaurus

FORMAT_VERSION = 1
EDGES_HEADER = "#taxograph-edges"
DOCUMENT_FORMAT = "taxograph"

_KIND_ALIASES = {"obj": OBJECT, "object": OBJECT, "act": ACTION, "action": ACTION, "untagged": UNTAGGED}


def _lines(text: str) -> Iterator[tuple[int, str]]:
    """Numbered, stripped, non-blank, non-comment lines."""
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield number, line


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _kind_tag(value: str, line: int | None, source: str | None) -> str:
    try:
        return _KIND_ALIASES[value.strip().lower()]
    except KeyError:
        raise ParseError(f"unknown label kind {value!r}", line, source) from None


# -- thesaurus ---------------------------------------------------------------------


def parse_thesaurus(text: str, source: str | None = None) -> Thesaurus:
    """Read ``preferred | variant, variant | note`` lines."""
    synsets = []
    seen: dict[str, str] = {}
    for number, line in _lines(text):
        fields = [f.strip() for f in line.split("|", 2)]
        preferred = fields[0]
        variants = [v.strip() for v in fields[1].split(",")] if len(fields) > 1 else []
        variants = [v for v in variants if v]
        note = fields[2] if len(fields) > 2 else ""
        try:
            synset = Synset(preferred, frozenset(variants), note)
        except ThesaurusError as exc:
            raise ParseError(str(exc), number, source) from None
        for term in synset.terms:
            if term in seen:
                raise ParseError(f"term {term!r} already belongs to synset {seen[term]!r}", number, source)
            seen[term] = synset.preferred
        synsets.append(synset)
    try:
        return Thesaurus(synsets)
    except ThesaurusError as exc:
        raise ParseError(str(exc), None, source) from None


def dump_thesaurus(thesaurus: Thesaurus) -> str:
    out = [f"# taxograph thesaurus v{FORMAT_VERSION}", "# preferred | variants | note"]
    for synset in sorted(thesaurus, key=lambda s: s.preferred):
        line = f"{synset.preferred} | {', '.join(sorted(synset.variants))}"
        if synset.note:
            line += f" | {synset.note}"
        out.append(line)
    return "\n".join(out) + "\n"


def load_thesaurus(path: str | Path) -> Thesaurus:
    return parse_thesaurus(read_text(path), str(path))


# -- curation records ----------------------------------------------------------------


def _parse_outputs(value: str, line: int, source: str | None) -> tuple[Label, ...]:
    outputs = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        text, _, kind = item.partition(":")
        try:
            outputs.append(Label(text.strip(), _kind_tag(kind, line, source) if kind else UNTAGGED))
        except InvalidLabel as exc:
            raise ParseError(str(exc), line, source) from None
    return tuple(outputs)


def parse_records(text: str, source: str | None = None) -> list[CurationRecord]:
    """Read ``raw | action | outputs | scope | reason`` lines."""
    records = []
    for number, line in _lines(text):
        fields = [f.strip() for f in line.split("|", 4)]
        if len(fields) < 2:
            raise ParseError("expected 'raw | action | outputs | scope | reason'", number, source)
        fields += [""] * (5 - len(fields))
        raw, action, outputs, scope, reason = fields
        try:
            records.append(
                CurationRecord(
                    raw,
                    Action(action),
                    _parse_outputs(outputs, number, source),
                    reason,
                    scope or None,
                )
            )
        except (InvalidLabel, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), number, source) from None
    return records


def dump_records(records: Iterable[CurationRecord]) -> str:
    out = [f"# taxograph curation records v{FORMAT_VERSION}", "# raw | action | outputs | scope | reason"]
    for rec in records:
        outputs = ", ".join(o.text if o.kind == UNTAGGED else f"{o.text}:{o.kind}" for o in rec.outputs)
        out.append(f"{rec.raw} | {rec.action} | {outputs} | {rec.scope or ''} | {rec.reason}".rstrip())
    return "\n".join(out) + "\n"


def load_records(path: str | Path) -> list[CurationRecord]:
    return parse_records(read_text(path), str(path))


# -- label sets ------------------------------------------------------------------------


def parse_label_set(text: str, source: str | None = None) -> list[LabelSpec]:
    """One raw label per line, optionally followed by ``| key=value`` overrides.

    Recognised keys: ``kind`` (object/action), ``cluster`` and ``subset``
    (comma-separated subset kinds).
    """
    specs = []
    for number, line in _lines(text):
        raw, *overrides = [f.strip() for f in line.split("|")]
        options: dict = {}
        for item in overrides:
            key, eq, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or not value:
                raise ParseError(f"expected key=value, got {item!r}", number, source)
            if key == "kind":
                options["kind"] = _kind_tag(value, number, source)
            elif key == "cluster":
                if not is_normalized(value):
                    raise ParseError(f"cluster name is not normalized: {value!r}", number, source)
                options["cluster"] = value
            elif key == "subset":
                try:
                    options["subsets"] = as_kinds(v.strip() for v in value.split(","))
                except ValueError as exc:
                    raise ParseError(str(exc), number, source) from None
            else:
                raise ParseError(f"unknown override {key!r}", number, source)
        if not raw:
            raise ParseError("empty raw label", number, source)
        specs.append(LabelSpec(raw, **options))
    return specs


def load_label_set(path: str | Path) -> list[LabelSpec]:
    return parse_label_set(read_text(path), str(path))


# -- source label sets (DxxTy files) -----------------------------------------------------------

SOURCE_ID = re.compile(r"^D\d{2}T\d+(&\d+)?$")


@dataclass(frozen=True)
class SourcePart:
    name: str
    labels: tuple[str, ...]


@dataclass(frozen=True)
class SourceLabelSet:
    """A challenge label set transcribed verbatim, split into its printed parts."""

    id: str
    task: str  # "event" or "scene"
    cluster: str
    parts: tuple[SourcePart, ...]
    note: str = ""

    def __post_init__(self):
        if not SOURCE_ID.match(self.id):
            raise ValueError(f"source id {self.id!r} does not match the DxxTy pattern")
        if self.task not in ("event", "scene"):
            raise ValueError(f"task must be 'event' or 'scene', got {self.task!r}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(raw for part in self.parts for raw in part.labels)


def parse_source_set(text: str, source: str | None = None) -> SourceLabelSet:
    meta: dict[str, str] = {}
    parts: list[tuple[str, list[str]]] = []
    for number, line in _lines(text):
        if line.startswith("@"):
            key, _, value = line[1:].partition(" ")
            value = value.strip()
            if key == "part":
                parts.append((value, []))
            elif key in ("id", "task", "cluster", "note"):
                meta[key] = value
            else:
                raise ParseError(f"unknown directive @{key}", number, source)
            continue
        if not parts:
            parts.append(("", []))
        parts[-1][1].append(line)
    missing = {"id", "task", "cluster"} - set(meta)
    if missing:
        raise ParseError(f"missing directive(s) {sorted(missing)}", None, source)
    try:
        return SourceLabelSet(
            meta["id"],
            meta["task"],
            meta["cluster"],
            tuple(SourcePart(name, tuple(labels)) for name, labels in parts),
            meta.get("note", ""),
        )
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_golden_sets(text: str, source: str | None = None) -> dict[str, list[str]]:
    """Blocks of ``@set name`` (or ``@set name extends base``) followed by items.

    Items may be comma-separated on a line; order and spelling are kept
    as transcribed.
    """
    sets: dict[str, list[str]] = {}
    current = None
    for number, line in _lines(text):
        if line.startswith("@set "):
            words = line.split()
            current = words[1]
            sets[current] = []
            if len(words) == 4 and words[2] == "extends":
                if words[3] not in sets:
                    raise ParseError(f"unknown base set {words[3]!r}", number, source)
                sets[current] = list(sets[words[3]])
            elif len(words) != 2:
                raise ParseError("expected '@set NAME [extends BASE]'", number, source)
            continue
        if current is None:
            raise ParseError("item outside of a @set block", number, source)
        sets[current].extend(item.strip() for item in line.split(",") if item.strip())
    return sets


# -- edge-list document ---------------------------------------------------------------------------

_MEMBER = re.compile(r"^(?P<text>[^\[\]<>\t]+?) \[(?P<kinds>[a-z,]*)\](?: <(?P<kind>[a-z]+)>)?$")


def _format_weight(weight: float) -> str:
    return repr(float(weight))


def _require_valid(graph: TaxonomyGraph) -> None:
    issues = errors_only(validate(graph))
    if issues:
        raise InvalidGraph(issues)


def _kinds_field(graph: TaxonomyGraph, text: str) -> str:
    return ",".join(sorted(str(k) for k in graph.kinds_of(text)))


def export_edges(graph: TaxonomyGraph) -> str:
    """Serialize as cluster blocks plus explicit cross edges."""
    _require_valid(graph)
    out = [f"{EDGES_HEADER} v{FORMAT_VERSION}"]
    for cluster in sorted(graph.clusters, key=lambda c: c.name):
        out.append(f"@cluster {cluster.name}")
        for text in cluster.members:
            line = f"{text} [{_kinds_field(graph, text)}]"
            kind = graph.label(text).kind
            if kind != UNTAGGED:
                line += f" <{kind}>"
            out.append(line)
    if graph.cross_edges:
        out.append("@edges")
        for a, b, weight in graph.cross_edges:
            out.append(f"{a}\t{b}" if weight is None else f"{a}\t{b}\t{_format_weight(weight)}")
    return "\n".join(out) + "\n"


def _check_header(line: str, source: str | None) -> None:
    name, _, version = line.partition(" ")
    if name != EDGES_HEADER or not version.startswith("v"):
        raise ParseError(f"expected header '{EDGES_HEADER} v{FORMAT_VERSION}'", 1, source)
    if version != f"v{FORMAT_VERSION}":
        raise UnknownFormatVersion(f"unsupported edge-list version {version!r}", 1, source)


def import_edges(text: str, source: str | None = None) -> TaxonomyGraph:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty document", 1, source)
    _check_header(lines[0].strip(), source)
    labels: dict[str, str] = {}
    membership: dict[str, frozenset[SubsetKind]] = {}
    clusters: dict[str, list[str]] = {}
    edges = []
    current = None
    in_edges = False
    for number, raw_line in enumerate(lines[1:], start=2):
        line = raw_line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("@cluster "):
            if in_edges:
                raise ParseError("cluster block after @edges", number, source)
            current = line[len("@cluster ") :]
            if not is_normalized(current):
                raise ParseError(f"cluster name is not normalized: {current!r}", number, source)
            if current in clusters:
                raise ParseError(f"duplicate cluster block {current!r}", number, source)
            clusters[current] = []
            continue
        if line == "@edges":
            in_edges = True
            continue
        if line.startswith("@"):
            raise ParseError(f"unknown directive {line.split()[0]!r}", number, source)
        if in_edges:
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise ParseError("edge line needs 2 or 3 tab-separated fields", number, source)
            weight = None
            if len(fields) == 3:
                try:
                    weight = float(fields[2])
                except ValueError:
                    raise ParseError(f"bad weight {fields[2]!r}", number, source) from None
                if math.isnan(weight) or weight < 0:
                    raise ParseError(f"weight must be non-negative, got {fields[2]!r}", number, source)
            for text in fields[:2]:
                if not is_normalized(text):
                    raise ParseError(f"edge endpoint is not normalized: {text!r}", number, source)
            edges.append((fields[0], fields[1], weight))
            continue
        if current is None:
            raise ParseError("member line outside of a cluster block", number, source)
        match = _MEMBER.match(line)
        if not match:
            raise ParseError(f"malformed member line {line!r}", number, source)
        text = match["text"]
        if not is_normalized(text):
            raise ParseError(f"label is not normalized: {text!r}", number, source)
        try:
            kinds = as_kinds(k for k in match["kinds"].split(",") if k)
        except ValueError as exc:
            raise ParseError(str(exc), number, source) from None
        kind = match["kind"] or UNTAGGED
        if kind not in KINDS:
            raise ParseError(f"unknown label kind {kind!r}", number, source)
        if text in labels and (labels[text] != kind or membership[text] != kinds):
            raise ParseError(f"inconsistent annotations for {text!r}", number, source)
        labels[text] = kind
        membership[text] = kinds
        clusters[current].append(text)
    return TaxonomyGraph(
        [Label(t, k) for t, k in labels.items()],
        clusters,
        membership,
        edges,
    )


# -- JSON taxonomy document ---------------------------------------------------------------------------

DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["format", "format_version", "labels", "clusters", "cross_edges"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": DOCUMENT_FORMAT},
        "format_version": {"type": "integer", "minimum": 1},
        "labels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["text", "kind", "subsets", "clusters"],
                "additionalProperties": False,
                "properties": {
                    "text": {"type": "string", "minLength": 1},
                    "kind": {"enum": list(KINDS)},
                    "subsets": {
                        "type": "array",
                        "items": {"enum": [k.value for k in SubsetKind]},
                        "uniqueItems": True,
                    },
                    "clusters": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
                },
            },
        },
        "clusters": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "members"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "members": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
                },
            },
        },
        "cross_edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["a", "b", "weight"],
                "additionalProperties": False,
                "properties": {
                    "a": {"type": "string"},
                    "b": {"type": "string"},
                    "weight": {"type": ["number", "null"], "minimum": 0},
                },
            },
        },
        "provenance": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}


_DOCUMENT_VALIDATOR = jsonschema.Draft202012Validator(DOCUMENT_SCHEMA)


def to_document(graph: TaxonomyGraph) -> dict:
    return {
        "format": DOCUMENT_FORMAT,
        "format_version": FORMAT_VERSION,
        "labels": [
            {
                "text": text,
                "kind": graph.label(text).kind,
                "subsets": sorted(str(k) for k in graph.kinds_of(text)),
                "clusters": sorted(graph.clusters_of(text)),
            }
            for text in sorted(graph.texts)
        ],
        "clusters": [
            {"name": c.name, "members": list(c.members)}
            for c in sorted(graph.clusters, key=lambda c: c.name)
        ],
        "cross_edges": [{"a": a, "b": b, "weight": w} for a, b, w in graph.cross_edges],
        "provenance": dict(sorted(graph.notes.items())),
    }


def dumps_document(graph: TaxonomyGraph) -> str:
    return json.dumps(to_document(graph), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def from_document(doc: dict, source: str | None = None) -> TaxonomyGraph:
    if isinstance(doc, dict) and isinstance(doc.get("format_version"), int):
        if doc["format_version"] != FORMAT_VERSION:
            raise UnknownFormatVersion(f"unsupported document version {doc['format_version']}", None, source)
    error = jsonschema.exceptions.best_match(_DOCUMENT_VALIDATOR.iter_errors(doc))
    if error is not None:
        path = "/".join(str(p) for p in error.absolute_path)
        raise ParseError(f"schema violation at '{path}': {error.message}", None, source)
    try:
        labels = [Label(item["text"], item["kind"]) for item in doc["labels"]]
    except InvalidLabel as exc:
        raise ParseError(str(exc), None, source) from None
    graph = TaxonomyGraph(
        labels,
        {c["name"]: c["members"] for c in doc["clusters"]},
        {item["text"]: item["subsets"] for item in doc["labels"]},
        [(e["a"], e["b"], e["weight"]) for e in doc["cross_edges"]],
        notes=doc.get("provenance", {}),
    )
    for item in doc["labels"]:
        if sorted(graph.clusters_of(item["text"])) != sorted(item["clusters"]):
            raise ParseError(f"label {item['text']!r} lists clusters that disagree with cluster blocks", None, source)
    return graph


def loads_document(text: str, source: str | None = None) -> TaxonomyGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, source) from None
    return from_document(doc, source)


def loads_graph(text: str, source: str | None = None) -> TaxonomyGraph:
    """Parse either document format, detected from the first character."""
    if text.lstrip().startswith("{"):
        return loads_document(text, source)
    return import_edges(text, source)


def load_graph(path: str | Path) -> TaxonomyGraph:
    return loads_graph(read_text(path), str(path))
