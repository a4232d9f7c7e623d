"""Initial taxonomy built from the DCASE 2013-2018 challenge label sets.

Event-task sets are merged left to right in challenge order into an events
graph, scene-task sets into a scenes graph. The two are joined with
duplicates removed, and the context subset is seeded on top. Every label
that does not reduce to published atoms by the generic pipeline is handled
by a curation record or synset in the bundled data files.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .cuts import union
from .errors import GoldenMismatch
from .formats import (
    SourceLabelSet,
    parse_golden_sets,
    parse_label_set,
    parse_records,
    parse_source_set,
    parse_thesaurus,
)
from .framework import CurationLog, CurationRecord, CurationReport, merge_label_set
from .graph import SubsetKind, TaxonomyGraph, with_cluster
from .labels import normalize
from .thesaurus import Thesaurus

EVENT_SET_FILES = ("d13t2.txt", "d16t2.txt", "d16t3.txt", "d17t3.txt", "d17t4.txt", "d18t4.txt")
SCENE_SET_FILES = ("d13t1.txt", "d16t1.txt", "d18t1.txt")
THESAURUS_FILE = "thesaurus.txt"
RECORDS_FILE = "records.txt"
CONTEXT_FILE = "context.txt"
GOLDENS_FILE = "goldens.txt"

EVENTS_CLUSTER = "dcase events"
SCENES_CLUSTER = "dcase scenes"
CONTEXT_CLUSTER = "dcase context"

# (source id, part) after which the events graph is snapshotted
STAGES = {"ev0": ("D16T2", None), "ev1": ("D16T3", "home")}

GOLDEN_NAMES = ("ev0", "ev1", "t_events", "t_scenes", "c", "t")


def _resource(name: str):
    node = resources.files("taxograph").joinpath("data")
    for part in name.split("/"):
        node = node.joinpath(part)
    return node


class DataDir:
    """Reads the data files from the bundled package data or a directory."""

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else None

    def read(self, name: str) -> str:
        if self.root is not None:
            return (self.root / name).read_text(encoding="utf-8")
        return _resource(name).read_text(encoding="utf-8")

    def source(self, name: str) -> str:
        return str(self.root / name) if self.root is not None else f"<taxograph>/data/{name}"

    def source_set(self, name: str) -> SourceLabelSet:
        path = f"sets/{name}"
        return parse_source_set(self.read(path), self.source(path))


BUNDLED = DataDir()


def event_sets(data: DataDir = BUNDLED) -> list[SourceLabelSet]:
    return [data.source_set(name) for name in EVENT_SET_FILES]


def scene_sets(data: DataDir = BUNDLED) -> list[SourceLabelSet]:
    return [data.source_set(name) for name in SCENE_SET_FILES]


def default_thesaurus(data: DataDir = BUNDLED) -> Thesaurus:
    return parse_thesaurus(data.read(THESAURUS_FILE), data.source(THESAURUS_FILE))


def default_records(data: DataDir = BUNDLED) -> list[CurationRecord]:
    return parse_records(data.read(RECORDS_FILE), data.source(RECORDS_FILE))


def context_labels(data: DataDir = BUNDLED) -> list[str]:
    return [spec.raw for spec in parse_label_set(data.read(CONTEXT_FILE), data.source(CONTEXT_FILE))]


def export_data(target: str | Path) -> list[Path]:
    """Copy the bundled data files to ``target`` so a run can start from files alone."""
    target = Path(target)
    (target / "sets").mkdir(parents=True, exist_ok=True)
    written = []
    for name in (
        THESAURUS_FILE,
        RECORDS_FILE,
        CONTEXT_FILE,
        GOLDENS_FILE,
        *(f"sets/{n}" for n in EVENT_SET_FILES + SCENE_SET_FILES),
    ):
        path = target / name
        with resources.as_file(_resource(name)) as src:
            shutil.copyfile(src, path)
        written.append(path)
    return written


@dataclass(frozen=True)
class GoldenSets:
    ev0: frozenset[str]
    ev1: frozenset[str]
    t_events: frozenset[str]
    t_scenes: frozenset[str]
    c: frozenset[str]
    t: frozenset[str]

    def as_dict(self) -> dict[str, frozenset[str]]:
        return {name: getattr(self, name) for name in GOLDEN_NAMES}


def _atomized(items: Iterable[str]) -> frozenset[str]:
    return frozenset(word for item in items for word in normalize(item).text.split())


def _normalized(items: Iterable[str]) -> frozenset[str]:
    return frozenset(normalize(item).text for item in items)


def golden_sets(data: DataDir = BUNDLED) -> GoldenSets:
    """The published sets, normalized; ev0 (and the ev0 part of ev1) atomized.

    T is the union of T_events, T_scenes and c: the superset must contain
    every element of every subset, and c adds meeting and shopping.
    """
    raw = parse_golden_sets(data.read(GOLDENS_FILE), data.source(GOLDENS_FILE))
    ev0 = _atomized(raw["ev0"])
    ev1_added = raw["ev1"][len(raw["ev0"]) :]
    t_events = _normalized(raw["t_events"])
    t_scenes = _normalized(raw["t_scenes"])
    c = _normalized(raw["c"])
    return GoldenSets(
        ev0=ev0,
        ev1=ev0 | _normalized(ev1_added),
        t_events=t_events,
        t_scenes=t_scenes,
        c=c,
        t=t_events | t_scenes | c,
    )


@dataclass
class DcaseBuild:
    graph: TaxonomyGraph
    report: CurationReport
    stages: dict[str, frozenset[str]] = field(default_factory=dict)
    events: TaxonomyGraph | None = None
    scenes: TaxonomyGraph | None = None


def _merge_sets(
    sets: Iterable[SourceLabelSet],
    kind: SubsetKind,
    umbrella: str,
    thesaurus: Thesaurus,
    log: CurationLog,
    report: CurationReport,
    stages: dict[str, frozenset[str]] | None = None,
) -> TaxonomyGraph:
    graph = TaxonomyGraph()
    for source_set in sets:
        for part in source_set.parts:
            graph, part_report = merge_label_set(
                graph, part.labels, source_set.cluster, kind, thesaurus, (), log, source=source_set.id
            )
            report.extend(part_report)
            if stages is None:
                continue
            last = part is source_set.parts[-1]
            for stage, (set_id, part_name) in STAGES.items():
                if set_id == source_set.id and (part_name == part.name or (part_name is None and last)):
                    stages[stage] = graph.texts
    if len(graph):
        graph = with_cluster(graph, umbrella, [lab.text for lab in graph])
    return graph


def build_dcase(
    thesaurus: Thesaurus | None = None,
    records: Iterable[CurationRecord] | None = None,
    data: DataDir = BUNDLED,
) -> DcaseBuild:
    """Run the full DCASE chronology and keep the intermediate snapshots."""
    thesaurus = default_thesaurus(data) if thesaurus is None else thesaurus
    log = CurationLog(default_records(data) if records is None else records)
    report = CurationReport()
    stages: dict[str, frozenset[str]] = {}

    events = _merge_sets(event_sets(data), SubsetKind.EVENT, EVENTS_CLUSTER, thesaurus, log, report, stages)
    stages["t_events"] = events.texts
    scenes = _merge_sets(scene_sets(data), SubsetKind.ENVIRONMENT, SCENES_CLUSTER, thesaurus, log, report)
    stages["t_scenes"] = scenes.texts

    graph = union(events, scenes, thesaurus)._evolve()
    graph, context_report = merge_label_set(
        graph, context_labels(data), CONTEXT_CLUSTER, SubsetKind.CONTEXT, thesaurus, (), log, source="context"
    )
    report.extend(context_report)
    stages["c"] = graph.subset(SubsetKind.CONTEXT)
    stages["t"] = graph.texts
    graph.notes.update(
        {
            "source": "DCASE 2013-2018 event and scene label sets",
            "chronology": " ".join(s.id for s in event_sets(data) + scene_sets(data)),
        }
    )
    return DcaseBuild(graph, report, stages, events, scenes)


@dataclass(frozen=True)
class GoldenDiff:
    """Per golden set: labels missing from, and extra in, the reproduction."""

    missing: Mapping[str, tuple[str, ...]]
    extra: Mapping[str, tuple[str, ...]]

    @property
    def empty(self) -> bool:
        return not any(self.missing.values()) and not any(self.extra.values())

    def __bool__(self) -> bool:
        return not self.empty

    def lines(self) -> list[str]:
        out = []
        for name in GOLDEN_NAMES:
            if self.missing.get(name):
                out.append(f"{name} missing: {', '.join(self.missing[name])}")
            if self.extra.get(name):
                out.append(f"{name} extra: {', '.join(self.extra[name])}")
        return out

    def summary(self) -> str:
        return "; ".join(self.lines()) or "no differences"


def observed_sets(graph: TaxonomyGraph) -> dict[str, frozenset[str]]:
    """The golden-comparable sets a graph exposes through its subset kinds."""
    return {
        "t_events": graph.subset(SubsetKind.EVENT),
        "t_scenes": graph.subset(SubsetKind.ENVIRONMENT),
        "c": graph.subset(SubsetKind.CONTEXT),
        "t": graph.texts,
    }


def golden_diff(
    graph: TaxonomyGraph,
    golden: GoldenSets | None = None,
    stages: Mapping[str, Iterable[str]] | None = None,
) -> GoldenDiff:
    """Compare a graph (and optional stage snapshots) with the golden sets.

    ev0 and ev1 are only compared when ``stages`` provides them.
    """
    golden = golden_sets() if golden is None else golden
    observed = dict(observed_sets(graph))
    for name, texts in (stages or {}).items():
        if name in ("ev0", "ev1"):
            observed[name] = frozenset(texts)
    missing, extra = {}, {}
    for name in GOLDEN_NAMES:
        if name not in observed:
            continue
        expected = getattr(golden, name)
        missing[name] = tuple(sorted(expected - observed[name]))
        extra[name] = tuple(sorted(observed[name] - expected))
    return GoldenDiff(missing, extra)


def init_dcase(
    thesaurus: Thesaurus | None = None,
    records: Iterable[CurationRecord] | None = None,
    *,
    diagnostic: bool = False,
    data: DataDir = BUNDLED,
) -> tuple[TaxonomyGraph, CurationReport]:
    """Build T from the DCASE label sets.

    With ``diagnostic`` set, every stage is compared against the golden sets
    and GoldenMismatch is raised on any difference.
    """
    build = build_dcase(thesaurus, records, data)
    if diagnostic:
        diff = golden_diff(build.graph, golden_sets(data), build.stages)
        if diff:
            raise GoldenMismatch(diff)
    return build.graph, build.report
