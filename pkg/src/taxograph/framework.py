"""Pipeline for extending a taxonomy with new raw labels.

Each raw label passes through a fixed sequence of stages:

1. normalize the raw text;
2. resolve the whole (possibly compound) label through the thesaurus;
3. decompose, consulting curation records before generic splitting;
4. resolve each atom through the thesaurus;
5. insert each atom into the graph.

Every stage is recorded in a :class:`ReportEntry` so that a curator can
audit why a label was added, merged into an existing one, or dropped.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidLabel, TaxographError
from .graph import InsertOutcome, Outcome, SubsetKind, TaxonomyGraph, as_kinds, insert_label
from .labels import DecompositionRule, Label, decompose, normalize, raw_key
from .thesaurus import EMPTY_THESAURUS, Thesaurus


class Action(str, enum.Enum):
    KEEP = "keep"
    MAP_SYNONYM = "map_synonym"
    DECOMPOSE = "decompose"
    DROP = "drop"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CurationRecord:
    """An explicit, auditable decision about one raw label.

    ``scope`` restricts the record to labels from one source set (for
    instance a single DCASE task); None applies everywhere.
    """

    raw: str
    action: Action
    outputs: tuple[Label, ...] = ()
    reason: str = ""
    scope: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "action", Action(self.action))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not self.raw.strip():
            raise InvalidLabel("curation record has an empty raw label")
        if self.action is Action.DROP and self.outputs:
            raise InvalidLabel(f"drop record {self.raw!r} must have no outputs")
        if self.action is Action.KEEP:
            expected = normalize(self.raw)
            if len(self.outputs) == 0:
                object.__setattr__(self, "outputs", (expected,))
            elif len(self.outputs) != 1 or self.outputs[0] != expected:
                raise InvalidLabel(f"keep record {self.raw!r} must output exactly {expected.text!r}")
        if self.action in (Action.MAP_SYNONYM, Action.DECOMPOSE) and not self.outputs:
            raise InvalidLabel(f"{self.action} record {self.raw!r} needs outputs")

    @property
    def key(self) -> str:
        return raw_key(self.raw)


class CurationLog:
    """Lookup over curation records by raw text, then normalized text."""

    def __init__(self, records: Iterable[CurationRecord] = ()):
        self.records = tuple(records)
        self._by_key: dict[tuple[str | None, str], CurationRecord] = {}
        for rec in self.records:
            self._by_key.setdefault((rec.scope, rec.key), rec)
        keep = {
            o.text
            for r in self.records
            if r.scope is None and r.action is Action.KEEP
            for o in r.outputs
        }
        self._keep_rule = DecompositionRule(exceptions=frozenset(keep))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def lookup(self, keys: Sequence[str], source: str | None = None) -> CurationRecord | None:
        # scoped records win over global ones for the same key
        for key in keys:
            for scope in (source, None) if source is not None else (None,):
                rec = self._by_key.get((scope, key))
                if rec is not None:
                    return rec
        return None

    def decomposition_rule(self) -> DecompositionRule:
        """Global keep records as decomposition exceptions, for :func:`decompose` users."""
        return self._keep_rule


def _as_log(records) -> CurationLog:
    if isinstance(records, CurationLog):
        return records
    return CurationLog(records or ())


@dataclass(frozen=True)
class AtomResult:
    atom: str
    kind: str
    resolved: str
    outcome: Outcome
    via: str | None = None


@dataclass(frozen=True)
class ReportEntry:
    raw: str
    normalized: str | None = None
    compound: str | None = None
    record: CurationRecord | None = None
    atoms: tuple[AtomResult, ...] = ()
    error: str | None = None
    cluster: str | None = None

    @property
    def outcome(self) -> str:
        """One-word verdict for the whole raw label."""
        if self.error is not None:
            return "error"
        if not self.atoms:
            return str(Outcome.DROPPED)
        outcomes = {a.outcome for a in self.atoms}
        if outcomes == {Outcome.DUPLICATE}:
            return str(Outcome.DUPLICATE)
        if outcomes == {Outcome.ADDED}:
            return str(Outcome.ADDED)
        return "partial"

    @property
    def chain(self) -> list[str]:
        """Texts the label passed through, raw to final atoms."""
        steps = [self.raw]
        for text in (self.normalized, self.compound):
            if text is not None and text != steps[-1]:
                steps.append(text)
        if self.atoms:
            finals = " + ".join(a.resolved for a in self.atoms)
            if finals != steps[-1]:
                steps.append(finals)
        return steps

    def describe(self) -> str:
        parts = [f"{self.raw!r}: {self.outcome}"]
        # the raw -> normalized step is noise; show the rest when anything happened
        resolution = self.chain if self.raw == self.normalized else self.chain[1:]
        if len(resolution) > 1:
            parts.append(" -> ".join(resolution))
        if self.error:
            parts.append(self.error)
        if self.record is not None:
            parts.append(f"record {self.record.action}: {self.record.reason}")
        for a in self.atoms:
            note = f" ({a.via})" if a.via else ""
            shown = a.resolved if a.resolved == a.atom else f"{a.atom} -> {a.resolved}"
            parts.append(f"{shown} {a.outcome}{note}")
        return "; ".join(parts)


@dataclass
class CurationReport:
    entries: list[ReportEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def extend(self, other: "CurationReport") -> None:
        self.entries.extend(other.entries)

    def atoms(self, outcome: Outcome | None = None) -> list[AtomResult]:
        found = [a for e in self.entries for a in e.atoms]
        return found if outcome is None else [a for a in found if a.outcome is outcome]

    def added(self) -> list[str]:
        return [a.resolved for a in self.atoms(Outcome.ADDED)]

    @property
    def errors(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.error is not None]

    @property
    def dropped(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.error is None and not e.atoms]

    def summary(self) -> dict[str, int]:
        counts = Counter(str(a.outcome) for a in self.atoms())
        return {
            "entries": len(self.entries),
            "added": counts["added"],
            "duplicate": counts["duplicate"],
            "dropped": len(self.dropped),
            "errors": len(self.errors),
        }

    def lines(self) -> list[str]:
        out = [e.describe() for e in self.entries]
        s = self.summary()
        out.append(
            f"summary: {s['entries']} labels, {s['added']} added, {s['duplicate']} duplicate, "
            f"{s['dropped']} dropped, {s['errors']} errors"
        )
        return out


def process_label(
    graph: TaxonomyGraph,
    raw: str,
    cluster_name: str,
    kinds: Iterable[SubsetKind | str] | SubsetKind | str,
    thesaurus: Thesaurus = EMPTY_THESAURUS,
    rules: Sequence[DecompositionRule] = (),
    records: CurationLog | Iterable[CurationRecord] = (),
    *,
    source: str | None = None,
    kind: str | None = None,
) -> tuple[TaxonomyGraph, ReportEntry]:
    """Run one raw label through the full pipeline.

    ``kind`` optionally tags every produced atom as object or action when
    neither a record nor the thesaurus supplies a tag. Raises EmptyLabel if
    the raw text normalizes to nothing.
    """
    log = _as_log(records)
    kinds = as_kinds(kinds)
    normalized = normalize(raw)
    compound = thesaurus.resolve(normalized)

    record = log.lookup([raw_key(raw), compound.text, normalized.text], source)
    if record is not None and record.action is Action.DROP:
        entry = ReportEntry(raw, normalized.text, compound.text, record, cluster=cluster_name)
        return graph, entry
    if record is not None:
        atoms = list(record.outputs)
    else:
        keep = log.decomposition_rule()
        atoms = decompose(compound, [*rules, keep] if keep.exceptions else rules, source=source)

    results = []
    for atom in atoms:
        if kind is not None and atom.kind == "untagged":
            atom = atom.with_kind(kind)
        resolved = thesaurus.resolve(atom)
        graph, outcome = insert_label(graph, resolved, cluster_name, kinds, thesaurus)
        results.append(_atom_result(atom, outcome))
    entry = ReportEntry(raw, normalized.text, compound.text, record, tuple(results), cluster=cluster_name)
    return graph, entry


def _atom_result(atom: Label, outcome: InsertOutcome) -> AtomResult:
    via = outcome.via
    if via is None and outcome.text != atom.text:
        via = "synonym"
    return AtomResult(atom.text, atom.kind, outcome.text, outcome.status, via)


@dataclass(frozen=True)
class LabelSpec:
    """A raw label with optional per-label overrides from a label-set file."""

    raw: str
    kind: str | None = None
    cluster: str | None = None
    subsets: frozenset[SubsetKind] | None = None


def merge_label_set(
    graph: TaxonomyGraph,
    raws: Iterable[str | LabelSpec],
    cluster_name: str,
    kinds: Iterable[SubsetKind | str] | SubsetKind | str,
    thesaurus: Thesaurus = EMPTY_THESAURUS,
    rules: Sequence[DecompositionRule] = (),
    records: CurationLog | Iterable[CurationRecord] = (),
    *,
    source: str | None = None,
) -> tuple[TaxonomyGraph, CurationReport]:
    """Fold :func:`process_label` over ``raws`` in order.

    Per-label failures become report entries carrying an error; the batch
    always runs to the end.
    """
    log = _as_log(records)
    report = CurationReport()
    for item in raws:
        spec = item if isinstance(item, LabelSpec) else LabelSpec(item)
        cluster = spec.cluster or cluster_name
        try:
            graph, entry = process_label(
                graph,
                spec.raw,
                cluster,
                spec.subsets or kinds,
                thesaurus,
                rules,
                log,
                source=source,
                kind=spec.kind,
            )
        except (TaxographError, ValueError) as exc:
            entry = ReportEntry(spec.raw, error=f"{type(exc).__name__}: {exc}", cluster=cluster)
        report.entries.append(entry)
    return graph, report
