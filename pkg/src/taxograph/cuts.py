"""Graph cuts and set algebra over taxonomies.

A cut keeps the labels matching a :class:`CutSelector` together with their
full metadata, restricted to what was kept: clusters lose non-retained
members (and vanish when empty), and cross edges survive only when both
endpoints do. The result is a standalone, valid taxonomy.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable

from .errors import SubsetNameCollision, SynonymConflict, UnknownCluster, UnknownLabel
from .graph import SubsetKind, TaxonomyGraph, _join_weights, as_kinds
from .labels import Label, join_kinds
from .thesaurus import EMPTY_THESAURUS, Thesaurus

INTERSECTION = "intersection"
UNION = "union"


@dataclass(frozen=True)
class CutSelector:
    """Which labels a cut keeps.

    Each non-empty criterion is a predicate: the label carries one of
    ``kinds``, belongs to one of ``clusters``, or is one of ``labels``.
    ``mode`` combines the predicates by intersection or union.
    """

    kinds: frozenset[SubsetKind] = frozenset()
    clusters: frozenset[str] = frozenset()
    labels: frozenset[str] = frozenset()
    mode: str = INTERSECTION

    def __post_init__(self):
        object.__setattr__(self, "kinds", as_kinds(self.kinds))
        object.__setattr__(self, "clusters", frozenset(self.clusters))
        object.__setattr__(self, "labels", frozenset(self.labels))
        if self.mode not in (INTERSECTION, UNION):
            raise ValueError(f"mode must be {INTERSECTION!r} or {UNION!r}, got {self.mode!r}")
        if not (self.kinds or self.clusters or self.labels):
            raise ValueError("a cut selector needs at least one criterion")

    @classmethod
    def full(cls, graph: TaxonomyGraph) -> "CutSelector":
        return cls(kinds=frozenset(SubsetKind), clusters=graph.cluster_names)

    def describe(self) -> str:
        parts = []
        for name, values in (("kinds", self.kinds), ("clusters", self.clusters), ("labels", self.labels)):
            if values:
                parts.append(f"{name}={','.join(sorted(str(v) for v in values))}")
        return f"{self.mode}({'; '.join(parts)})"

    def matches(self, graph: TaxonomyGraph, text: str) -> bool:
        tests = []
        if self.kinds:
            tests.append(bool(self.kinds & graph.kinds_of(text)))
        if self.clusters:
            tests.append(bool(self.clusters.intersection(graph.clusters_of(text))))
        if self.labels:
            tests.append(text in self.labels)
        return all(tests) if self.mode == INTERSECTION else any(tests)


@dataclass(frozen=True)
class Provenance:
    parent: str  # fingerprint of the parent graph
    selector: str


class SubGraph(TaxonomyGraph):
    """A taxonomy derived from another one; ``parent`` records where from."""

    parent: Provenance | None = None

    @classmethod
    def of(cls, graph: TaxonomyGraph, parent: Provenance | None = None) -> "SubGraph":
        sub = graph._evolve(cls=cls)
        sub.parent = parent
        return sub


def fingerprint(graph: TaxonomyGraph) -> str:
    """Stable content hash of a graph, independent of insertion order."""
    labels, clusters, membership, edges = graph._signature()
    canonical = {
        "labels": sorted(labels.items()),
        "clusters": sorted((n, sorted(m)) for n, m in clusters.items()),
        "membership": sorted((t, sorted(str(k) for k in ks)) for t, ks in membership.items()),
        "edges": sorted([a, b, w] for (a, b), w in edges.items()),
    }
    blob = json.dumps(canonical, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def restrict(graph: TaxonomyGraph, keep: Iterable[str]) -> TaxonomyGraph:
    """Sub-taxonomy induced by the label texts in ``keep``."""
    keep = set(keep) & set(graph._labels)
    labels = {t: lab for t, lab in graph._labels.items() if t in keep}
    clusters = {}
    for name, members in graph._clusters.items():
        kept = tuple(m for m in members if m in keep)
        if kept:
            clusters[name] = kept
    membership = {t: k for t, k in graph._membership.items() if t in keep}
    edges = {(a, b): w for (a, b), w in graph._edges.items() if a in keep and b in keep}
    return graph._evolve(labels=labels, clusters=clusters, membership=membership, edges=edges)


def cut(graph: TaxonomyGraph, selector: CutSelector) -> SubGraph:
    """Slice ``graph`` into the sub-taxonomy selected by ``selector``."""
    for name in selector.clusters:
        if name not in graph._clusters:
            raise UnknownCluster(name)
    for text in selector.labels:
        if text not in graph._labels:
            raise UnknownLabel(text)
    keep = [t for t in graph._labels if selector.matches(graph, t)]
    return SubGraph.of(restrict(graph, keep), Provenance(fingerprint(graph), selector.describe()))


def _representatives(graphs: Iterable[TaxonomyGraph], thesaurus: Thesaurus) -> dict[str, str]:
    """Map every label text to the text it collapses to across ``graphs``.

    Synonyms present together collapse onto the preferred term. A lone
    variant is left as it is; two different variants without the preferred
    term are a conflict.
    """
    groups: dict[str, set[str]] = {}
    for graph in graphs:
        for text in graph._labels:
            groups.setdefault(thesaurus.preferred(text), set()).add(text)
    mapping = {}
    for preferred, texts in groups.items():
        if len(texts) == 1:
            (rep,) = texts
        elif preferred in texts:
            rep = preferred
        else:
            raise SynonymConflict(
                f"variants {sorted(texts)} of {preferred!r} meet without the preferred term"
            )
        for text in texts:
            mapping[text] = rep
    return mapping


def _rename(graph: TaxonomyGraph, mapping: dict[str, str]) -> TaxonomyGraph:
    if all(mapping.get(t, t) == t for t in graph._labels):
        return graph
    labels: dict[str, Label] = {}
    membership: dict[str, frozenset[SubsetKind]] = {}
    for text, lab in graph._labels.items():
        new = mapping.get(text, text)
        kind = join_kinds(labels[new].kind, lab.kind) if new in labels else lab.kind
        labels[new] = Label(new, kind)
    for text, kinds in graph._membership.items():
        new = mapping.get(text, text)
        membership[new] = membership.get(new, frozenset()) | kinds
    clusters = {
        name: tuple(dict.fromkeys(mapping.get(m, m) for m in members))
        for name, members in graph._clusters.items()
    }
    edges: dict[tuple[str, str], float | None] = {}
    for (a, b), w in graph._edges.items():
        a, b = sorted((mapping.get(a, a), mapping.get(b, b)))
        if a != b:
            edges[(a, b)] = _join_weights(edges.get((a, b)), w)
    return graph._evolve(labels=labels, clusters=clusters, membership=membership, edges=edges)


def _plain_union(a: TaxonomyGraph, b: TaxonomyGraph) -> TaxonomyGraph:
    labels = dict(a._labels)
    for text, lab in b._labels.items():
        labels[text] = Label(text, join_kinds(labels[text].kind, lab.kind)) if text in labels else lab
    clusters = dict(a._clusters)
    for name, members in b._clusters.items():
        clusters[name] = tuple(dict.fromkeys(clusters.get(name, ()) + members))
    clash = sorted(set(labels) & set(clusters))
    if clash:
        raise SubsetNameCollision(f"names used both as label and cluster: {clash}")
    membership = dict(a._membership)
    for text, kinds in b._membership.items():
        membership[text] = membership.get(text, frozenset()) | kinds
    edges = dict(a._edges)
    for key, w in b._edges.items():
        edges[key] = _join_weights(edges.get(key), w)
    merged = a._evolve(labels=labels, clusters=clusters, membership=membership, edges={})
    merged._edges = {k: w for k, w in edges.items() if not merged.share_cluster(*k)}
    return merged


def union(a: TaxonomyGraph, b: TaxonomyGraph, thesaurus: Thesaurus = EMPTY_THESAURUS) -> SubGraph:
    """Synonym-aware union: synonyms collapse to one node, metadata is merged."""
    mapping = _representatives((a, b), thesaurus)
    return SubGraph.of(_plain_union(_rename(a, mapping), _rename(b, mapping)))


def intersect(a: TaxonomyGraph, b: TaxonomyGraph, thesaurus: Thesaurus = EMPTY_THESAURUS) -> SubGraph:
    """Labels present in both (synonym-aware), with both graphs' metadata for them."""
    mapping = _representatives((a, b), thesaurus)
    a, b = _rename(a, mapping), _rename(b, mapping)
    keep = set(a._labels) & set(b._labels)
    return SubGraph.of(_plain_union(restrict(a, keep), restrict(b, keep)))


LEXICOGRAPHIC = "lexicographic"
INSERTION = "insertion"


def export_label_vector(graph: TaxonomyGraph, ordering: str = LEXICOGRAPHIC) -> list[str]:
    """Ordered label texts, usable as the axis of a multi-label target vector."""
    if ordering == LEXICOGRAPHIC:
        return sorted(graph._labels)
    if ordering == INSERTION:
        return list(graph._labels)
    raise ValueError(f"unknown ordering {ordering!r}")


def encode_labels(vector: list[str], present: Iterable[str]) -> list[int]:
    """Multi-hot encoding of ``present`` against a label vector."""
    index = {text: i for i, text in enumerate(vector)}
    hot = [0] * len(vector)
    for text in present:
        if text not in index:
            raise UnknownLabel(text)
        hot[index[text]] = 1
    return hot
