"""The cluster-graph taxonomy: superset T, clusters, subset kinds, cross edges.

Clusters are cliques: every pair of labels sharing a cluster is adjacent,
so intra-cluster edges are never stored. Only edges between labels in
different clusters are kept explicitly (``cross_edges``). Cluster names
are metadata and never graph nodes.

Graphs are immutable values. Every operation that changes a graph returns
a new one; the constructor performs no checks so that invalid graphs can
be built for :func:`validate` to inspect.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidEdge, InvalidLabel, SubsetNameCollision, UnknownCluster, UnknownLabel
from .labels import Label, is_normalized, join_kinds
from .thesaurus import EMPTY_THESAURUS, Thesaurus


class SubsetKind(str, enum.Enum):
    ENVIRONMENT = "environment"
    EVENT = "event"
    CONTEXT = "context"

    def __str__(self) -> str:
        return self.value


def as_kinds(kinds: Iterable[SubsetKind | str] | SubsetKind | str) -> frozenset[SubsetKind]:
    if isinstance(kinds, (str, SubsetKind)):
        kinds = [kinds]
    try:
        return frozenset(SubsetKind(k) for k in kinds)
    except ValueError as exc:
        raise ValueError(f"unknown subset kind in {list(kinds)!r}") from exc


@dataclass(frozen=True)
class Cluster:
    name: str
    members: tuple[str, ...]

    def __contains__(self, text: str) -> bool:
        return text in self.members


def edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


class TaxonomyGraph:
    """Superset T organised as a cluster graph."""

    def __init__(
        self,
        labels: Iterable[Label] = (),
        clusters: Mapping[str, Iterable[str]] | Iterable[Cluster] = (),
        membership: Mapping[str, Iterable[SubsetKind | str]] | None = None,
        cross_edges: Iterable[tuple] = (),
        notes: Mapping[str, str] | None = None,
    ):
        self._labels: dict[str, Label] = {}
        for lab in labels:
            if lab.text in self._labels:
                lab = Label(lab.text, join_kinds(self._labels[lab.text].kind, lab.kind))
            self._labels[lab.text] = lab
        if isinstance(clusters, Mapping):
            clusters = [Cluster(n, tuple(m)) for n, m in clusters.items()]
        self._clusters: dict[str, tuple[str, ...]] = {}
        for cluster in clusters:
            members = self._clusters.get(cluster.name, ())
            self._clusters[cluster.name] = tuple(dict.fromkeys(members + tuple(cluster.members)))
        self._membership: dict[str, frozenset[SubsetKind]] = {
            text: as_kinds(kinds) for text, kinds in (membership or {}).items()
        }
        self._edges: dict[tuple[str, str], float | None] = {}
        for edge in cross_edges:
            a, b = edge[0], edge[1]
            weight = edge[2] if len(edge) > 2 else None
            key = edge_key(a, b)
            self._edges[key] = _join_weights(self._edges.get(key), weight)
        self.notes: dict[str, str] = dict(notes or {})

    @classmethod
    def empty(cls) -> "TaxonomyGraph":
        return cls()

    def _evolve(self, labels=None, clusters=None, membership=None, edges=None, cls=None):
        new = object.__new__(cls or TaxonomyGraph)
        new._labels = self._labels if labels is None else labels
        new._clusters = self._clusters if clusters is None else clusters
        new._membership = self._membership if membership is None else membership
        new._edges = self._edges if edges is None else edges
        new.notes = dict(self.notes)
        return new

    # -- read access ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, item: Label | str) -> bool:
        text = item.text if isinstance(item, Label) else item
        return text in self._labels

    def __iter__(self):
        return iter(self._labels.values())

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}({len(self._labels)} labels, "
            f"{len(self._clusters)} clusters, {len(self._edges)} cross edges)"
        )

    def __eq__(self, other):
        if not isinstance(other, TaxonomyGraph):
            return NotImplemented
        return self._signature() == other._signature()

    __hash__ = None

    def _signature(self):
        return (
            {t: lab.kind for t, lab in self._labels.items()},
            {n: frozenset(m) for n, m in self._clusters.items()},
            {t: k for t, k in self._membership.items() if k},
            dict(self._edges),
        )

    @property
    def labels(self) -> frozenset[Label]:
        return frozenset(self._labels.values())

    @property
    def texts(self) -> frozenset[str]:
        return frozenset(self._labels)

    def label(self, text: str) -> Label:
        try:
            return self._labels[text]
        except KeyError:
            raise UnknownLabel(text) from None

    @property
    def clusters(self) -> tuple[Cluster, ...]:
        return tuple(Cluster(n, m) for n, m in self._clusters.items())

    @property
    def cluster_names(self) -> frozenset[str]:
        return frozenset(self._clusters)

    def cluster(self, name: str) -> Cluster:
        try:
            return Cluster(name, self._clusters[name])
        except KeyError:
            raise UnknownCluster(name) from None

    def kinds_of(self, text: str) -> frozenset[SubsetKind]:
        return self._membership.get(text, frozenset())

    @property
    def membership(self) -> Mapping[str, frozenset[SubsetKind]]:
        return dict(self._membership)

    @cached_property
    def _clusters_by_label(self) -> dict[str, tuple[str, ...]]:
        index: dict[str, list[str]] = {}
        for name, members in self._clusters.items():
            for text in members:
                index.setdefault(text, []).append(name)
        return {t: tuple(names) for t, names in index.items()}

    @cached_property
    def _cross_adjacency(self) -> dict[str, dict[str, float | None]]:
        adj: dict[str, dict[str, float | None]] = {}
        for (a, b), w in self._edges.items():
            adj.setdefault(a, {})[b] = w
            adj.setdefault(b, {})[a] = w
        return adj

    def clusters_of(self, text: str) -> tuple[str, ...]:
        return self._clusters_by_label.get(text, ())

    @property
    def cross_edges(self) -> tuple[tuple[str, str, float | None], ...]:
        return tuple((a, b, w) for (a, b), w in sorted(self._edges.items()))

    def subset(self, kind: SubsetKind | str) -> frozenset[str]:
        """Texts of the labels carrying subset kind ``kind`` (ev, en or c)."""
        kind = SubsetKind(kind)
        return frozenset(t for t in self._labels if kind in self._membership.get(t, ()))

    def share_cluster(self, a: str, b: str) -> bool:
        return bool(set(self.clusters_of(a)) & set(self.clusters_of(b)))


def _join_weights(a: float | None, b: float | None) -> float | None:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


# -- mutation (returns new graphs) ----------------------------------------------


class Outcome(str, enum.Enum):
    ADDED = "added"
    DUPLICATE = "duplicate"
    DROPPED = "dropped"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class InsertOutcome:
    """Result of inserting one atom.

    ``text`` is the node the atom landed on; ``via`` says why it differs
    from ``requested`` ("synonym" or "first-seen synonym"), if it does.
    """

    status: Outcome
    text: str
    requested: str
    via: str | None = None


def _check_cluster_name(name: str) -> None:
    if not is_normalized(name):
        raise InvalidLabel(f"cluster name is not normalized: {name!r}")


def _drop_intra_edges(edges, clusters_by_label_fn):
    return {
        (a, b): w
        for (a, b), w in edges.items()
        if not set(clusters_by_label_fn(a)) & set(clusters_by_label_fn(b))
    }


def insert_label(
    graph: TaxonomyGraph,
    label: Label,
    cluster_name: str,
    kinds: Iterable[SubsetKind | str] | SubsetKind | str,
    thesaurus: Thesaurus = EMPTY_THESAURUS,
) -> tuple[TaxonomyGraph, InsertOutcome]:
    """Add ``label`` to ``cluster_name`` with subset ``kinds``.

    The label is resolved through the thesaurus first. If its preferred
    term is already in T, or T already holds another member of the same
    synset (first seen wins), only cluster and kind membership are
    extended and the outcome is DUPLICATE. Cross edges whose endpoints
    become co-clustered are dropped since the clique already covers them.
    """
    kinds = as_kinds(kinds)
    if not kinds:
        raise ValueError("at least one subset kind is required")
    _check_cluster_name(cluster_name)
    resolved = thesaurus.resolve(label)
    via = "synonym" if resolved.text != label.text else None
    target = resolved.text
    if target not in graph._labels:
        synset = thesaurus.synset(target)
        if synset is not None:
            terms = synset.terms
            if any(t in graph._labels for t in terms):
                target = next(t for t in graph._labels if t in terms)
                via = "first-seen synonym"
    if target in graph._clusters:
        raise SubsetNameCollision(f"label {target!r} equals a cluster name")
    if cluster_name in graph._labels or cluster_name == target:
        raise SubsetNameCollision(f"cluster name {cluster_name!r} equals a label")

    labels = dict(graph._labels)
    if target in labels:
        status = Outcome.DUPLICATE
        labels[target] = Label(target, join_kinds(labels[target].kind, resolved.kind))
    else:
        status = Outcome.ADDED
        labels[target] = Label(target, resolved.kind)

    clusters = dict(graph._clusters)
    members = clusters.get(cluster_name, ())
    if target not in members:
        clusters[cluster_name] = members + (target,)
    membership = dict(graph._membership)
    membership[target] = membership.get(target, frozenset()) | kinds

    new = graph._evolve(labels=labels, clusters=clusters, membership=membership)
    if graph._edges and clusters is not graph._clusters:
        new._edges = _drop_intra_edges(graph._edges, new.clusters_of)
    return new, InsertOutcome(status, target, label.text, via)


def with_cluster(graph: TaxonomyGraph, name: str, members: Iterable[str]) -> TaxonomyGraph:
    """Create or extend cluster ``name`` with labels already in the graph."""
    _check_cluster_name(name)
    if name in graph._labels:
        raise SubsetNameCollision(f"cluster name {name!r} equals a label")
    members = list(members)
    for text in members:
        if text not in graph._labels:
            raise UnknownLabel(text)
    clusters = dict(graph._clusters)
    clusters[name] = tuple(dict.fromkeys(clusters.get(name, ()) + tuple(members)))
    new = graph._evolve(clusters=clusters)
    new._edges = _drop_intra_edges(graph._edges, new.clusters_of)
    return new


def add_edge(graph: TaxonomyGraph, a: str, b: str, weight: float | None = None) -> TaxonomyGraph:
    """Add a cross edge between labels of different clusters."""
    for text in (a, b):
        if text not in graph._labels:
            raise UnknownLabel(text)
    if a == b:
        raise InvalidEdge(f"self edge on {a!r}")
    if graph.share_cluster(a, b):
        raise InvalidEdge(f"{a!r} and {b!r} share a cluster; the edge is implicit")
    if weight is not None and (weight < 0 or math.isnan(weight)):
        raise InvalidEdge(f"edge weight must be non-negative, got {weight!r}")
    edges = dict(graph._edges)
    key = edge_key(a, b)
    edges[key] = _join_weights(edges.get(key), weight)
    return graph._evolve(edges=edges)


# -- validation ------------------------------------------------------------------

ERROR = "error"
WARNING = "warning"

# closed set of issue codes and their severities
ISSUE_CODES = {
    "DANGLING_EDGE": ERROR,  # cross edge endpoint is not a label
    "EMPTY_CLUSTER": ERROR,
    "INTRA_CLUSTER_EDGE": ERROR,  # explicit edge between co-clustered labels
    "MISSING_SUBSET_KIND": ERROR,
    "NEGATIVE_WEIGHT": ERROR,
    "ORPHAN_LABEL": ERROR,  # label in no cluster
    "SELF_EDGE": ERROR,
    "SUBSET_NAME_AS_NODE": ERROR,
    "SYNONYM_COLLISION": ERROR,
    "UNKNOWN_MEMBER": ERROR,  # cluster member that is not a label
    "UNNORMALIZED_TEXT": ERROR,
    "VARIANT_TERM": WARNING,  # label is a non-preferred synonym
}


@dataclass(frozen=True, order=True)
class ValidationIssue:
    code: str
    subject: str
    detail: str = ""
    severity: str = ERROR

    def __post_init__(self):
        if self.code not in ISSUE_CODES:
            raise ValueError(f"undocumented issue code {self.code!r}")

    def __str__(self) -> str:
        return f"{self.severity} {self.code} {self.subject!r}: {self.detail}"


def _issue(code: str, subject: str, detail: str = "") -> ValidationIssue:
    return ValidationIssue(code, subject, detail, ISSUE_CODES[code])


def validate(graph: TaxonomyGraph, thesaurus: Thesaurus = EMPTY_THESAURUS) -> list[ValidationIssue]:
    """Check every cluster-graph invariant; returns issues sorted by code then subject."""
    issues: list[ValidationIssue] = []
    texts = graph._labels

    for text in texts:
        if not is_normalized(text):
            issues.append(_issue("UNNORMALIZED_TEXT", text, "label text"))
        if not graph.clusters_of(text):
            issues.append(_issue("ORPHAN_LABEL", text, "label belongs to no cluster"))
        if not graph.kinds_of(text):
            issues.append(_issue("MISSING_SUBSET_KIND", text, "label has no subset kind"))
        if thesaurus.is_variant(text) and thesaurus.preferred(text) not in texts:
            issues.append(
                _issue("VARIANT_TERM", text, f"preferred term is {thesaurus.preferred(text)!r}")
            )

    for name, members in graph._clusters.items():
        if not is_normalized(name):
            issues.append(_issue("UNNORMALIZED_TEXT", name, "cluster name"))
        if name in texts:
            issues.append(_issue("SUBSET_NAME_AS_NODE", name, "cluster name is also a label"))
        if not members:
            issues.append(_issue("EMPTY_CLUSTER", name))
        for text in members:
            if text not in texts:
                issues.append(_issue("UNKNOWN_MEMBER", text, f"member of cluster {name!r}"))

    for text in graph._membership:
        if text not in texts and graph._membership[text]:
            issues.append(_issue("UNKNOWN_MEMBER", text, "has subset kinds but is not a label"))

    by_preferred: dict[str, list[str]] = {}
    for text in texts:
        by_preferred.setdefault(thesaurus.preferred(text), []).append(text)
    for preferred, group in by_preferred.items():
        if len(group) > 1:
            for text in sorted(group):
                others = ", ".join(t for t in sorted(group) if t != text)
                issues.append(_issue("SYNONYM_COLLISION", text, f"synonym of {others}"))

    for (a, b), weight in graph._edges.items():
        subject = f"{a}\t{b}"
        if a == b:
            issues.append(_issue("SELF_EDGE", a))
            continue
        missing = [t for t in (a, b) if t not in texts]
        if missing:
            issues.append(_issue("DANGLING_EDGE", subject, f"unknown endpoint(s) {missing}"))
        elif graph.share_cluster(a, b):
            issues.append(_issue("INTRA_CLUSTER_EDGE", subject))
        if weight is not None and not weight >= 0:
            issues.append(_issue("NEGATIVE_WEIGHT", subject, f"weight {weight!r}"))

    return sorted(set(issues))


def errors_only(issues: Iterable[ValidationIssue]) -> list[ValidationIssue]:
    return [i for i in issues if i.severity == ERROR]


# -- adjacency -----------------------------------------------------------------------


def _resolve_text(graph: TaxonomyGraph, label: Label | str) -> str:
    text = label.text if isinstance(label, Label) else label
    if text not in graph._labels:
        raise UnknownLabel(text)
    return text


def neighbors(graph: TaxonomyGraph, label: Label | str) -> set[Label]:
    """Co-cluster members plus cross-edge endpoints, excluding the label itself."""
    text = _resolve_text(graph, label)
    found: set[str] = set()
    for name in graph.clusters_of(text):
        found.update(graph._clusters[name])
    found.update(graph._cross_adjacency.get(text, ()))
    found.discard(text)
    return {graph._labels[t] for t in found if t in graph._labels}


def _edge_cost(weight: float | None) -> int:
    return 1 if weight is None else math.ceil(weight)


def distance(graph: TaxonomyGraph, a: Label | str, b: Label | str) -> int | None:
    """Shortest-path length between two labels, or None if unreachable.

    Clique edges cost 1. A cross edge costs 1, or the ceiling of its weight
    when one is set.
    """
    source = _resolve_text(graph, a)
    target = _resolve_text(graph, b)
    if source == target:
        return 0
    best = {source: 0}
    expanded_clusters: set[str] = set()
    heap = [(0, source)]
    while heap:
        dist, text = heapq.heappop(heap)
        if text == target:
            return dist
        if dist > best.get(text, math.inf):
            continue
        steps = []
        for name in graph.clusters_of(text):
            # a cluster reached at distance d offers d+1 to all members; later visits cannot improve
            if name in expanded_clusters:
                continue
            expanded_clusters.add(name)
            steps.extend((m, 1) for m in graph._clusters[name])
        steps.extend((m, _edge_cost(w)) for m, w in graph._cross_adjacency.get(text, {}).items())
        for other, cost in steps:
            if other not in graph._labels:
                continue
            nd = dist + cost
            if nd < best.get(other, math.inf):
                best[other] = nd
                heapq.heappush(heap, (nd, other))
    return None
