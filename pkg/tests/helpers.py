"""Random graph generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import math
import random

from taxograph.graph import SubsetKind, TaxonomyGraph, errors_only, validate
from taxograph.labels import KINDS, Label
from taxograph.thesaurus import Synset, Thesaurus

_SYLLABLES = ["ba", "ko", "ri", "te", "mu", "sa", "lo", "ne", "fi", "da", "pu", "ve", "zo", "hi", "ga"]

# 225 distinct alphabetic words; none can equal a cluster name ("group N")
WORDS = sorted({a + b for a in _SYLLABLES for b in _SYLLABLES})
CLUSTER_NAMES = [f"group {i}" for i in range(8)]
ALL_KINDS = list(SubsetKind)


def random_kinds(rng: random.Random) -> frozenset[SubsetKind]:
    return frozenset(rng.sample(ALL_KINDS, rng.randint(1, 3)))


def random_graph(
    rng: random.Random,
    max_labels: int = 30,
    vocab: list[str] | None = None,
    clusters: list[str] | None = None,
    edge_prob: float = 0.05,
    weights: bool = False,
    min_labels: int = 0,
) -> TaxonomyGraph:
    """A valid random cluster graph (no thesaurus involved)."""
    vocab = vocab or WORDS[:40]
    clusters = clusters or CLUSTER_NAMES[:5]
    n = rng.randint(min_labels, min(max_labels, len(vocab)))
    texts = rng.sample(vocab, n)
    members: dict[str, list[str]] = {}
    for text in texts:
        for name in rng.sample(clusters, rng.choice((1, 1, 1, 2))):
            members.setdefault(name, []).append(text)
    labels = [Label(t, rng.choice(KINDS)) for t in texts]
    membership = {t: random_kinds(rng) for t in texts}
    graph = TaxonomyGraph(labels, members, membership)
    edges = []
    for a, b in itertools.combinations(texts, 2):
        if rng.random() < edge_prob and not graph.share_cluster(a, b):
            weight = None
            if weights and rng.random() < 0.5:
                weight = rng.choice((0.5, 1.0, 2.0, 2.5, 3.0))
            edges.append((a, b, weight))
    graph = TaxonomyGraph(labels, members, membership, edges)
    assert not errors_only(validate(graph)), validate(graph)
    return graph


def synthetic_thesaurus(rng: random.Random, vocab: list[str], n_synsets: int = 40) -> Thesaurus:
    """Disjoint synsets of 2-4 words drawn from ``vocab``."""
    pool = list(vocab)
    rng.shuffle(pool)
    synsets = []
    for _ in range(n_synsets):
        size = rng.randint(2, 4)
        if len(pool) < size:
            break
        group, pool = pool[:size], pool[size:]
        synsets.append(Synset(group[0], frozenset(group[1:])))
    return Thesaurus(synsets)


# -- oracles ------------------------------------------------------------------------


def all_pairs_distances(graph: TaxonomyGraph) -> dict[tuple[str, str], float]:
    """Floyd-Warshall over the explicitly materialized adjacency."""
    nodes = sorted(graph.texts)
    dist = {(a, b): (0 if a == b else math.inf) for a in nodes for b in nodes}
    for cluster in graph.clusters:
        for a, b in itertools.permutations(cluster.members, 2):
            dist[a, b] = min(dist[a, b], 1)
    for a, b, w in graph.cross_edges:
        cost = 1 if w is None else math.ceil(w)
        dist[a, b] = min(dist[a, b], cost)
        dist[b, a] = min(dist[b, a], cost)
    for k in nodes:
        for i in nodes:
            dik = dist[i, k]
            if dik == math.inf:
                continue
            for j in nodes:
                if dik + dist[k, j] < dist[i, j]:
                    dist[i, j] = dik + dist[k, j]
    return dist


def pairwise_synonym_collisions(graph: TaxonomyGraph, thesaurus: Thesaurus) -> set[str]:
    """Labels that share a synset with another label, by direct pair scan."""
    found = set()
    for a, b in itertools.combinations(sorted(graph.texts), 2):
        if thesaurus.are_synonyms(a, b):
            found.update((a, b))
    return found
