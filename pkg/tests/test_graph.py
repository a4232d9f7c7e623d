import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import WORDS, all_pairs_distances, pairwise_synonym_collisions, random_graph, synthetic_thesaurus
from taxograph.errors import InvalidEdge, SubsetNameCollision, UnknownLabel
from taxograph.graph import (
    ISSUE_CODES,
    Outcome,
    SubsetKind,
    TaxonomyGraph,
    ValidationIssue,
    add_edge,
    distance,
    errors_only,
    insert_label,
    neighbors,
    validate,
    with_cluster,
)
from taxograph.labels import ACTION, OBJECT, Label
from taxograph.thesaurus import Synset, Thesaurus

EV = SubsetKind.EVENT
EN = SubsetKind.ENVIRONMENT


def small(*clusters: tuple[str, list[str]], edges=()):
    members = dict(clusters)
    texts = dict.fromkeys(t for ms in members.values() for t in ms)
    return TaxonomyGraph([Label(t) for t in texts], members, {t: {EV} for t in texts}, edges)


def test_subset_kind_is_closed():
    assert {str(k) for k in SubsetKind} == {"environment", "event", "context"}


def test_insert_into_empty_graph_adds():
    graph, outcome = insert_label(TaxonomyGraph(), Label("frying"), "d18t4", EV)
    assert outcome.status is Outcome.ADDED
    assert graph.texts == {"frying"}
    assert graph.clusters_of("frying") == ("d18t4",)
    assert graph.kinds_of("frying") == {EV}


def test_insert_identical_is_duplicate(thesaurus):
    graph, _ = insert_label(TaxonomyGraph(), Label("speech"), "d13t2", EV, thesaurus)
    graph2, outcome = insert_label(graph, Label("speech"), "d16t2", EV, thesaurus)
    assert outcome.status is Outcome.DUPLICATE
    assert len(graph2) == 1
    assert set(graph2.clusters_of("speech")) == {"d13t2", "d16t2"}


def test_insert_synonym_is_duplicate(thesaurus):
    graph, _ = insert_label(TaxonomyGraph(), Label("cough"), "d13t2", EV, thesaurus)
    graph, outcome = insert_label(graph, Label("coughing"), "d16t2", EV, thesaurus)
    assert outcome.status is Outcome.DUPLICATE
    assert outcome.text == "cough"
    assert graph.texts == {"cough"}


def test_insert_extends_kinds_and_joins_label_kind():
    graph, _ = insert_label(TaxonomyGraph(), Label("bus", OBJECT), "d16t3", EV)
    graph, outcome = insert_label(graph, Label("bus", ACTION), "d13t1", EN)
    assert outcome.status is Outcome.DUPLICATE
    assert graph.kinds_of("bus") == {EV, EN}
    assert graph.label("bus").kind == ACTION


def test_insert_first_seen_synonym_wins():
    thes = Thesaurus([Synset("alpha", frozenset({"beta", "gamma"}))])
    # a graph already holding a variant, built without the pipeline
    graph = small(("one", ["beta"]))
    graph, outcome = insert_label(graph, Label("gamma"), "two", EV, thes)
    assert outcome.status is Outcome.DUPLICATE
    assert outcome.text == "beta"
    assert outcome.via == "first-seen synonym"


def test_insert_is_idempotent(thesaurus):
    graph = small(("a", ["door", "knock"]))
    once, _ = insert_label(graph, Label("slam"), "b", EV, thesaurus)
    twice, outcome = insert_label(once, Label("slam"), "b", EV, thesaurus)
    assert once == twice
    assert outcome.status is Outcome.DUPLICATE


def test_insert_rejects_subset_name_as_node():
    graph = small(("speech", ["talk"]))
    with pytest.raises(SubsetNameCollision):
        insert_label(graph, Label("speech"), "other", EV)
    with pytest.raises(SubsetNameCollision):
        insert_label(graph, Label("ring"), "talk", EV)


def test_insert_requires_a_kind():
    with pytest.raises(ValueError):
        insert_label(TaxonomyGraph(), Label("door"), "a", [])


def test_insert_drops_edge_made_implicit():
    graph = small(("a", ["x"]), ("b", ["y"]), edges=[("x", "y")])
    assert graph.cross_edges == (("x", "y", None),)
    graph, _ = insert_label(graph, Label("y"), "a", EV)
    assert graph.cross_edges == ()
    assert not errors_only(validate(graph))


def test_validate_synonym_collision(thesaurus):
    graph = small(("a", ["cough", "coughing"]))
    issues = errors_only(validate(graph, thesaurus))
    assert {i.code for i in issues} == {"SYNONYM_COLLISION"}
    assert {i.subject for i in issues} == pairwise_synonym_collisions(graph, thesaurus)


def test_validate_subset_name_as_node():
    graph = small(("speech", ["speech"]))
    assert [i.code for i in validate(graph)] == ["SUBSET_NAME_AS_NODE"]


def test_validate_structural_problems():
    graph = TaxonomyGraph(
        [Label("a"), Label("b"), Label("c")],
        {"one": ["a", "b", "ghost"], "empty": []},
        {"a": {EV}, "b": {EV}},
        [("a", "b"), ("a", "zz"), ("a", "a"), ("a", "c", -1.0)],
    )
    codes = {i.code for i in validate(graph)}
    assert codes == {
        "UNKNOWN_MEMBER",
        "EMPTY_CLUSTER",
        "ORPHAN_LABEL",
        "MISSING_SUBSET_KIND",
        "INTRA_CLUSTER_EDGE",
        "DANGLING_EDGE",
        "SELF_EDGE",
        "NEGATIVE_WEIGHT",
    }


def test_validate_orders_by_code_then_subject():
    graph = TaxonomyGraph([Label("b"), Label("a")], {}, {})
    issues = validate(graph)
    assert issues == sorted(issues)
    assert [(i.code, i.subject) for i in issues][:2] == [("MISSING_SUBSET_KIND", "a"), ("MISSING_SUBSET_KIND", "b")]


def test_variant_term_is_only_a_warning(thesaurus):
    graph = small(("a", ["coughing"]))
    (issue,) = validate(graph, thesaurus)
    assert issue.code == "VARIANT_TERM"
    assert not errors_only([issue])


def test_issue_codes_are_closed():
    with pytest.raises(ValueError):
        ValidationIssue("MADE_UP", "x")
    assert set(ISSUE_CODES.values()) == {"error", "warning"}


def test_dcase_graph_validates_clean(dcase, thesaurus):
    assert errors_only(validate(dcase.graph, thesaurus)) == []
    assert not pairwise_synonym_collisions(dcase.graph, thesaurus)


def test_neighbors_examples():
    graph = small(("s", ["lone"]), ("t", ["a", "b", "c"]))
    assert neighbors(graph, "lone") == set()
    assert {x.text for x in neighbors(graph, Label("a"))} == {"b", "c"}
    with pytest.raises(UnknownLabel):
        neighbors(graph, "zz")


def test_neighbors_include_cross_edge_endpoints():
    graph = small(("s", ["a", "b"]), ("t", ["c"]), edges=[("a", "c")])
    assert {x.text for x in neighbors(graph, "a")} == {"b", "c"}
    assert {x.text for x in neighbors(graph, "c")} == {"a"}


def test_neighbors_of_office_in_dcase(dcase):
    graph = dcase.graph
    expected = set()
    for name in graph.clusters_of("office"):
        expected.update(graph.cluster(name).members)
    expected.discard("office")
    assert {x.text for x in neighbors(graph, "office")} == expected
    assert set(graph.subset(EN)) - {"office"} <= expected


def test_distance_examples():
    graph = small(("s", ["a", "b", "x"]), ("t", ["c", "d", "y"]), ("u", ["z"]), edges=[("x", "y")])
    assert distance(graph, "a", "a") == 0
    assert distance(graph, "a", "b") == 1
    assert distance(graph, "a", "d") == 3
    assert distance(graph, "a", "z") is None
    with pytest.raises(UnknownLabel):
        distance(graph, "a", "nope")


def test_distance_uses_weight_ceiling():
    graph = small(("s", ["a"]), ("t", ["b"]), ("u", ["c"]), edges=[("a", "b", 2.5), ("a", "c"), ("c", "b")])
    assert distance(graph, "a", "b") == 2
    graph = small(("s", ["a"]), ("t", ["b"]), edges=[("a", "b", 2.5)])
    assert distance(graph, "a", "b") == 3


def test_with_cluster_and_add_edge_checks():
    graph = small(("s", ["a", "b"]), ("t", ["c"]))
    with pytest.raises(InvalidEdge):
        add_edge(graph, "a", "b")
    with pytest.raises(InvalidEdge):
        add_edge(graph, "a", "a")
    with pytest.raises(InvalidEdge):
        add_edge(graph, "a", "c", -2)
    with pytest.raises(UnknownLabel):
        with_cluster(graph, "u", ["zz"])
    with pytest.raises(SubsetNameCollision):
        with_cluster(graph, "a", ["b"])
    graph = add_edge(graph, "a", "c", 1.0)
    graph = add_edge(graph, "c", "a", 2.0)
    assert graph.cross_edges == (("a", "c", 2.0),)
    graph = with_cluster(graph, "u", ["a", "c"])
    assert graph.cross_edges == ()


def test_graph_values_are_immutable_under_insert():
    graph = small(("s", ["a"]))
    before = graph.texts
    insert_label(graph, Label("b"), "s", EV)
    assert graph.texts == before


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_insert_sequences_keep_invariants(seed):
    rng = random.Random(seed)
    vocab = WORDS[:60]
    thes = synthetic_thesaurus(rng, vocab, 12)
    graph = TaxonomyGraph()
    before = 0
    for _ in range(rng.randint(1, 40)):
        graph, outcome = insert_label(graph, Label(rng.choice(vocab)), f"c{rng.randint(0, 4)}", rng.choice(list(SubsetKind)), thes)
        assert len(graph) - before == (outcome.status is Outcome.ADDED)
        before = len(graph)
    assert errors_only(validate(graph, thes)) == []
    assert graph.texts == {m for c in graph.clusters for m in c.members}
    assert set().union(*(graph.subset(k) for k in SubsetKind)) == graph.texts


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_distance_matches_oracle(seed):
    rng = random.Random(seed)
    graph = random_graph(rng, max_labels=20, edge_prob=0.1, weights=True)
    oracle = all_pairs_distances(graph)
    for a, b in itertools.product(sorted(graph.texts), repeat=2):
        expected = oracle[a, b]
        got = distance(graph, a, b)
        assert (got is None) if expected == float("inf") else got == expected
