import itertools
import json
import random

import pytest

from shrg.graphs import (
    GraphError,
    IsomorphismSizeError,
    SemEdge,
    SemGraph,
    SemNode,
    canonicalize,
    dumps_graph,
    graph_from_json,
    graph_to_json,
    isomorphic,
    loads_graph,
)

from conftest import iso_oracle, permuted, random_graph


def test_node_invariants():
    with pytest.raises(GraphError):
        SemNode("", "_cat_n_1")
    with pytest.raises(GraphError):
        SemNode("x", "_cat_n_1", (3, 3))
    with pytest.raises(GraphError):
        SemNode("x", "_cat_n_1", (-1, 2))


def test_graph_invariants():
    n = SemNode("x", "_cat_n_1")
    with pytest.raises(GraphError):
        SemGraph((n, SemNode("x", "_dog_n_1")))
    with pytest.raises(GraphError):
        SemGraph((n,), (SemEdge("x", "ARG1", "y"),))
    with pytest.raises(GraphError):
        SemGraph((n,), (SemEdge("x", "ARG1", "x"), SemEdge("x", "ARG1", "x")))
    with pytest.raises(GraphError):
        SemGraph((n,), (), top="missing")
    with pytest.raises(GraphError):
        SemGraph((n,), (SemEdge("x", "", "x"),))


def test_validate_flags_disconnection_and_empty_labels():
    g = SemGraph((SemNode("a", "_cat_n_1"), SemNode("b", "")))
    warnings = g.validate()
    assert any("unlabeled" in w for w in warnings)
    assert any("disconnected" in w for w in warnings)
    assert SemGraph((SemNode("a", "_cat_n_1"),)).validate() == []


def test_canonicalize_single_node():
    g = SemGraph((SemNode("x", "_cat_n_1"),), (), top="x")
    c = canonicalize(g)
    assert [n.id for n in c.nodes] == ["n0"]
    assert c.nodes[0].label == "_cat_n_1"
    assert c.top == "n0"


def test_canonicalize_idempotent(fig2):
    once = canonicalize(fig2)
    assert canonicalize(once) == once


def test_canonicalize_permutation_invariant(fig2):
    # every relabeling of the worked-example graph canonicalizes identically
    ids = [n.id for n in fig2.nodes]
    outputs = set()
    for perm in itertools.permutations(ids):
        mapping = dict(zip(ids, perm))
        outputs.add(dumps_graph(canonicalize(permuted(fig2, mapping))))
    assert len(outputs) == 1
    assert outputs == {dumps_graph(canonicalize(fig2))}


def test_canonicalize_idempotent_under_label_ties():
    # identical labels in symmetric and asymmetric positions alike
    rng = random.Random(91)
    for _ in range(60):
        g = random_graph(rng, max_nodes=6, labels=("a", "a", "b"))
        once = canonicalize(g)
        assert canonicalize(once) == once


def test_canonicalize_stable_for_isomorphic_inputs_without_ties():
    # distinct labels leave no ties, so isomorphic graphs canonicalize
    # to the same serialization even from scrambled ids
    rng = random.Random(93)
    for _ in range(40):
        g = random_graph(rng, max_nodes=6, labels=("a", "b", "c", "d", "e", "f"))
        if len({n.label for n in g.nodes}) < len(g.nodes):
            continue
        ids = [n.id for n in g.nodes]
        shuffled = [f"z{i}" for i in range(len(ids))]
        rng.shuffle(shuffled)
        h = permuted(g, dict(zip(ids, shuffled)))
        assert dumps_graph(canonicalize(g)) == dumps_graph(canonicalize(h))


def test_canonicalize_preserves_counts_and_labels():
    rng = random.Random(7)
    for _ in range(50):
        g = random_graph(rng)
        c = canonicalize(g)
        assert len(c.nodes) == len(g.nodes)
        assert len(c.edges) == len(g.edges)
        assert sorted(n.label for n in c.nodes) == sorted(n.label for n in g.nodes)
        assert sorted(e.role for e in c.edges) == sorted(e.role for e in g.edges)


def test_isomorphic_identity_and_counts(fig2):
    assert isomorphic(fig2, fig2)
    smaller = SemGraph(fig2.nodes[:-1], (), fig2.nodes[0].id)
    assert not isomorphic(fig2, smaller)


def test_isomorphic_permuted_matches_bruteforce(fig2):
    ids = [n.id for n in fig2.nodes]
    rng = random.Random(3)
    for _ in range(10):
        shuffled = ids[:]
        rng.shuffle(shuffled)
        h = permuted(fig2, dict(zip(ids, shuffled)))
        assert isomorphic(fig2, h)
        assert iso_oracle(fig2, h)


def test_isomorphic_agrees_with_oracle_on_random_pairs():
    rng = random.Random(11)
    agree = 0
    for _ in range(120):
        g1 = random_graph(rng, max_nodes=5)
        if rng.random() < 0.5:
            ids = [n.id for n in g1.nodes]
            shuffled = [f"w{i}" for i in range(len(ids))]
            rng.shuffle(shuffled)
            g2 = permuted(g1, dict(zip(ids, shuffled)))
        else:
            g2 = random_graph(rng, max_nodes=5)
        assert isomorphic(g1, g2) == iso_oracle(g1, g2)
        agree += 1
    assert agree == 120


def test_isomorphic_is_equivalence_on_fixture_set(fig2):
    ids = [n.id for n in fig2.nodes]
    variants = [fig2]
    for seed in range(3):
        rng = random.Random(seed)
        shuffled = ids[:]
        rng.shuffle(shuffled)
        variants.append(permuted(fig2, dict(zip(ids, shuffled))))
    for a in variants:
        assert isomorphic(a, a)
        for b in variants:
            assert isomorphic(a, b) == isomorphic(b, a)
            for c in variants:
                if isomorphic(a, b) and isomorphic(b, c):
                    assert isomorphic(a, c)


def test_isomorphic_requires_matching_top(fig2):
    other = SemGraph(fig2.nodes, fig2.edges, None)
    assert not isomorphic(fig2, other)


def test_isomorphic_node_cap():
    nodes = tuple(SemNode(f"v{i}", "x") for i in range(20))
    g = SemGraph(nodes)
    with pytest.raises(IsomorphismSizeError):
        isomorphic(g, g, node_cap=10)


def test_json_round_trip(fig2):
    rng = random.Random(23)
    for g in [fig2] + [random_graph(rng) for _ in range(20)]:
        back = loads_graph(dumps_graph(g))
        assert isomorphic(back, g) if g.top or len(g.nodes) == 0 else iso_oracle(back, g)
        assert canonicalize(back) == canonicalize(g)


def test_json_anchor_round_trip():
    g = SemGraph((SemNode("a", "_cat_n_1", (0, 3)),), (), "a")
    assert graph_from_json(graph_to_json(g)) == g


def test_malformed_json():
    with pytest.raises(GraphError):
        graph_from_json({"nodes": [{"id": "a"}], "edges": []})
    with pytest.raises(GraphError):
        loads_graph(json.dumps({"top": None, "nodes": [], "edges": [{"src": "a"}]}))
