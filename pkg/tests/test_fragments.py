import random

import pytest

from shrg.fixtures import make_fragment
from shrg.fragments import (
    ArityMismatchError,
    FragmentError,
    GraphFragment,
    LabelClashError,
    NonterminalHyperedge,
    pass_through_fragment,
    replace_hyperedge,
)
from shrg.graphs import SemGraph, SemNode, isomorphic

from conftest import iso_oracle


def test_fragment_invariants():
    g = SemGraph((SemNode("a", "x"),))
    with pytest.raises(FragmentError):
        GraphFragment(g, ("a", "a"))
    with pytest.raises(FragmentError):
        GraphFragment(g, ("missing",))
    with pytest.raises(FragmentError):
        GraphFragment(g, (), (NonterminalHyperedge("NP", ("missing",)),))
    with pytest.raises(FragmentError):
        NonterminalHyperedge("NP", ("a", "a"))


def test_replace_table1_np(table1):
    # splicing the proper-noun fragment into the verb-phrase rule leaves the
    # verb hyperedge pending and brings in the quantified name
    host = table1["t1.r5"].sem
    repl = table1["t1.r4"].sem
    result = replace_hyperedge(host, 1, repl)
    labels = {n.label for n in result.graph.nodes}
    assert "proper_q" in labels and 'named("Paris")' in labels
    assert [nt.label for nt in result.nt_edges] == ["V"]
    by_id = {n.id: n.label for n in result.graph.nodes}
    roles = {(by_id[e.src], e.role, by_id[e.tgt]) for e in result.graph.edges}
    assert ("proper_q", "BV", 'named("Paris")') in roles
    assert ("", "ARG2", 'named("Paris")') in roles


def test_identity_replacement():
    host = make_fragment(
        [("a", "_cat_n_1"), ("b", "_the_q")],
        [("b", "BV", "a")],
        ["a"],
        [("N", ["a"])],
    )
    identity = pass_through_fragment(1)
    result = replace_hyperedge(host, 0, identity)
    assert isomorphic(
        SemGraph(result.graph.nodes, result.graph.edges),
        SemGraph(host.graph.nodes, host.graph.edges),
    )
    assert result.externals == host.externals
    assert result.nt_edges == ()


def test_node_count_law_simple():
    host = make_fragment(
        [("a", ""), ("b", ""), ("c", "_x")],
        [("a", "ARG1", "b")],
        ["a"],
        [("NP", ["a", "b"])],
    )
    repl = make_fragment(
        [("p", "_p"), ("q", ""), ("r", "_r"), ("s", "_s")],
        [("p", "ARG1", "q"), ("r", "ARG2", "s")],
        ["p", "q"],
        [],
    )
    result = replace_hyperedge(host, 0, repl)
    assert len(result.graph.nodes) == 3 + 4 - 2


def _random_fragment(rng, arity=None):
    n = rng.randint(1, 5)
    nodes = [(f"m{i}", rng.choice(["", "_a_1", "_b_1", "_c_1"])) for i in range(n)]
    edges = set()
    for _ in range(rng.randint(0, n)):
        s, t = rng.randrange(n), rng.randrange(n)
        edges.add((f"m{s}", rng.choice(["ARG1", "ARG2"]), f"m{t}"))
    k = rng.randint(0, n) if arity is None else arity
    if k > n:
        return None
    externals = [f"m{i}" for i in rng.sample(range(n), k)]
    return make_fragment(nodes, sorted(edges), externals, [])


def test_node_count_law_randomized():
    # |V'| = |V_host| + |V_repl| - |externals| over 1000 generated cases
    rng = random.Random(42)
    checked = 0
    while checked < 1000:
        hn = rng.randint(1, 5)
        nodes = [(f"h{i}", rng.choice(["", "_h_1"])) for i in range(hn)]
        arity = rng.randint(0, hn)
        attachments = [f"h{i}" for i in rng.sample(range(hn), arity)]
        host = make_fragment(nodes, [], [], [("X", attachments)])
        repl = _random_fragment(rng, arity)
        if repl is None:
            continue
        # fused pairs may clash on labels; the law applies to clean fusions
        ext_labels = {
            e: repl.graph.node_by_id[e].label for e in repl.externals
        }
        host_labels = {a: host.graph.node_by_id[a].label for a in attachments}
        if any(
            ext_labels[e] and host_labels[a] and ext_labels[e] != host_labels[a]
            for e, a in zip(repl.externals, attachments)
        ):
            continue
        result = replace_hyperedge(host, 0, repl)
        assert len(result.graph.nodes) == hn + len(repl.graph.nodes) - arity
        checked += 1


def test_order_independence(table1):
    # replacing distinct hyperedges in either order gives isomorphic results
    host = table1["t1.r5"].sem
    v = table1["t1.r1"].sem
    np = table1["t1.r4"].sem
    a = replace_hyperedge(replace_hyperedge(host, 0, v), 0, np)
    b = replace_hyperedge(replace_hyperedge(host, 1, np), 0, v)
    assert iso_oracle(
        SemGraph(a.graph.nodes, a.graph.edges), SemGraph(b.graph.nodes, b.graph.edges)
    )
    assert a.nt_edges == () and b.nt_edges == ()


def test_arity_mismatch():
    host = make_fragment([("a", "")], [], [], [("NP", ["a"])])
    repl = make_fragment([("p", "_p"), ("q", "_q")], [], ["p", "q"], [])
    with pytest.raises(ArityMismatchError):
        replace_hyperedge(host, 0, repl)


def test_label_clash():
    host = make_fragment([("a", "_cat_n_1")], [], [], [("NP", ["a"])])
    repl = make_fragment([("p", "_dog_n_1")], [], ["p"], [])
    with pytest.raises(LabelClashError):
        replace_hyperedge(host, 0, repl)


def test_equal_labels_fuse_silently():
    host = make_fragment([("a", "_cat_n_1")], [], [], [("NP", ["a"])])
    repl = make_fragment([("p", "_cat_n_1")], [], ["p"], [])
    result = replace_hyperedge(host, 0, repl)
    assert [n.label for n in result.graph.nodes] == ["_cat_n_1"]


def test_bad_index():
    host = make_fragment([("a", "_x")], [], [], [])
    with pytest.raises(FragmentError):
        replace_hyperedge(host, 0, pass_through_fragment(0))


def test_zero_arity_replacement():
    host = make_fragment([("a", "_x")], [], ["a"], [("COMP", [])])
    result = replace_hyperedge(host, 0, make_fragment([]))
    assert len(result.graph.nodes) == 1
    assert result.nt_edges == ()
