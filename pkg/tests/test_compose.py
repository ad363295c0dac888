import pytest

from shrg.compose import compose
from shrg.fixtures import make_fragment, make_rule
from shrg.graphs import canonicalize, dumps_graph, isomorphic
from shrg.rules import Derivation, RuleError, RuleInventory
from shrg.trees import serialize_tree, yield_tokens


def test_worked_example(table1, fig2_deriv, fig2):
    tree, graph = compose(fig2_deriv, table1)
    assert serialize_tree(tree) == "(VP (V (V visit) (Adv often)) (NP Paris))"
    assert yield_tokens(tree) == ["visit", "often", "Paris"]
    assert isomorphic(graph, fig2)
    by_id = {n.id: n.label for n in graph.nodes}
    triples = {(by_id[e.src], e.role, by_id[e.tgt]) for e in graph.edges}
    assert triples == {
        ("_often_a_1", "ARG1", "_visit_v_1"),
        ("_visit_v_1", "ARG2", 'named("Paris")'),
        ("proper_q", "BV", 'named("Paris")'),
    }


def test_single_rule_derivation(table1):
    tree, graph = compose(Derivation("t1.r1"), table1)
    assert serialize_tree(tree) == "(V visit)"
    assert [n.label for n in graph.nodes] == ["_visit_v_1"]
    assert graph.top == "n0"


def test_compose_is_deterministic(table1, fig2_deriv):
    a = dumps_graph(compose(fig2_deriv, table1)[1])
    b = dumps_graph(compose(fig2_deriv, table1)[1])
    assert a == b


def test_anchors_follow_token_spans(table1, fig2_deriv):
    _, graph = compose(fig2_deriv, table1)
    anchors = {n.label: n.anchor for n in graph.nodes}
    assert anchors["_visit_v_1"] == (0, 5)
    assert anchors["_often_a_1"] == (6, 11)
    assert anchors['named("Paris")'] == (12, 17)
    assert anchors["proper_q"] == (12, 17)


def test_dangling_nonterminal_blocked_at_construction():
    # a rule whose fragment keeps an undischarged hyperedge cannot even be
    # built, so composition can never reach the dangling state
    with pytest.raises(RuleError):
        make_rule(
            "inner", "NP", ["n"],
            make_fragment([("c", "")], [], ["c"], [("PP", ["c"])]),
        )


def test_unknown_rule(table1):
    with pytest.raises(RuleError):
        compose(Derivation("missing"), table1)


def test_top_prefers_root_external():
    lex = make_rule("lx", "N", ["dog"], make_fragment([("a", "_dog_n_1")], [], ["a"], []))
    root = make_rule(
        "root", "NP", ["@N"],
        make_fragment(
            [("q", "_the_q"), ("n", "")], [("q", "BV", "n")], ["n"], [("N", ["n"])]
        ),
    )
    inv = RuleInventory([lex, root], "lex")
    _, graph = compose(Derivation("root", (Derivation("lx"),)), inv)
    assert graph.node_by_id[graph.top].label == "_dog_n_1"


def test_top_unique_arg_root():
    lex = make_rule("lx", "N", ["dog"], make_fragment([("a", "_dog_n_1")], [], ["a"], []))
    root = make_rule(
        "root", "NP", ["@N"],
        make_fragment(
            [("m", "_big_a_1"), ("n", "")], [("m", "ARG1", "n")], [], [("N", ["n"])]
        ),
    )
    inv = RuleInventory([lex, root], "lex")
    _, graph = compose(Derivation("root", (Derivation("lx"),)), inv)
    # no externals on the root; the one node without incoming ARG/BV wins
    assert graph.node_by_id[graph.top].label == "_big_a_1"


def test_result_is_canonical(table1, fig2_deriv):
    _, graph = compose(fig2_deriv, table1)
    assert canonicalize(graph) == graph
    assert [n.id for n in graph.nodes] == [f"n{i}" for i in range(len(graph.nodes))]
