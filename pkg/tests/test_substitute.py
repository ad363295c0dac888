import pytest

from shrg.compose import compose
from shrg.fixtures import (
    catalog_modified_rules,
    make_fragment,
    make_rule,
    revision_catalog,
)
from shrg.graphs import SemGraph, isomorphic
from shrg.rules import (
    Derivation,
    RuleInventory,
    derivation_from_json,
    derivation_yield,
    rule_from_json,
)
from shrg.substitute import RevisionError, RevisionPair, apply_revision, substitute_rules


def simple_inventory():
    frag_a = make_fragment([("x", "_see_v_1")], [], ["x"], [])
    frag_b = make_fragment([("x", "_see_v_from")], [], ["x"], [])
    return RuleInventory(
        [
            make_rule("see_main", "V", ["sees"], frag_a, count=7),
            make_rule("see_rare", "V", ["sees"], frag_b, count=3),
            make_rule("eat", "V", ["eats"], make_fragment([("x", "_eat_v_1")], [], ["x"], []),
                      count=9),
        ],
        "lex",
    )


def test_unique_signature_buckets_leave_derivation_unchanged():
    inv = simple_inventory()
    d = Derivation("eat")
    assert substitute_rules(d, inv) == d


def test_most_frequent_alternative_chosen():
    inv = simple_inventory()
    d = Derivation("see_rare")
    swapped = substitute_rules(d, inv)
    assert swapped.rule_id == "see_main"
    # the winner stays put
    assert substitute_rules(Derivation("see_main"), inv).rule_id == "see_main"


def test_substitution_idempotent(grammar):
    d = Derivation(
        "s_root",
        (
            Derivation("np_n", (Derivation("n_dog"),)),
            Derivation("vp_v_np_arg3", (Derivation("v_sees_alt"),
                                        Derivation("np_n", (Derivation("n_cat"),)))),
        ),
    )
    once = substitute_rules(d, grammar)
    assert substitute_rules(once, grammar) == once
    assert once != d  # arg3 and the rare verb both had better alternatives


def test_substitution_preserves_yield(grammar):
    d = Derivation(
        "s_root",
        (
            Derivation("np_n", (Derivation("n_dog"),)),
            Derivation("vp_v_np_arg3", (Derivation("v_sees_alt"),
                                        Derivation("np_n", (Derivation("n_cat"),)))),
        ),
    )
    swapped = substitute_rules(d, grammar)
    assert derivation_yield(swapped, grammar) == derivation_yield(d, grammar)


def test_empty_pair_list_is_identity(grammar):
    d = Derivation("np_n", (Derivation("n_dog"),))
    revised, _ = apply_revision(d, grammar, [])
    assert revised == d


def test_null_pair_deletes_semantics(grammar):
    # dropping the adjective's contribution keeps structure and yield
    d = Derivation(
        "np_n",
        (Derivation("n_adj_n", (Derivation("adj_big"), Derivation("n_dog"))),),
    )
    revised, inv = apply_revision(d, grammar, [RevisionPair("adj_big", None)])
    assert derivation_yield(revised, inv) == ["big", "dog"]
    _, graph = compose(revised, inv)
    labels = [n.label for n in graph.nodes]
    assert "_big_a_1" not in labels
    assert "_dog_n_1" in labels


def test_null_pair_rejected_for_branching_rules(grammar):
    with pytest.raises(RevisionError):
        apply_revision(
            Derivation("np_n", (Derivation("n_dog"),)),
            grammar,
            [RevisionPair("np_n", None)],
        )


def test_structural_mismatch_needs_rewrite(grammar):
    # swapping a unary noun rule for a branching one cannot happen in place
    branching = make_rule(
        "n_two", "N", ["@ADJ", "@N"],
        make_fragment([("a", ""), ("n", "")], [("a", "ARG1", "n")], ["n"],
                      [("ADJ", ["a"]), ("N", ["n"])]),
    )
    with pytest.raises(RevisionError):
        apply_revision(
            Derivation("np_n", (Derivation("n_dog"),)),
            grammar,
            [RevisionPair("n_dog", branching)],
        )


def test_catalog_covers_nine_phenomena():
    catalog = revision_catalog()
    assert {e["phenomenon"] for e in catalog} == {
        "number", "case", "tense_aspect", "voice", "person", "binding",
        "ellipsis", "filler_gap", "argument_structure",
    }


@pytest.mark.parametrize("entry", revision_catalog(), ids=lambda e: e["phenomenon"])
def test_catalog_reproduces_modified_analyses(entry):
    from shrg.graphs import graph_from_json

    inv = RuleInventory([rule_from_json(r) for r in entry["rules"]], "lex")
    derivation = derivation_from_json(entry["derivation"])
    _, original = compose(derivation, inv)
    expected_original = graph_from_json(entry["expected_original"])
    assert isomorphic(
        SemGraph(original.nodes, original.edges),
        SemGraph(expected_original.nodes, expected_original.edges),
    )

    pairs = [
        RevisionPair(orig, mod)
        for orig, mod in zip(entry["original"], catalog_modified_rules(entry))
    ]
    rewritten = (
        derivation_from_json(entry["modified_derivation"])
        if entry.get("modified_derivation")
        else None
    )
    revised, full_inv = apply_revision(derivation, inv, pairs, rewritten)
    assert derivation_yield(revised, full_inv) == entry["tokens"]
    _, modified = compose(revised, full_inv)
    expected_modified = graph_from_json(entry["expected_modified"])
    assert isomorphic(
        SemGraph(modified.nodes, modified.edges),
        SemGraph(expected_modified.nodes, expected_modified.edges),
    )
    labels = {n.label for n in modified.nodes}
    for lab in entry["require_labels"]:
        assert lab in labels
    for lab in entry["forbid_labels"]:
        assert lab not in labels
    by_id = {n.id: n.label for n in modified.nodes}
    triples = {(by_id[e.src], e.role, by_id[e.tgt]) for e in modified.edges}
    for s, r, t in entry["require_edges"]:
        assert (s, r, t) in triples


def test_in_place_revision_when_structure_is_stable():
    # the filler-gap entry keeps its tree, so no rewrite is needed
    entry = next(e for e in revision_catalog() if e["phenomenon"] == "filler_gap")
    assert entry["modified_derivation"] is None
    inv = RuleInventory([rule_from_json(r) for r in entry["rules"]], "lex")
    derivation = derivation_from_json(entry["derivation"])
    pairs = [
        RevisionPair(orig, mod)
        for orig, mod in zip(entry["original"], catalog_modified_rules(entry))
    ]
    revised, full_inv = apply_revision(derivation, inv, pairs)
    assert revised != derivation
    _, graph = compose(revised, full_inv)
    assert "which_q" not in {n.label for n in graph.nodes}
