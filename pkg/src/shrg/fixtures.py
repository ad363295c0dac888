"""Bundled fixtures: the five-rule worked example, the revision catalog,
a seed grammar for randomized round-trip testing, and a synthetic
mini-corpus.  Data files live in ``shrg/data`` and are the same files the
command line examples use."""

from __future__ import annotations

import json
import random
from importlib import resources

from .fragments import GraphFragment, NonterminalHyperedge
from .graphs import SemEdge, SemGraph, SemNode, graph_from_json
from .rules import (
    Derivation,
    Nonterminal,
    RuleInventory,
    SyncRule,
    Terminal,
    derivation_from_json,
    inventory_from_json,
    rule_from_json,
)


def _data(name: str) -> str:
    return resources.files("shrg.data").joinpath(name).read_text(encoding="utf-8")


def make_fragment(nodes, edges=(), externals=(), nt_edges=()) -> GraphFragment:
    """Shorthand builder: nodes as (id, label) pairs, edges as triples."""
    graph = SemGraph(
        tuple(SemNode(i, label) for i, label in nodes),
        tuple(SemEdge(*e) for e in edges),
    )
    return GraphFragment(
        graph,
        tuple(externals),
        tuple(NonterminalHyperedge(label, tuple(att)) for label, att in nt_edges),
    )


def make_rule(rid, lhs, rhs, frag, count=0) -> SyncRule:
    """Rhs symbols: plain strings are terminals, ``"@X"`` marks nonterminal X."""
    symbols = tuple(
        Nonterminal(s[1:]) if s.startswith("@") else Terminal(s) for s in rhs
    )
    return SyncRule(rid, lhs, symbols, frag, count)


def table1_inventory() -> RuleInventory:
    return inventory_from_json(json.loads(_data("table1_rules.json")))


def fig2_derivation() -> Derivation:
    return derivation_from_json(json.loads(_data("fig2_derivation.json")))


def fig2_graph() -> SemGraph:
    return graph_from_json(json.loads(_data("fig2_graph.json")))


def fig2_tree_text() -> str:
    return _data("fig2_tree.txt").strip()


def revision_catalog() -> list[dict]:
    return json.loads(_data("revision_catalog.json"))


def catalog_modified_rules(entry: dict) -> list[SyncRule | None]:
    return [rule_from_json(r) if r is not None else None for r in entry["modified"]]


def mini_corpus_text() -> str:
    return _data("mini_corpus.jsonl")


def seed_grammar() -> RuleInventory:
    """Recursive toy grammar with ERS-style fragments, used for randomized
    compose/extract round trips and substitution experiments."""
    F = make_fragment
    lex = [
        ("det_the", "DET", "the", "_the_q", 120),
        ("det_a", "DET", "a", "_a_q", 100),
        ("det_every", "DET", "every", "_every_q", 30),
        ("n_dog", "N", "dog", "_dog_n_1", 60),
        ("n_cat", "N", "cat", "_cat_n_1", 55),
        ("n_house", "N", "house", "_house_n_1", 50),
        ("n_bird", "N", "bird", "_bird_n_1", 45),
        ("n_garden", "N", "garden", "_garden_n_1", 40),
        ("v_sees", "V", "sees", "_see_v_1", 50),
        ("v_eats", "V", "eats", "_eat_v_1", 45),
        ("v_likes", "V", "likes", "_like_v_1", 40),
        ("v_finds", "V", "finds", "_find_v_1", 35),
        ("v_sleeps", "V", "sleeps", "_sleep_v_1", 30),
        ("adj_big", "ADJ", "big", "_big_a_1", 25),
        ("adj_small", "ADJ", "small", "_small_a_1", 20),
        ("adj_red", "ADJ", "red", "_red_a_1", 15),
        ("p_in", "P", "in", "_in_p", 30),
        ("p_with", "P", "with", "_with_p", 25),
        ("p_near", "P", "near", "_near_p", 20),
    ]
    rules = [
        make_rule(rid, lhs, [tok], F([("e0", label)], externals=["e0"]), count)
        for rid, lhs, tok, label, count in lex
    ]
    # a second semantics for "sees": lexicalized substitution has work to do
    rules.append(
        make_rule("v_sees_alt", "V", ["sees"], F([("e0", "_see_v_from")], externals=["e0"]), 5)
    )
    rules += [
        make_rule(
            "s_root", "S", ["@NP", "@VP"],
            F([("v", ""), ("s", "")], [("v", "ARG1", "s")], [], [("NP", ["s"]), ("VP", ["v"])]),
            200,
        ),
        make_rule(
            "vp_v", "VP", ["@V"],
            F([("v", "")], [], ["v"], [("V", ["v"])]),
            60,
        ),
        make_rule(
            "vp_v_np", "VP", ["@V", "@NP"],
            F([("v", ""), ("o", "")], [("v", "ARG2", "o")], ["v"], [("V", ["v"]), ("NP", ["o"])]),
            140,
        ),
        make_rule(
            "vp_v_np_arg3", "VP", ["@V", "@NP"],
            F([("v", ""), ("o", "")], [("v", "ARG3", "o")], ["v"], [("V", ["v"]), ("NP", ["o"])]),
            25,
        ),
        make_rule(
            "vp_vp_pp", "VP", ["@VP", "@PP"],
            F([("v", ""), ("p", "")], [("p", "ARG1", "v")], ["v"], [("VP", ["v"]), ("PP", ["p"])]),
            50,
        ),
        make_rule(
            "np_det_n", "NP", ["@DET", "@N"],
            F([("d", ""), ("n", "")], [("d", "BV", "n")], ["n"], [("DET", ["d"]), ("N", ["n"])]),
            180,
        ),
        make_rule(
            "np_n", "NP", ["@N"],
            F([("q", "udef_q"), ("n", "")], [("q", "BV", "n")], ["n"], [("N", ["n"])]),
            70,
        ),
        make_rule(
            "np_np_pp", "NP", ["@NP", "@PP"],
            F([("n", ""), ("p", "")], [("p", "ARG1", "n")], ["n"], [("NP", ["n"]), ("PP", ["p"])]),
            45,
        ),
        make_rule(
            "n_adj_n", "N", ["@ADJ", "@N"],
            F([("a", ""), ("n", "")], [("a", "ARG1", "n")], ["n"], [("ADJ", ["a"]), ("N", ["n"])]),
            55,
        ),
        make_rule(
            "pp_p_np", "PP", ["@P", "@NP"],
            F([("p", ""), ("n", "")], [("p", "ARG2", "n")], ["p"], [("P", ["p"]), ("NP", ["n"])]),
            90,
        ),
    ]
    return RuleInventory(rules, "lex")


_EXPANSIONS = {
    "S": [("s_root", 1.0)],
    "VP": [("vp_v", 0.25), ("vp_v_np", 0.45), ("vp_v_np_arg3", 0.10), ("vp_vp_pp", 0.20)],
    "NP": [("np_det_n", 0.55), ("np_n", 0.25), ("np_np_pp", 0.20)],
    "PP": [("pp_p_np", 1.0)],
    "N": [
        ("n_adj_n", 0.20),
        ("n_dog", 0.16), ("n_cat", 0.16), ("n_house", 0.16),
        ("n_bird", 0.16), ("n_garden", 0.16),
    ],
    "V": [
        ("v_sees", 0.22), ("v_eats", 0.20), ("v_likes", 0.18),
        ("v_finds", 0.16), ("v_sleeps", 0.14), ("v_sees_alt", 0.10),
    ],
    "DET": [("det_the", 0.5), ("det_a", 0.35), ("det_every", 0.15)],
    "ADJ": [("adj_big", 0.4), ("adj_small", 0.35), ("adj_red", 0.25)],
    "P": [("p_in", 0.4), ("p_with", 0.35), ("p_near", 0.25)],
}

_RECURSIVE = {"vp_vp_pp", "np_np_pp", "n_adj_n", "vp_v_np", "vp_v_np_arg3"}


def sample_derivation(
    inv: RuleInventory, rng: random.Random, symbol: str = "S", depth: int = 0, max_depth: int = 5
) -> Derivation:
    """Depth-bounded weighted sampling from the seed grammar."""
    options = _EXPANSIONS[symbol]
    if depth >= max_depth:
        options = [(rid, w) for rid, w in options if rid not in _RECURSIVE] or options
    total = sum(w for _, w in options)
    pick = rng.random() * total
    acc = 0.0
    rule_id = options[-1][0]
    for rid, w in options:
        acc += w
        if pick <= acc:
            rule_id = rid
            break
    rule = inv[rule_id]
    children = tuple(
        sample_derivation(inv, rng, nt.name, depth + 1, max_depth)
        for nt in rule.nonterminals
    )
    return Derivation(rule_id, children)
