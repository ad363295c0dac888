#!/usr/bin/env python3
"""Regenerate the bundled data files in src/shrg/data.

Every fixture is verified before it is written: composed graphs must match
the hand-authored expected structures, and the revision catalog must pass
through apply_revision cleanly.  Run from the repository root:

    python scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from shrg.compose import compose
from shrg.corpus import SentenceRecord, save_corpus
from shrg.extract import extract
from shrg.fixtures import make_fragment as F
from shrg.fixtures import make_rule, sample_derivation, seed_grammar
from shrg.graphs import SemEdge, SemGraph, SemNode, graph_to_json, isomorphic
from shrg.rules import (
    Derivation,
    RuleInventory,
    derivation_to_json,
    inventory_to_json,
    rule_to_json,
)
from shrg.substitute import RevisionPair, apply_revision
from shrg.trees import serialize_tree

DATA = Path(__file__).resolve().parents[1] / "src" / "shrg" / "data"


def expected(nodes, edges):
    """Hand-authored graph: nodes by label list, edges by (src_i, role, tgt_i)."""
    sem_nodes = tuple(SemNode(f"g{i}", label) for i, label in enumerate(nodes))
    sem_edges = tuple(SemEdge(f"g{s}", role, f"g{t}") for s, role, t in edges)
    return SemGraph(sem_nodes, sem_edges)


def iso_ignoring_top(a: SemGraph, b: SemGraph) -> bool:
    return isomorphic(SemGraph(a.nodes, a.edges, None), SemGraph(b.nodes, b.edges, None))


def d(rule_id, *children):
    return Derivation(rule_id, tuple(children))


def write_json(name, obj):
    path = DATA / name
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {path}")


# --- worked example: the five component rules -------------------------------


def build_table1():
    rules = [
        make_rule("t1.r1", "V", ["visit"], F([("e0", "_visit_v_1")], externals=["e0"])),
        make_rule("t1.r2", "Adv", ["often"], F([("e0", "_often_a_1")], externals=["e0"])),
        make_rule(
            "t1.r3", "V", ["@V", "@Adv"],
            F([("a", ""), ("b", "")], [("a", "ARG1", "b")], ["b"], [("V", ["b"]), ("Adv", ["a"])]),
        ),
        make_rule(
            "t1.r4", "NP", ["Paris"],
            F([("p", "proper_q"), ("q", 'named("Paris")')], [("p", "BV", "q")], ["q"]),
        ),
        make_rule(
            # the verb slot is the fragment's interface: it becomes the top
            "t1.r5", "VP", ["@V", "@NP"],
            F([("u", ""), ("v", "")], [("u", "ARG2", "v")], ["u"], [("V", ["u"]), ("NP", ["v"])]),
        ),
    ]
    inv = RuleInventory(rules, "lex")
    deriv = d("t1.r5", d("t1.r3", d("t1.r1"), d("t1.r2")), d("t1.r4"))
    tree, graph = compose(deriv, inv)

    fig2b = expected(
        ["_visit_v_1", "_often_a_1", 'named("Paris")', "proper_q"],
        [(1, "ARG1", 0), (0, "ARG2", 2), (3, "BV", 2)],
    )
    assert iso_ignoring_top(graph, fig2b), "composed worked example drifted from figure"
    assert graph.node_by_id[graph.top].label == "_visit_v_1"
    assert serialize_tree(tree) == "(VP (V (V visit) (Adv often)) (NP Paris))"

    deriv2, rules2 = extract(tree, graph)
    _, graph2 = compose(deriv2, RuleInventory(rules2, "lex"))
    assert isomorphic(graph, graph2), "worked-example extraction round trip failed"

    write_json("table1_rules.json", inventory_to_json(inv))
    write_json("fig2_derivation.json", derivation_to_json(deriv))
    write_json("fig2_graph.json", graph_to_json(graph))
    (DATA / "fig2_tree.txt").write_text(serialize_tree(tree) + "\n", encoding="utf-8")
    print(f"wrote {DATA / 'fig2_tree.txt'}")


# --- revision catalog: nine phenomena ---------------------------------------


def phenomenon_entries():
    entries = []

    def entry(
        phenomenon, tokens, rules, derivation, pairs, modified_derivation,
        exp_original, exp_modified, require_labels=(), forbid_labels=(), require_edges=(),
    ):
        entries.append(
            {
                "phenomenon": phenomenon,
                "original": [orig for orig, _ in pairs],
                "modified": [rule_to_json(mod) if mod is not None else None for _, mod in pairs],
                "tokens": tokens,
                "rules": [rule_to_json(r) for r in rules],
                "derivation": derivation_to_json(derivation),
                "modified_derivation": (
                    derivation_to_json(modified_derivation) if modified_derivation else None
                ),
                "expected_original": graph_to_json(exp_original),
                "expected_modified": graph_to_json(exp_modified),
                "require_labels": list(require_labels),
                "forbid_labels": list(forbid_labels),
                "require_edges": [list(e) for e in require_edges],
            }
        )

    # Number: a demonstrative misparse of a bare noun becomes an abstract
    # quantifier over the noun reading.
    o_that = make_rule(
        "num.o_that", "N", ["that"],
        F([("q", "_that_q_dem"), ("e", "generic_entity")], [("q", "BV", "e")], ["e"]),
    )
    o_played = make_rule("num.o_played", "V", ["played"], F([("v", "_play_v_1")], externals=["v"]))
    o_np = make_rule(
        "num.o_np", "NP", ["@N", "@V"],
        F([("n", ""), ("v", "")], [("v", "ARG2", "n")], ["n"], [("N", ["n"]), ("V", ["v"])]),
    )
    o_puzzle = make_rule("num.o_puzzle", "V", ["puzzle"], F([("v", "_puzzle_v_1")], externals=["v"]))
    o_pp = make_rule("num.o_pp", "PP", ["alone"], F([("a", "_alone_a_1")], externals=["a"]))
    o_vp = make_rule(
        "num.o_vp", "VP", ["@V", "@PP"],
        F([("v", ""), ("p", "")], [("p", "ARG1", "v")], ["v"], [("V", ["v"]), ("PP", ["p"])]),
    )
    o_top = make_rule(
        "num.o_top", "VP", ["@NP", "@VP"],
        F([("n", ""), ("v", "")], [("v", "ARG1", "n")], ["v"], [("NP", ["n"]), ("VP", ["v"])]),
    )
    m_that = make_rule("num.m_that", "COMP", ["that"], F([]))
    m_puzzle = make_rule(
        "num.m_puzzle", "N", ["puzzle"],
        F([("q", "udef_q"), ("n", "_puzzle_n_1")], [("q", "BV", "n")], ["n"]),
    )
    m_vp_inner = make_rule(
        "num.m_vp_inner", "VP", ["@V", "@N"],
        F([("v", ""), ("n", "")], [("v", "ARG2", "n")], ["v"], [("V", ["v"]), ("N", ["n"])]),
    )
    m_vp_pp = make_rule(
        "num.m_vp_pp", "VP", ["@VP", "@PP"],
        F([("v", ""), ("p", "")], [("p", "ARG1", "v")], ["v"], [("VP", ["v"]), ("PP", ["p"])]),
    )
    m_top = make_rule(
        "num.m_top", "VP", ["@COMP", "@VP"],
        F([("v", "")], [], ["v"], [("COMP", []), ("VP", ["v"])]),
    )
    entry(
        "number",
        ["that", "played", "puzzle", "alone"],
        [o_that, o_played, o_np, o_puzzle, o_pp, o_vp, o_top,
         m_that, m_puzzle, m_vp_inner, m_vp_pp, m_top],
        d("num.o_top", d("num.o_np", d("num.o_that"), d("num.o_played")),
          d("num.o_vp", d("num.o_puzzle"), d("num.o_pp"))),
        [("num.o_that", m_that), ("num.o_puzzle", m_puzzle), ("num.o_np", m_vp_inner),
         ("num.o_vp", m_vp_pp), ("num.o_top", m_top)],
        d("num.m_top", d("num.m_that"),
          d("num.m_vp_pp", d("num.m_vp_inner", d("num.o_played"), d("num.m_puzzle")),
            d("num.o_pp"))),
        expected(
            ["_that_q_dem", "generic_entity", "_play_v_1", "_puzzle_v_1", "_alone_a_1"],
            [(0, "BV", 1), (2, "ARG2", 1), (3, "ARG1", 1), (4, "ARG1", 3)],
        ),
        expected(
            ["udef_q", "_puzzle_n_1", "_play_v_1", "_alone_a_1"],
            [(0, "BV", 1), (2, "ARG2", 1), (3, "ARG1", 2)],
        ),
        require_labels=["udef_q", "_puzzle_n_1"],
        forbid_labels=["generic_entity", "_that_q_dem", "_puzzle_v_1"],
        require_edges=[("udef_q", "BV", "_puzzle_n_1")],
    )

    # Case: a compound misparse of a zero-marked genitive becomes possessive.
    o_a = make_rule("case.o_a", "DET", ["a"], F([("q", "_a_q")], externals=["q"]))
    o_writer = make_rule(
        "case.o_writer", "N", ["writer"],
        F([("u", "udef_q"), ("w", "_writer_n_of")], [("u", "BV", "w")], ["w"]),
    )
    o_life = make_rule("case.o_life", "N", ["life"], F([("l", "_life_n_of")], externals=["l"]))
    o_nn = make_rule(
        "case.o_nn", "NP", ["@N", "@N"],
        F([("c", "compound"), ("h", ""), ("m", "")],
          [("c", "ARG1", "h"), ("c", "ARG2", "m")], ["h"], [("N", ["m"]), ("N", ["h"])]),
    )
    o_det = make_rule(
        "case.o_det", "NP", ["@DET", "@NP"],
        F([("q", ""), ("h", "")], [("q", "BV", "h")], ["h"], [("DET", ["q"]), ("NP", ["h"])]),
    )
    m_writer = make_rule("case.m_writer", "N", ["writer"], F([("w", "_writer_n_of")], externals=["w"]))
    m_np_inner = make_rule(
        "case.m_np_inner", "NP", ["@DET", "@N"],
        F([("q", ""), ("n", "")], [("q", "BV", "n")], ["n"], [("DET", ["q"]), ("N", ["n"])]),
    )
    m_top = make_rule(
        "case.m_top", "NP", ["@NP", "@N"],
        F([("p", "poss"), ("q", "def_implicit_q"), ("h", ""), ("m", "")],
          [("p", "ARG1", "h"), ("p", "ARG2", "m"), ("q", "BV", "h")],
          ["h"], [("NP", ["m"]), ("N", ["h"])]),
    )
    entry(
        "case",
        ["a", "writer", "life"],
        [o_a, o_writer, o_life, o_nn, o_det, m_writer, m_np_inner, m_top],
        d("case.o_det", d("case.o_a"), d("case.o_nn", d("case.o_writer"), d("case.o_life"))),
        [("case.o_nn", m_top), ("case.o_writer", m_writer), ("case.o_det", m_np_inner)],
        d("case.m_top", d("case.m_np_inner", d("case.o_a"), d("case.m_writer")),
          d("case.o_life")),
        expected(
            ["compound", "_life_n_of", "_writer_n_of", "_a_q", "udef_q"],
            [(0, "ARG1", 1), (0, "ARG2", 2), (3, "BV", 1), (4, "BV", 2)],
        ),
        expected(
            ["poss", "_life_n_of", "_writer_n_of", "_a_q", "def_implicit_q"],
            [(0, "ARG1", 1), (0, "ARG2", 2), (3, "BV", 2), (4, "BV", 1)],
        ),
        require_labels=["poss", "def_implicit_q"],
        forbid_labels=["compound", "udef_q"],
        require_edges=[("poss", "ARG1", "_life_n_of"), ("poss", "ARG2", "_writer_n_of")],
    )

    # Tense & aspect: a zero-form perfect misparsed as causative "have".
    o_have = make_rule("ta.o_have", "V", ["have"], F([("h", "_have_v_cause")], externals=["h"]))
    o_give = make_rule("ta.o_give", "V", ["give"], F([("g", "_give_v_1")], externals=["g"]))
    o_ppyou = make_rule(
        "ta.o_ppyou", "PP", ["to", "you"],
        F([("q", "udef_q"), ("p", "pron")], [("q", "BV", "p")], ["p"]),
    )
    o_vpp = make_rule(
        "ta.o_vpp", "VP", ["@V", "@PP"],
        F([("g", ""), ("p", "")], [("g", "ARG3", "p")], ["g"], [("V", ["g"]), ("PP", ["p"])]),
    )
    o_vcomplex = make_rule(
        "ta.o_vcomplex", "V", ["@V", "@VP"],
        F([("h", ""), ("g", "")], [("h", "ARG1", "g")], ["g"], [("V", ["h"]), ("VP", ["g"])]),
    )
    o_npinfo = make_rule(
        "ta.o_npinfo", "NP", ["the", "information"],
        F([("t", "_the_q"), ("i", "_information_n_on-about")], [("t", "BV", "i")], ["i"]),
    )
    o_top = make_rule(
        "ta.o_top", "VP", ["@V", "@NP"],
        F([("v", ""), ("n", "")], [("v", "ARG1", "n")], ["v"], [("V", ["v"]), ("NP", ["n"])]),
    )
    m_have = make_rule("ta.m_have", "V", ["have"], F([]))
    m_vpp = make_rule(
        "ta.m_vpp", "V", ["@V", "@PP"],
        F([("g", ""), ("p", "")], [("g", "ARG3", "p")], ["g"], [("V", ["g"]), ("PP", ["p"])]),
    )
    m_vpnp = make_rule(
        "ta.m_vpnp", "VP", ["@V", "@NP"],
        F([("v", ""), ("n", "")], [("v", "ARG2", "n")], ["v"], [("V", ["v"]), ("NP", ["n"])]),
    )
    m_top = make_rule(
        "ta.m_top", "VP", ["@V", "@VP"],
        F([("v", "")], [], ["v"], [("V", []), ("VP", ["v"])]),
    )
    entry(
        "tense_aspect",
        ["have", "give", "to", "you", "the", "information"],
        [o_have, o_give, o_ppyou, o_vpp, o_vcomplex, o_npinfo, o_top,
         m_have, m_vpp, m_vpnp, m_top],
        d("ta.o_top",
          d("ta.o_vcomplex", d("ta.o_have"), d("ta.o_vpp", d("ta.o_give"), d("ta.o_ppyou"))),
          d("ta.o_npinfo")),
        [("ta.o_have", m_have), ("ta.o_top", m_vpnp), ("ta.o_vcomplex", m_top),
         ("ta.o_vpp", m_vpp)],
        d("ta.m_top", d("ta.m_have"),
          d("ta.m_vpnp", d("ta.m_vpp", d("ta.o_give"), d("ta.o_ppyou")), d("ta.o_npinfo"))),
        expected(
            ["_have_v_cause", "_give_v_1", "pron", "udef_q", "_the_q",
             "_information_n_on-about"],
            [(0, "ARG1", 1), (1, "ARG1", 5), (1, "ARG3", 2), (3, "BV", 2), (4, "BV", 5)],
        ),
        expected(
            ["_give_v_1", "pron", "udef_q", "_the_q", "_information_n_on-about"],
            [(0, "ARG2", 4), (0, "ARG3", 1), (2, "BV", 1), (3, "BV", 4)],
        ),
        forbid_labels=["_have_v_cause"],
        require_edges=[("_give_v_1", "ARG2", "_information_n_on-about"),
                       ("_give_v_1", "ARG3", "pron")],
    )

    # Voice: a zero-form passive misparsed as "be" plus a noun.
    o_it = make_rule(
        "voi.o_it", "NP", ["It"],
        F([("q", "pronoun_q"), ("p", "pron")], [("q", "BV", "p")], ["p"]),
    )
    o_be = make_rule("voi.o_be", "V", ["be"], F([("b", "_be_v_id")], externals=["b"]))
    o_mind = make_rule(
        "voi.o_mind", "N", ["mind"],
        F([("u", "udef_q"), ("m", "_mind_n_1")], [("u", "BV", "m")], ["m"]),
    )
    o_vp = make_rule(
        "voi.o_vp", "VP", ["@V", "@N"],
        F([("v", ""), ("n", "")], [("v", "ARG2", "n")], ["v"], [("V", ["v"]), ("N", ["n"])]),
    )
    o_s = make_rule(
        "voi.o_s", "S", ["@NP", "@VP"],
        F([("v", ""), ("n", "")], [("v", "ARG1", "n")], [], [("NP", ["n"]), ("VP", ["v"])]),
    )
    m_be = make_rule("voi.m_be", "V", ["be"], F([]))
    m_mind = make_rule("voi.m_mind", "V", ["mind"], F([("m", "_mind_v_1")], externals=["m"]))
    m_vpnp = make_rule(
        "voi.m_vpnp", "VP/NP", ["@V", "@V"],
        F([("pg", "parg_d"), ("m", "")], [("pg", "ARG1", "m")], ["pg", "m"],
          [("V", []), ("V", ["m"])]),
    )
    m_s = make_rule(
        "voi.m_s", "S", ["@NP", "@VP/NP"],
        F([("pg", ""), ("m", ""), ("n", "")],
          [("pg", "ARG2", "n"), ("m", "ARG2", "n")], [],
          [("NP", ["n"]), ("VP/NP", ["pg", "m"])]),
    )
    entry(
        "voice",
        ["It", "be", "mind"],
        [o_it, o_be, o_mind, o_vp, o_s, m_be, m_mind, m_vpnp, m_s],
        d("voi.o_s", d("voi.o_it"), d("voi.o_vp", d("voi.o_be"), d("voi.o_mind"))),
        [("voi.o_be", m_be), ("voi.o_mind", m_mind), ("voi.o_vp", m_vpnp),
         ("voi.o_s", m_s)],
        d("voi.m_s", d("voi.o_it"), d("voi.m_vpnp", d("voi.m_be"), d("voi.m_mind"))),
        expected(
            ["_be_v_id", "pron", "pronoun_q", "udef_q", "_mind_n_1"],
            [(0, "ARG1", 1), (0, "ARG2", 4), (2, "BV", 1), (3, "BV", 4)],
        ),
        expected(
            ["parg_d", "_mind_v_1", "pron", "pronoun_q"],
            [(0, "ARG1", 1), (0, "ARG2", 2), (1, "ARG2", 2), (3, "BV", 2)],
        ),
        require_labels=["parg_d", "_mind_v_1"],
        forbid_labels=["_be_v_id", "_mind_n_1"],
        require_edges=[("parg_d", "ARG1", "_mind_v_1"), ("_mind_v_1", "ARG2", "pron")],
    )

    # Person: clause coordination misparsed as two sentences with separate
    # subjects becomes VP coordination over one shared subject.
    o_s1 = make_rule(
        "per.o_s1", "S", ["It", "looks", "nice"],
        F([("l", "_look_v_1"), ("p", "pron"), ("q", "pronoun_q")],
          [("l", "ARG1", "p"), ("q", "BV", "p")], ["l"]),
    )
    o_and = make_rule("per.o_and", "Conj", ["and"], F([("c", "_and_c")], externals=["c"]))
    o_s2 = make_rule(
        "per.o_s2", "S", ["have", "good", "meaning"],
        F([("h", "_have_v_1"), ("p", "pron"), ("q", "pronoun_q")],
          [("h", "ARG1", "p"), ("q", "BV", "p")], ["h"]),
    )
    o_conjs = make_rule(
        "per.o_conjs", "S", ["@Conj", "@S"],
        F([("c", ""), ("r", "")], [("c", "R-IND", "r"), ("c", "R-HND", "r")], ["c"],
          [("Conj", ["c"]), ("S", ["r"])]),
    )
    o_top = make_rule(
        "per.o_top", "S", ["@S", "@S"],
        F([("l", ""), ("c", "")], [("c", "L-IND", "l"), ("c", "L-HND", "l")], [],
          [("S", ["l"]), ("S", ["c"])]),
    )
    m_it = make_rule(
        "per.m_it", "NP", ["It"],
        F([("q", "pronoun_q"), ("p", "pron")], [("q", "BV", "p")], ["p"]),
    )
    m_vp1 = make_rule(
        "per.m_vp1", "VP", ["looks", "nice"],
        F([("l", "_look_v_1"), ("s", "")], [("l", "ARG1", "s")], ["l", "s"]),
    )
    m_vp2 = make_rule(
        "per.m_vp2", "VP", ["have", "good", "meaning"],
        F([("h", "_have_v_1"), ("s", "")], [("h", "ARG1", "s")], ["h", "s"]),
    )
    m_conjvp = make_rule(
        "per.m_conjvp", "VP", ["@Conj", "@VP"],
        F([("c", ""), ("r", ""), ("s", "")],
          [("c", "R-IND", "r"), ("c", "R-HND", "r")], ["c", "s"],
          [("Conj", ["c"]), ("VP", ["r", "s"])]),
    )
    m_vpvp = make_rule(
        "per.m_vpvp", "VP", ["@VP", "@VP"],
        F([("l", ""), ("c", ""), ("s", "")],
          [("c", "L-IND", "l"), ("c", "L-HND", "l")], ["c", "s"],
          [("VP", ["l", "s"]), ("VP", ["c", "s"])]),
    )
    m_s = make_rule(
        "per.m_s", "S", ["@NP", "@VP"],
        F([("h", ""), ("s", "")], [], [], [("NP", ["s"]), ("VP", ["h", "s"])]),
    )
    entry(
        "person",
        ["It", "looks", "nice", "and", "have", "good", "meaning"],
        [o_s1, o_and, o_s2, o_conjs, o_top, m_it, m_vp1, m_vp2, m_conjvp, m_vpvp, m_s],
        d("per.o_top", d("per.o_s1"), d("per.o_conjs", d("per.o_and"), d("per.o_s2"))),
        [("per.o_s1", m_vp1), ("per.o_s2", m_vp2), ("per.o_conjs", m_conjvp),
         ("per.o_top", m_vpvp)],
        d("per.m_s", d("per.m_it"),
          d("per.m_vpvp", d("per.m_vp1"),
            d("per.m_conjvp", d("per.o_and"), d("per.m_vp2")))),
        expected(
            ["_and_c", "_look_v_1", "_have_v_1", "pron", "pron", "pronoun_q", "pronoun_q"],
            [(0, "L-IND", 1), (0, "L-HND", 1), (0, "R-IND", 2), (0, "R-HND", 2),
             (1, "ARG1", 3), (2, "ARG1", 4), (5, "BV", 3), (6, "BV", 4)],
        ),
        expected(
            ["_and_c", "_look_v_1", "_have_v_1", "pron", "pronoun_q"],
            [(0, "L-IND", 1), (0, "L-HND", 1), (0, "R-IND", 2), (0, "R-HND", 2),
             (1, "ARG1", 3), (2, "ARG1", 3), (4, "BV", 3)],
        ),
        require_labels=["_and_c"],
        require_edges=[("_look_v_1", "ARG1", "pron"), ("_have_v_1", "ARG1", "pron")],
    )

    # Binding: an appositive misparse of "about herself" becomes a plain
    # prepositional complement.
    o_things = make_rule(
        "bin.o_things", "N", ["things"],
        F([("t", "_the_q"), ("n", "_thing_n_of-about")], [("t", "BV", "n")], ["n"]),
    )
    o_told = make_rule(
        "bin.o_told", "VP", ["told", "me"], F([("v", "_tell_v_about")], externals=["v"])
    )
    o_about = make_rule("bin.o_about", "PP/N", ["about"], F([]))
    o_svp = make_rule(
        "bin.o_svp", "S", ["@VP", "@PP/N"],
        F([("v", "")], [], ["v"], [("VP", ["v"]), ("PP/N", [])]),
    )
    o_rel = make_rule(
        "bin.o_rel", "NP", ["@N", "@S"],
        F([("n", ""), ("s", "")], [("s", "ARG3", "n")], ["n"], [("N", ["n"]), ("S", ["s"])]),
    )
    o_herself = make_rule(
        "bin.o_herself", "NP", ["herself"],
        F([("q", "pronoun_q"), ("p", "pron")], [("q", "BV", "p")], ["p"]),
    )
    o_appos = make_rule(
        "bin.o_appos", "NP", ["@NP", "@NP"],
        F([("a", "appos"), ("h", ""), ("t", "")],
          [("a", "ARG1", "h"), ("a", "ARG2", "t")], ["h"], [("NP", ["t"]), ("NP", ["h"])]),
    )
    m_about = make_rule("bin.m_about", "P", ["about"], F([("a", "_about_p")], externals=["a"]))
    m_pp = make_rule(
        "bin.m_pp", "PP", ["@P", "@NP"],
        F([("a", ""), ("n", "")], [("a", "ARG2", "n")], ["a"], [("P", ["a"]), ("NP", ["n"])]),
    )
    m_svp = make_rule(
        "bin.m_svp", "S", ["@VP", "@PP"],
        F([("v", ""), ("p", "")], [("p", "ARG1", "v")], ["v"], [("VP", ["v"]), ("PP", ["p"])]),
    )
    entry(
        "binding",
        ["things", "told", "me", "about", "herself"],
        [o_things, o_told, o_about, o_svp, o_rel, o_herself, o_appos,
         m_about, m_pp, m_svp],
        d("bin.o_appos",
          d("bin.o_rel", d("bin.o_things"), d("bin.o_svp", d("bin.o_told"), d("bin.o_about"))),
          d("bin.o_herself")),
        [("bin.o_about", m_about), ("bin.o_appos", m_pp), ("bin.o_svp", m_svp)],
        d("bin.o_rel", d("bin.o_things"),
          d("bin.m_svp", d("bin.o_told"),
            d("bin.m_pp", d("bin.m_about"), d("bin.o_herself")))),
        expected(
            ["appos", "pron", "_thing_n_of-about", "_tell_v_about", "_the_q", "pronoun_q"],
            [(0, "ARG1", 1), (0, "ARG2", 2), (3, "ARG3", 2), (4, "BV", 2), (5, "BV", 1)],
        ),
        expected(
            ["_about_p", "pron", "_thing_n_of-about", "_tell_v_about", "_the_q", "pronoun_q"],
            [(0, "ARG1", 3), (0, "ARG2", 1), (3, "ARG3", 2), (4, "BV", 2), (5, "BV", 1)],
        ),
        require_labels=["_about_p"],
        forbid_labels=["appos"],
        require_edges=[("_about_p", "ARG1", "_tell_v_about"), ("_about_p", "ARG2", "pron")],
    )

    # Ellipsis: an elided object misparse becomes a generic entity that the
    # stranded adjective modifies.
    o_gave = make_rule("ell.o_gave", "V", ["gave"], F([("g", "_give_v_1")], externals=["g"]))
    o_us = make_rule(
        "ell.o_us", "NP", ["us"],
        F([("q", "pronoun_q"), ("p", "pron")], [("q", "BV", "p")], ["p"]),
    )
    o_vnp = make_rule(
        "ell.o_vnp", "VP", ["@V", "@NP"],
        F([("v", ""), ("n", "")], [("v", "ARG2", "n")], ["v"], [("V", ["v"]), ("NP", ["n"])]),
    )
    o_blissful = make_rule(
        "ell.o_blissful", "ADJ", ["blissful"], F([("b", "_blissful_a_1")], externals=["b"])
    )
    o_ppadj = make_rule(
        "ell.o_ppadj", "PP", ["@ADJ"], F([("a", "")], [], ["a"], [("ADJ", ["a"])])
    )
    o_vppp = make_rule(
        "ell.o_vppp", "VP", ["@VP", "@PP"],
        F([("s", "subord"), ("a", ""), ("b", "")],
          [("s", "ARG1", "a"), ("s", "ARG2", "b")], ["a"], [("VP", ["a"]), ("PP", ["b"])]),
    )
    m_vnp = make_rule(
        "ell.m_vnp", "VP", ["@V", "@NP"],
        F([("v", ""), ("n", "")], [("v", "ARG3", "n")], ["v"], [("V", ["v"]), ("NP", ["n"])]),
    )
    m_npadj = make_rule(
        "ell.m_npadj", "NP", ["@ADJ"],
        F([("q", "udef_q"), ("ge", "generic_entity"), ("a", "")],
          [("q", "BV", "ge"), ("a", "ARG1", "ge")], ["ge"], [("ADJ", ["a"])]),
    )
    m_vpnp = make_rule(
        "ell.m_vpnp", "VP", ["@VP", "@NP"],
        F([("v", ""), ("n", "")], [("v", "ARG2", "n")], ["v"], [("VP", ["v"]), ("NP", ["n"])]),
    )
    entry(
        "ellipsis",
        ["gave", "us", "blissful"],
        [o_gave, o_us, o_vnp, o_blissful, o_ppadj, o_vppp, m_vnp, m_npadj, m_vpnp],
        d("ell.o_vppp", d("ell.o_vnp", d("ell.o_gave"), d("ell.o_us")),
          d("ell.o_ppadj", d("ell.o_blissful"))),
        [("ell.o_vnp", m_vnp), ("ell.o_ppadj", m_npadj), ("ell.o_vppp", m_vpnp)],
        None,  # arities line up, apply in place
        expected(
            ["subord", "_give_v_1", "_blissful_a_1", "pron", "pronoun_q"],
            [(0, "ARG1", 1), (0, "ARG2", 2), (1, "ARG2", 3), (4, "BV", 3)],
        ),
        expected(
            ["_give_v_1", "generic_entity", "udef_q", "_blissful_a_1", "pron", "pronoun_q"],
            [(0, "ARG2", 1), (0, "ARG3", 4), (2, "BV", 1), (3, "ARG1", 1), (5, "BV", 4)],
        ),
        require_labels=["generic_entity"],
        forbid_labels=["subord"],
        require_edges=[("udef_q", "BV", "generic_entity"),
                       ("_blissful_a_1", "ARG1", "generic_entity"),
                       ("_give_v_1", "ARG3", "pron")],
    )

    # Filler-gap: a spurious free relative "what" becomes semantically empty
    # and the relative attaches through the gap.
    fg_info = make_rule(
        "fg.o_info", "N", ["information"],
        F([("i", "_information_n_on-about")], externals=["i"]),
    )
    fg_what = make_rule(
        "fg.o_what", "N", ["what"],
        F([("q", "which_q"), ("t", "thing")], [("q", "BV", "t")], ["t"]),
    )
    fg_youwant = make_rule(
        "fg.o_youwant", "S/N", ["you", "want"],
        F([("w", "_want_v_1"), ("p", "pron"), ("q", "pron_q"), ("g", "")],
          [("w", "ARG1", "p"), ("q", "BV", "p"), ("w", "ARG2", "g")], ["w", "g"]),
    )
    fg_s = make_rule(
        "fg.o_s", "S", ["@N", "@S/N"],
        F([("w", ""), ("g", "")], [], ["w"], [("N", ["g"]), ("S/N", ["w", "g"])]),
    )
    fg_np = make_rule(
        "fg.o_np", "NP", ["@N", "@S"],
        F([("n", ""), ("s", "")], [("n", "ARG1", "s")], ["n"], [("N", ["n"]), ("S", ["s"])]),
    )
    fg_m_what = make_rule("fg.m_what", "N", ["what"], F([]))
    fg_m_youwant = make_rule(
        "fg.m_youwant", "S/N", ["you", "want"],
        F([("w", "_want_v_1"), ("p", "pron"), ("q", "pron_q")],
          [("w", "ARG1", "p"), ("q", "BV", "p")], ["w"]),
    )
    fg_m_s = make_rule(
        "fg.m_s", "S", ["@N", "@S/N"],
        F([("w", "")], [], ["w"], [("N", []), ("S/N", ["w"])]),
    )
    fg_m_np = make_rule(
        "fg.m_np", "NP", ["@N", "@S"],
        F([("n", ""), ("s", "")], [("s", "ARG2", "n")], ["n"], [("N", ["n"]), ("S", ["s"])]),
    )
    entry(
        "filler_gap",
        ["information", "what", "you", "want"],
        [fg_info, fg_what, fg_youwant, fg_s, fg_np,
         fg_m_what, fg_m_youwant, fg_m_s, fg_m_np],
        d("fg.o_np", d("fg.o_info"), d("fg.o_s", d("fg.o_what"), d("fg.o_youwant"))),
        [("fg.o_what", fg_m_what), ("fg.o_youwant", fg_m_youwant), ("fg.o_s", fg_m_s),
         ("fg.o_np", fg_m_np)],
        None,  # same tree shape before and after
        expected(
            ["_information_n_on-about", "_want_v_1", "pron", "pron_q", "which_q", "thing"],
            [(0, "ARG1", 1), (1, "ARG1", 2), (1, "ARG2", 5), (3, "BV", 2), (4, "BV", 5)],
        ),
        expected(
            ["_information_n_on-about", "_want_v_1", "pron", "pron_q"],
            [(1, "ARG2", 0), (1, "ARG1", 2), (3, "BV", 2)],
        ),
        forbid_labels=["which_q", "thing"],
        require_edges=[("_want_v_1", "ARG2", "_information_n_on-about")],
    )

    # Argument structure: a nominal misparse of zero-marked "contact with"
    # becomes a plain transitive verb.
    ar_to = make_rule("arg.o_to", "P", ["to"], F([("u", "_used_a_to")], externals=["u"]))
    ar_contact = make_rule(
        "arg.o_contact", "N", ["contact"],
        F([("q", "udef_q"), ("c", "_contact_n_1")], [("q", "BV", "c")], ["c"]),
    )
    ar_with = make_rule("arg.o_with", "P", ["with"], F([("w", "_with_p")], externals=["w"]))
    ar_someone = make_rule(
        "arg.o_someone", "N", ["someone"],
        F([("q", "_some_q"), ("p", "person")], [("q", "BV", "p")], ["p"]),
    )
    ar_ppwith = make_rule(
        "arg.o_ppwith", "PP", ["@P", "@N"],
        F([("w", ""), ("p", "")], [("w", "ARG2", "p")], ["w"], [("P", ["w"]), ("N", ["p"])]),
    )
    ar_np = make_rule(
        "arg.o_np", "NP", ["@N", "@PP"],
        F([("c", ""), ("w", "")], [("w", "ARG1", "c")], ["c"], [("N", ["c"]), ("PP", ["w"])]),
    )
    ar_top = make_rule(
        "arg.o_top", "PP", ["@P", "@NP"],
        F([("u", ""), ("c", "")], [("u", "ARG2", "c")], ["u"], [("P", ["u"]), ("NP", ["c"])]),
    )
    ar_m_to = make_rule("arg.m_to", "COMP", ["to"], F([]))
    ar_m_contact = make_rule(
        "arg.m_contact", "V", ["contact"], F([("c", "_contact_v_1")], externals=["c"])
    )
    ar_m_with = make_rule("arg.m_with", "P", ["with"], F([]))
    ar_m_npwith = make_rule(
        "arg.m_npwith", "NP", ["@P", "@N"],
        F([("p", "")], [], ["p"], [("P", []), ("N", ["p"])]),
    )
    ar_m_vpnp = make_rule(
        "arg.m_vpnp", "VP", ["@V", "@NP"],
        F([("v", ""), ("n", "")], [("v", "ARG2", "n")], ["v"], [("V", ["v"]), ("NP", ["n"])]),
    )
    ar_m_top = make_rule(
        "arg.m_top", "VP", ["@COMP", "@VP"],
        F([("v", "")], [], ["v"], [("COMP", []), ("VP", ["v"])]),
    )
    entry(
        "argument_structure",
        ["to", "contact", "with", "someone"],
        [ar_to, ar_contact, ar_with, ar_someone, ar_ppwith, ar_np, ar_top,
         ar_m_to, ar_m_contact, ar_m_with, ar_m_npwith, ar_m_vpnp, ar_m_top],
        d("arg.o_top", d("arg.o_to"),
          d("arg.o_np", d("arg.o_contact"),
            d("arg.o_ppwith", d("arg.o_with"), d("arg.o_someone")))),
        [("arg.o_to", ar_m_to), ("arg.o_contact", ar_m_contact), ("arg.o_with", ar_m_with),
         ("arg.o_np", ar_m_vpnp), ("arg.o_ppwith", ar_m_npwith), ("arg.o_top", ar_m_top)],
        d("arg.m_top", d("arg.m_to"),
          d("arg.m_vpnp", d("arg.m_contact"),
            d("arg.m_npwith", d("arg.m_with"), d("arg.o_someone")))),
        expected(
            ["_used_a_to", "_contact_n_1", "udef_q", "_with_p", "person", "_some_q"],
            [(0, "ARG2", 1), (2, "BV", 1), (3, "ARG1", 1), (3, "ARG2", 4), (5, "BV", 4)],
        ),
        expected(
            ["_contact_v_1", "person", "_some_q"],
            [(0, "ARG2", 1), (2, "BV", 1)],
        ),
        require_labels=["_contact_v_1"],
        forbid_labels=["_contact_n_1", "_with_p", "_used_a_to", "udef_q"],
        require_edges=[("_contact_v_1", "ARG2", "person")],
    )

    return entries


def verify_entry(entry):
    from shrg.fixtures import catalog_modified_rules
    from shrg.graphs import graph_from_json
    from shrg.rules import derivation_from_json, derivation_yield, rule_from_json

    rules = [rule_from_json(r) for r in entry["rules"]]
    inv = RuleInventory(rules, "lex")
    deriv = derivation_from_json(entry["derivation"])
    tokens = entry["tokens"]
    assert derivation_yield(deriv, inv) == tokens, entry["phenomenon"]

    _, g_orig = compose(deriv, inv)
    exp_orig = graph_from_json(entry["expected_original"])
    assert iso_ignoring_top(g_orig, exp_orig), f"{entry['phenomenon']}: original drifted"

    pairs = [
        RevisionPair(orig, mod)
        for orig, mod in zip(entry["original"], catalog_modified_rules(entry))
    ]
    rewritten = (
        derivation_from_json(entry["modified_derivation"])
        if entry["modified_derivation"]
        else None
    )
    revised, full_inv = apply_revision(deriv, inv, pairs, rewritten)
    assert derivation_yield(revised, full_inv) == tokens, entry["phenomenon"]
    _, g_mod = compose(revised, full_inv)
    exp_mod = graph_from_json(entry["expected_modified"])
    assert iso_ignoring_top(g_mod, exp_mod), f"{entry['phenomenon']}: modified drifted"

    labels = {n.label for n in g_mod.nodes}
    for lab in entry["require_labels"]:
        assert lab in labels, f"{entry['phenomenon']}: missing {lab}"
    for lab in entry["forbid_labels"]:
        assert lab not in labels, f"{entry['phenomenon']}: stray {lab}"
    by_id = {n.id: n.label for n in g_mod.nodes}
    triples = {(by_id[e.src], e.role, by_id[e.tgt]) for e in g_mod.edges}
    for s, r, t in entry["require_edges"]:
        assert (s, r, t) in triples, f"{entry['phenomenon']}: missing edge {(s, r, t)}"
    print(f"  verified {entry['phenomenon']}")


def build_catalog():
    entries = phenomenon_entries()
    for entry in entries:
        verify_entry(entry)
    write_json("revision_catalog.json", entries)


# --- synthetic mini corpus ---------------------------------------------------


def build_mini_corpus():
    inv = seed_grammar()
    records = []
    rng_labels = random.Random(97)
    for source, count, seed in (("esfl", 24, 11), ("english", 24, 1211)):
        rng = random.Random(seed)
        for k in range(count):
            deriv = sample_derivation(inv, rng)
            tree, graph = compose(deriv, inv)
            tokens = [leaf.token for leaf in _tree_leaves(tree)]
            n_annotators = 3 if k % 5 == 0 else (2 if k % 5 in (1, 2, 3) else 1)
            annos = ["anno1", "anno2", "anno3"][:n_annotators]
            base = "accept" if rng_labels.random() < 0.55 else "reject"
            labels = {}
            for a in annos:
                r = rng_labels.random()
                if r < 0.9:
                    labels[a] = base
                elif r < 0.97:
                    labels[a] = "reject" if base == "accept" else "accept"
                else:
                    labels[a] = "abandon"
            provenance = ("accepted", "modified", "composed")[k % 3]
            records.append(
                SentenceRecord(
                    id=f"{source}-{k:04d}",
                    sentence=" ".join(tokens),
                    tokens=tuple(tokens),
                    source=source,
                    tree=tree,
                    graph=graph,
                    derivation=deriv,
                    labels=labels,
                    provenance=provenance,
                )
            )
    save_corpus(records, DATA / "mini_corpus.jsonl")
    print(f"wrote {DATA / 'mini_corpus.jsonl'} ({len(records)} records)")

    from shrg.rules import inventory_to_json as inv_json

    write_json("seed_grammar.json", inv_json(inv))


def _tree_leaves(tree):
    from shrg.trees import leaves

    return leaves(tree)


def build_workbench_corpus():
    from shrg.trees import parse_tree

    records = [
        SentenceRecord(
            id="wb-0001",
            sentence="visit often Paris",
            tokens=("visit", "often", "Paris"),
            source="esfl",
            tree=parse_tree("(VP (V (V visit) (Adv often)) (NP Paris))"),
        ),
        SentenceRecord(
            id="wb-0002",
            sentence="visit Paris",
            tokens=("visit", "Paris"),
            source="english",
            labels={"anno1": "accept"},
            provenance="accepted",
        ),
        SentenceRecord(
            id="wb-0003",
            sentence="visit often Paris",
            tokens=("visit", "often", "Paris"),
            source="esfl",
            labels={"anno1": "abandon", "anno2": "abandon"},
        ),
    ]
    save_corpus(records, DATA / "workbench_corpus.jsonl")
    print(f"wrote {DATA / 'workbench_corpus.jsonl'} ({len(records)} records)")


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    build_table1()
    build_catalog()
    build_mini_corpus()
    build_workbench_corpus()


if __name__ == "__main__":
    main()
