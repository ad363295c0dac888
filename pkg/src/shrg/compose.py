"""Synchronous composition: a derivation yields a tree and a graph in lockstep.

Bottom-up, left to right: each derivation node instantiates its rule's
fragment and replaces one hyperedge per child.  Nodes introduced with a
predicate label are anchored to the rule instance's token span (its own
terminals when it has any, its full yield otherwise), which keeps composed
graphs extractable.
"""

from __future__ import annotations

from .fragments import FragmentError, GraphFragment, replace_hyperedge
from .graphs import SemGraph, SemNode, canonical_order, canonicalize
from .rules import Derivation, RuleInventory, Terminal, validate_derivation
from .trees import Internal, Leaf, renumber_leaves, token_char_spans


class ComposeError(FragmentError):
    pass


class DanglingNonterminalError(ComposeError):
    pass


def _anchored(frag: GraphFragment, span: tuple[int, int] | None) -> GraphFragment:
    if span is None:
        return frag
    nodes = tuple(
        SemNode(n.id, n.label, n.anchor if n.anchor or not n.label else span)
        for n in frag.graph.nodes
    )
    return GraphFragment(
        SemGraph(nodes, frag.graph.edges, frag.graph.top), frag.externals, frag.nt_edges
    )


def compose(d: Derivation, inv: RuleInventory) -> tuple[Internal, SemGraph]:
    """Compose the syntax tree and the canonicalized semantic graph of ``d``.

    The top node is the root fragment's first external node when it has any,
    else the unique node with no incoming ARG/BV edge, else the first node
    in canonical order.
    """
    validate_derivation(d, inv)

    tokens: list[str] = []
    spans: list[tuple[int, int]] = []

    def collect_tokens(node: Derivation):
        rule = inv[node.rule_id]
        child_iter = iter(node.children)
        for sym in rule.syn_rhs:
            if isinstance(sym, Terminal):
                tokens.append(sym.token)
            else:
                collect_tokens(next(child_iter))

    collect_tokens(d)
    spans = token_char_spans(tokens)
    cursor = [0]

    def build(node: Derivation) -> tuple[Internal, GraphFragment]:
        rule = inv[node.rule_id]
        start_tok = cursor[0]
        syn_children = []
        fragments = []
        own_spans = []
        child_iter = iter(node.children)
        for sym in rule.syn_rhs:
            if isinstance(sym, Terminal):
                own_spans.append(spans[cursor[0]])
                syn_children.append(Leaf(sym.token, cursor[0]))
                cursor[0] += 1
            else:
                subtree, subfrag = build(next(child_iter))
                syn_children.append(subtree)
                fragments.append(subfrag)
        end_tok = cursor[0]
        if own_spans:
            span = (own_spans[0][0], own_spans[-1][1])
        elif end_tok > start_tok:
            span = (spans[start_tok][0], spans[end_tok - 1][1])
        else:
            span = None
        frag = _anchored(rule.sem, span)
        for subfrag in fragments:
            frag = replace_hyperedge(frag, 0, subfrag)
        return Internal(rule.lhs, tuple(syn_children)), frag

    tree, frag = build(d)
    if frag.nt_edges:
        labels = ", ".join(nt.label for nt in frag.nt_edges)
        raise DanglingNonterminalError(f"unexpanded nonterminal hyperedges: {labels}")

    graph = frag.graph
    if graph.nodes:
        if frag.externals:
            top = frag.externals[0]
        else:
            roots = [
                n.id
                for n in graph.nodes
                if not any(
                    e.role == "BV" or e.role.startswith("ARG") for e in graph.in_edges[n.id]
                )
            ]
            top = roots[0] if len(roots) == 1 else canonical_order(graph)[0]
        graph = SemGraph(graph.nodes, graph.edges, top)
    return renumber_leaves(tree), canonicalize(graph)
