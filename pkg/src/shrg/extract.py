"""Rule extraction from aligned tree-graph pairs.

Each predicate is assigned to the lowest tree node whose leaf span covers
its anchor; unanchored predicates follow their BV target, or the lowest
common ancestor of their arguments.  A tree node's rule fragment is its
induced subgraph minus the children's induced subgraphs, with each child
abstracted to a nonterminal hyperedge over the child's boundary nodes.
Fragments come out anchor-free so identical constructions deduplicate
across sentences.
"""

from __future__ import annotations

import json

from .fragments import GraphFragment, NonterminalHyperedge, fragment_to_json
from .graphs import GraphError, SemEdge, SemGraph, SemNode, canonical_order
from .rules import Derivation, Nonterminal, SyncRule, Terminal
from .trees import Internal, Leaf, token_char_spans, yield_tokens


class ExtractError(GraphError):
    pass


class UnanchorableError(ExtractError):
    pass


class NonCompositionalError(ExtractError):
    pass


def _internal_paths(tree: Internal):
    """DFS paths of internal nodes plus each node's leaf index range."""
    paths = {}
    counter = [0]

    def walk(node, path):
        if isinstance(node, Leaf):
            counter[0] += 1
            return (counter[0] - 1, counter[0] - 1)
        lo, hi = None, None
        child_paths = []
        for i, child in enumerate(node.children):
            span = walk(child, path + (i,))
            if isinstance(child, Internal):
                child_paths.append(path + (i,))
            lo = span[0] if lo is None else lo
            hi = span[1]
        paths[path] = {"node": node, "range": (lo, hi), "children": child_paths}
        return (lo, hi)

    walk(tree, ())
    return paths


def _lowest_covering(paths, lo: int, hi: int):
    path = ()
    while True:
        for child in paths[path]["children"]:
            clo, chi = paths[child]["range"]
            if clo <= lo and hi <= chi:
                path = child
                break
        else:
            return path


def _lca(paths, a, b):
    n = 0
    while n < min(len(a), len(b)) and a[n] == b[n]:
        n += 1
    return a[:n]


def assign_nodes(tree: Internal, graph: SemGraph) -> dict[str, tuple]:
    """Map every graph node id to the tree path of the rule that owns it."""
    tokens = yield_tokens(tree)
    spans = token_char_spans(tokens)
    total = spans[-1][1] if spans else 0
    paths = _internal_paths(tree)
    home: dict[str, tuple] = {}

    for node in graph.nodes:
        if node.anchor is None:
            continue
        start, end = node.anchor
        if start >= total:
            raise ExtractError(
                f"anchor {node.anchor} of node {node.id!r} is outside the sentence"
            )
        covered = [k for k, (ts, te) in enumerate(spans) if start < te and ts < end]
        if not covered:
            raise UnanchorableError(f"anchor {node.anchor} of node {node.id!r} covers no token")
        home[node.id] = _lowest_covering(paths, covered[0], covered[-1])

    pending = [n.id for n in graph.nodes if n.id not in home]
    while pending:
        progressed = False
        still = []
        for nid in pending:
            bv = [e.tgt for e in graph.out_edges[nid] if e.role == "BV" and e.tgt in home]
            if bv:
                home[nid] = home[bv[0]]
                progressed = True
                continue
            args = [e.tgt for e in graph.out_edges[nid]] or [e.src for e in graph.in_edges[nid]]
            if args and all(a in home for a in args):
                place = home[args[0]]
                for a in args[1:]:
                    place = _lca(paths, place, home[a])
                home[nid] = place
                progressed = True
                continue
            still.append(nid)
        if not progressed:
            raise UnanchorableError(
                "cannot place predicates: " + ", ".join(sorted(still))
            )
        pending = still
    return home


def canonical_fragment(frag: GraphFragment) -> GraphFragment:
    """Rename fragment node ids ``f0, f1, ...``: externals first, then
    hyperedge attachments, then the rest in canonical order."""
    pinned = list(frag.externals)
    for nt in frag.nt_edges:
        for a in nt.attachments:
            if a not in pinned:
                pinned.append(a)
    rest = [nid for nid in canonical_order(frag.graph) if nid not in pinned]
    rename = {nid: f"f{i}" for i, nid in enumerate(pinned + rest)}
    nodes = tuple(
        SemNode(rename[n.id], n.label, n.anchor)
        for n in sorted(frag.graph.nodes, key=lambda n: rename[n.id])
    )
    edges = tuple(
        sorted(
            (SemEdge(rename[e.src], e.role, rename[e.tgt]) for e in frag.graph.edges),
            key=lambda e: (e.src, e.role, e.tgt),
        )
    )
    top = rename[frag.graph.top] if frag.graph.top is not None else None
    return GraphFragment(
        SemGraph(nodes, edges, top),
        tuple(rename[x] for x in frag.externals),
        tuple(NonterminalHyperedge(nt.label, tuple(rename[a] for a in nt.attachments))
              for nt in frag.nt_edges),
    )


def rule_key(lhs: str, syn_rhs, frag: GraphFragment) -> str:
    """Structural identity of a rule, used to merge duplicates."""
    rhs = [s.name if isinstance(s, Nonterminal) else "{%s}" % s.token for s in syn_rhs]
    return json.dumps(
        [lhs, rhs, fragment_to_json(canonical_fragment(frag))],
        ensure_ascii=False,
        separators=(",", ":"),
        sort_keys=True,
    )


def extract(
    tree: Internal, graph: SemGraph, boundary_cap: int = 8
) -> tuple[Derivation, list[SyncRule]]:
    """Decompose a gold pair into a derivation over freshly numbered rules.

    Recomposing the result yields a graph isomorphic to ``graph``; a boundary
    wider than ``boundary_cap`` marks the pair as non-compositional.
    """
    home = assign_nodes(tree, graph)
    paths = _internal_paths(tree)

    induced: dict[tuple, set[str]] = {p: set() for p in paths}
    for nid, path in home.items():
        for depth in range(len(path) + 1):
            prefix = path[:depth]
            if prefix in induced:
                induced[prefix].add(nid)

    rank = {nid: i for i, nid in enumerate(canonical_order(graph))}

    def boundary(path) -> list[str]:
        inside = induced[path]
        out = set()
        for e in graph.edges:
            if (e.src in inside) != (e.tgt in inside):
                out.add(e.src if e.src in inside else e.tgt)
        # the top node faces the virtual root, so it is boundary wherever it
        # sits: threading it up the spine lets recomposition restore the top
        if graph.top is not None and graph.top in inside:
            out.add(graph.top)
        found = sorted(out, key=lambda nid: rank[nid])
        if len(found) > boundary_cap:
            raise NonCompositionalError(
                f"boundary of tree node {'.'.join(map(str, path)) or 'root'} "
                f"has {len(found)} nodes (cap {boundary_cap})"
            )
        return found

    rules: list[SyncRule] = []
    by_key: dict[str, int] = {}

    def intern_rule(lhs, syn_rhs, frag: GraphFragment) -> str:
        key = rule_key(lhs, syn_rhs, frag)
        if key in by_key:
            i = by_key[key]
            old = rules[i]
            rules[i] = SyncRule(old.id, old.lhs, old.syn_rhs, old.sem, old.count + 1)
            return old.id
        rid = f"r{len(rules)}"
        canon = canonical_fragment(frag)
        rules.append(SyncRule(rid, lhs, tuple(syn_rhs), canon, 1))
        by_key[key] = len(rules) - 1
        return rid

    def build(path) -> Derivation:
        info = paths[path]
        node = info["node"]
        inside = induced[path]
        child_sets = [induced[c] for c in info["children"]]
        own = inside - set().union(*child_sets) if child_sets else set(inside)

        frag_ids: list[str] = sorted(own, key=lambda nid: rank[nid])
        child_bounds = []
        for cpath in info["children"]:
            b = boundary(cpath)
            child_bounds.append(b)
            for nid in b:
                if nid not in frag_ids:
                    frag_ids.append(nid)

        def keep_edge(e: SemEdge) -> bool:
            if e.src not in inside or e.tgt not in inside:
                return False
            return not any(e.src in cs and e.tgt in cs for cs in child_sets)

        nodes = tuple(
            SemNode(nid, graph.node_by_id[nid].label if nid in own else "", None)
            for nid in frag_ids
        )
        edges = tuple(e for e in graph.edges if keep_edge(e))

        syn_rhs = []
        nt_edges = []
        child_derivs = []
        bound_iter = iter(child_bounds)
        child_iter = iter(info["children"])
        for child in node.children:
            if isinstance(child, Leaf):
                syn_rhs.append(Terminal(child.token))
            else:
                cpath = next(child_iter)
                syn_rhs.append(Nonterminal(child.label))
                nt_edges.append(NonterminalHyperedge(child.label, tuple(next(bound_iter))))
                child_derivs.append(build(cpath))

        externals = tuple(boundary(path))
        frag = GraphFragment(SemGraph(nodes, edges), externals, tuple(nt_edges))
        rid = intern_rule(node.label, syn_rhs, frag)
        return Derivation(rid, tuple(child_derivs))

    derivation = build(())
    return derivation, rules


def merge_extracted(results) -> tuple[list[SyncRule], list[Derivation | None]]:
    """Merge per-sentence extractions onto shared rule ids with summed counts.

    ``results`` is an iterable of (derivation, rules) or None for pairs that
    failed extraction; derivations come back rewritten onto the merged ids.
    """
    merged: list[SyncRule] = []
    index: dict[str, int] = {}
    derivations: list[Derivation | None] = []

    for item in results:
        if item is None:
            derivations.append(None)
            continue
        derivation, rules = item
        local = {}
        for rule in rules:
            key = rule_key(rule.lhs, rule.syn_rhs, rule.sem)
            if key in index:
                i = index[key]
                old = merged[i]
                merged[i] = SyncRule(
                    old.id, old.lhs, old.syn_rhs, old.sem, old.count + rule.count
                )
            else:
                i = len(merged)
                index[key] = i
                merged.append(
                    SyncRule(f"r{i}", rule.lhs, rule.syn_rhs, rule.sem, rule.count)
                )
            local[rule.id] = merged[i].id

        def remap(d: Derivation) -> Derivation:
            return Derivation(local[d.rule_id], tuple(remap(c) for c in d.children))

        derivations.append(remap(derivation))
    return merged, derivations
