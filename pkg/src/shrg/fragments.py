"""Hypergraph fragments: rule right-hand sides and hyperedge replacement.

A fragment is a semantic graph plus an ordered list of external nodes and an
ordered list of nonterminal hyperedges.  Replacing a hyperedge splices a copy
of another fragment into the host, fusing the replacement's external nodes
with the hyperedge's attachment nodes by position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graphs import GraphError, SemEdge, SemGraph, SemNode, graph_from_json, graph_to_json


class FragmentError(GraphError):
    pass


class ArityMismatchError(FragmentError):
    pass


class LabelClashError(FragmentError):
    pass


@dataclass(frozen=True)
class NonterminalHyperedge:
    label: str
    attachments: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "attachments", tuple(self.attachments))
        if not self.label:
            raise FragmentError("hyperedge label must be non-empty")
        if len(set(self.attachments)) != len(self.attachments):
            raise FragmentError(f"duplicate attachment in hyperedge {self.label!r}")


@dataclass(frozen=True)
class GraphFragment:
    graph: SemGraph
    externals: tuple[str, ...] = ()
    nt_edges: tuple[NonterminalHyperedge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "externals", tuple(self.externals))
        object.__setattr__(self, "nt_edges", tuple(self.nt_edges))
        ids = set(self.graph.node_by_id)
        if len(set(self.externals)) != len(self.externals):
            raise FragmentError("external nodes must be distinct")
        for ext in self.externals:
            if ext not in ids:
                raise FragmentError(f"external node {ext!r} not in fragment graph")
        for nt in self.nt_edges:
            for a in nt.attachments:
                if a not in ids:
                    raise FragmentError(
                        f"attachment {a!r} of hyperedge {nt.label!r} not in fragment graph"
                    )


EMPTY_FRAGMENT = GraphFragment(SemGraph())


def pass_through_fragment(arity: int) -> GraphFragment:
    """Empty semantics: unlabeled externals only, no edges, no hyperedges."""
    nodes = tuple(SemNode(f"e{i}", "") for i in range(arity))
    return GraphFragment(SemGraph(nodes), tuple(n.id for n in nodes))


_FRESH = re.compile(r"^x(\d+)$")


def replace_hyperedge(host: GraphFragment, nt_index: int, repl: GraphFragment) -> GraphFragment:
    """Delete hyperedge ``nt_index`` of the host and splice in ``repl``.

    ``repl.externals[k]`` fuses with the hyperedge's k-th attachment; the
    fused node keeps the host's id, and takes the replacement's label and
    anchor when the host side is unlabeled.  Non-external replacement nodes
    get fresh ``x<k>`` ids.  Node count law:
    ``|V'| = |V_host| + |V_repl| - |externals|``.
    """
    if not (0 <= nt_index < len(host.nt_edges)):
        raise FragmentError(f"no hyperedge at index {nt_index}")
    edge = host.nt_edges[nt_index]
    if len(repl.externals) != len(edge.attachments):
        raise ArityMismatchError(
            f"hyperedge {edge.label!r} has arity {len(edge.attachments)}, "
            f"replacement has {len(repl.externals)} external nodes"
        )

    counter = 0
    for nid in host.graph.node_by_id:
        m = _FRESH.match(nid)
        if m:
            counter = max(counter, int(m.group(1)) + 1)

    fuse = dict(zip(repl.externals, edge.attachments))
    rename: dict[str, str] = {}
    for node in repl.graph.nodes:
        if node.id in fuse:
            rename[node.id] = fuse[node.id]
        else:
            rename[node.id] = f"x{counter}"
            counter += 1

    merged: dict[str, SemNode] = {n.id: n for n in host.graph.nodes}
    for node in repl.graph.nodes:
        nid = rename[node.id]
        if nid in merged:
            have = merged[nid]
            if node.label and have.label and node.label != have.label:
                raise LabelClashError(
                    f"cannot fuse {have.label!r} with {node.label!r} on node {nid!r}"
                )
            if node.label:
                merged[nid] = SemNode(nid, node.label, node.anchor or have.anchor)
        else:
            merged[nid] = SemNode(nid, node.label, node.anchor)

    triples = {(e.src, e.role, e.tgt) for e in host.graph.edges}
    edges = list(host.graph.edges)
    for e in repl.graph.edges:
        t = (rename[e.src], e.role, rename[e.tgt])
        if t not in triples:
            triples.add(t)
            edges.append(SemEdge(*t))

    nt_edges = list(host.nt_edges[:nt_index]) + list(host.nt_edges[nt_index + 1 :])
    for nt in repl.nt_edges:
        nt_edges.append(
            NonterminalHyperedge(nt.label, tuple(rename[a] for a in nt.attachments))
        )

    graph = SemGraph(tuple(merged.values()), tuple(edges), host.graph.top)
    return GraphFragment(graph, host.externals, tuple(nt_edges))


def fragment_to_json(f: GraphFragment) -> dict:
    obj = graph_to_json(f.graph)
    obj["externals"] = list(f.externals)
    obj["nt_edges"] = [
        {"label": nt.label, "attachments": list(nt.attachments)} for nt in f.nt_edges
    ]
    return obj


def fragment_from_json(obj: dict) -> GraphFragment:
    graph = graph_from_json(obj)
    externals = tuple(obj.get("externals", ()))
    nts = tuple(
        NonterminalHyperedge(nt["label"], tuple(nt["attachments"]))
        for nt in obj.get("nt_edges", ())
    )
    return GraphFragment(graph, externals, nts)
