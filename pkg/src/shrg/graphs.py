"""Semantic graphs: directed labeled multigraphs with a designated top node.

Nodes carry predicate labels (``_visit_v_1``, ``proper_q``, ...) and optional
character anchors into the source sentence.  Edges carry role labels (``ARG1``,
``BV``, ...).  All values are immutable after construction and safe to share.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from functools import cached_property


class GraphError(ValueError):
    """A graph value violates a structural invariant."""


class IsomorphismSizeError(GraphError):
    """Isomorphism check requested on graphs above the node cap."""


_ID_CHUNKS = re.compile(r"(\d+)")


def natural_key(s: str):
    """Sort key that orders embedded integers numerically (n2 before n10)."""
    return tuple(int(p) if p.isdigit() else p for p in _ID_CHUNKS.split(s))


@dataclass(frozen=True)
class SemNode:
    id: str
    label: str
    anchor: tuple[int, int] | None = None

    def __post_init__(self):
        if not self.id:
            raise GraphError("node id must be non-empty")
        if self.anchor is not None:
            object.__setattr__(self, "anchor", tuple(self.anchor))
            start, end = self.anchor
            if not (0 <= start < end):
                raise GraphError(f"bad anchor {self.anchor!r} on node {self.id!r}")


@dataclass(frozen=True)
class SemEdge:
    src: str
    role: str
    tgt: str

    def __post_init__(self):
        if not self.role:
            raise GraphError(f"empty role on edge {self.src!r}->{self.tgt!r}")


@dataclass(frozen=True)
class SemGraph:
    """Immutable semantic graph.

    An empty node label marks a placeholder awaiting a predicate during
    composition; ``validate()`` flags such nodes (and disconnectedness) as
    warnings rather than construction errors, since rule fragments
    legitimately contain them.
    """

    nodes: tuple[SemNode, ...] = ()
    edges: tuple[SemEdge, ...] = ()
    top: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for n in self.nodes:
            if n.id in seen:
                raise GraphError(f"duplicate node id {n.id!r}")
            seen.add(n.id)
        triples = set()
        for e in self.edges:
            if e.src not in seen or e.tgt not in seen:
                raise GraphError(f"edge {e} references a missing node")
            t = (e.src, e.role, e.tgt)
            if t in triples:
                raise GraphError(f"duplicate edge {t}")
            triples.add(t)
        if self.top is not None and self.top not in seen:
            raise GraphError(f"top {self.top!r} references a missing node")

    @cached_property
    def node_by_id(self) -> dict[str, SemNode]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def out_edges(self) -> dict[str, tuple[SemEdge, ...]]:
        out: dict[str, list[SemEdge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            out[e.src].append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[SemEdge, ...]]:
        inc: dict[str, list[SemEdge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            inc[e.tgt].append(e)
        return {k: tuple(v) for k, v in inc.items()}

    def validate(self) -> list[str]:
        """Non-fatal issues: empty labels, disconnected node sets."""
        warnings = []
        unlabeled = sorted(n.id for n in self.nodes if not n.label)
        if unlabeled:
            warnings.append(f"unlabeled nodes: {', '.join(unlabeled)}")
        if len(self.nodes) > 1:
            seen = set()
            stack = [self.nodes[0].id]
            neigh: dict[str, set[str]] = {n.id: set() for n in self.nodes}
            for e in self.edges:
                neigh[e.src].add(e.tgt)
                neigh[e.tgt].add(e.src)
            while stack:
                nid = stack.pop()
                if nid in seen:
                    continue
                seen.add(nid)
                stack.extend(neigh[nid] - seen)
            if len(seen) < len(self.nodes):
                warnings.append(
                    f"graph is disconnected ({len(seen)} of {len(self.nodes)} nodes reachable)"
                )
        return warnings


def graph_to_json(g: SemGraph) -> dict:
    """Graph JSON object; nodes and edges in deterministic order."""
    return {
        "top": g.top,
        "nodes": [
            {"id": n.id, "label": n.label, "anchor": list(n.anchor) if n.anchor else None}
            for n in sorted(g.nodes, key=lambda n: natural_key(n.id))
        ],
        "edges": [
            {"src": e.src, "role": e.role, "tgt": e.tgt}
            for e in sorted(g.edges, key=lambda e: (natural_key(e.src), e.role, natural_key(e.tgt)))
        ],
    }


def graph_from_json(obj: dict) -> SemGraph:
    try:
        nodes = tuple(
            SemNode(n["id"], n["label"], tuple(n["anchor"]) if n.get("anchor") else None)
            for n in obj["nodes"]
        )
        edges = tuple(SemEdge(e["src"], e["role"], e["tgt"]) for e in obj["edges"])
        top = obj.get("top")
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph object: {exc}") from exc
    return SemGraph(nodes, edges, top)


def dumps_graph(g: SemGraph) -> str:
    return json.dumps(graph_to_json(g), ensure_ascii=False)


def loads_graph(text: str) -> SemGraph:
    return graph_from_json(json.loads(text))


def _refined_colors(g: SemGraph) -> dict[str, str]:
    """Stable neighbourhood colors (iterated label refinement to a fixpoint).

    Colors are content-derived digests, so they compare consistently across
    different graphs with isomorphic structure.
    """
    colors = {n.id: hashlib.sha1(n.label.encode("utf-8")).hexdigest() for n in g.nodes}
    for _ in range(max(1, len(g.nodes))):
        nxt = {}
        for n in g.nodes:
            out = sorted((e.role, colors[e.tgt]) for e in g.out_edges[n.id])
            inc = sorted((e.role, colors[e.src]) for e in g.in_edges[n.id])
            sig = json.dumps([colors[n.id], out, inc], separators=(",", ":"))
            nxt[n.id] = hashlib.sha1(sig.encode("utf-8")).hexdigest()
        if len(set(nxt.values())) == len(set(colors.values())):
            colors = nxt
            break
        colors = nxt
    return colors


def canonical_order(g: SemGraph) -> list[str]:
    """Deterministic node order: breadth-first from top.

    Ties are broken by (label, sorted outgoing role list, neighbourhood
    color, original id); unreached components are seeded from the least
    remaining node under the same key.
    """
    colors = _refined_colors(g)

    def key(nid: str):
        n = g.node_by_id[nid]
        roles = tuple(sorted(e.role for e in g.out_edges[nid]))
        return (n.label, roles, colors[nid], natural_key(nid))

    order: list[str] = []
    visited: set[str] = set()
    remaining = {n.id for n in g.nodes}

    def bfs(seed: str):
        queue = [seed]
        visited.add(seed)
        while queue:
            nid = queue.pop(0)
            order.append(nid)
            remaining.discard(nid)
            neighbours = [e.tgt for e in g.out_edges[nid]] + [e.src for e in g.in_edges[nid]]
            for nb in sorted(set(neighbours) - visited, key=key):
                visited.add(nb)
                queue.append(nb)

    if g.top is not None:
        bfs(g.top)
    while remaining:
        bfs(min(remaining, key=key))
    return order


def canonicalize(g: SemGraph) -> SemGraph:
    """Renumber node ids ``n0, n1, ...`` in canonical order; idempotent."""
    order = canonical_order(g)
    rename = {nid: f"n{i}" for i, nid in enumerate(order)}
    nodes = tuple(
        SemNode(rename[nid], g.node_by_id[nid].label, g.node_by_id[nid].anchor) for nid in order
    )
    edges = tuple(
        sorted(
            (SemEdge(rename[e.src], e.role, rename[e.tgt]) for e in g.edges),
            key=lambda e: (natural_key(e.src), e.role, natural_key(e.tgt)),
        )
    )
    top = rename[g.top] if g.top is not None else None
    return SemGraph(nodes, edges, top)


def isomorphic(g1: SemGraph, g2: SemGraph, node_cap: int = 512) -> bool:
    """Exact label- and role-preserving isomorphism with top mapped onto top.

    Backtracking over label-compatible node pairs; intended for the small
    graphs of this domain.  Raises above ``node_cap`` to flag misuse.
    """
    if max(len(g1.nodes), len(g2.nodes)) > node_cap:
        raise IsomorphismSizeError(
            f"isomorphism check beyond node cap {node_cap}: "
            f"{len(g1.nodes)} vs {len(g2.nodes)} nodes"
        )
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return False
    if (g1.top is None) != (g2.top is None):
        return False
    if sorted(n.label for n in g1.nodes) != sorted(n.label for n in g2.nodes):
        return False
    if sorted(e.role for e in g1.edges) != sorted(e.role for e in g2.edges):
        return False

    colors1 = _refined_colors(g1)
    colors2 = _refined_colors(g2)
    by_color: dict[str, list[str]] = {}
    for n in g2.nodes:
        by_color.setdefault(colors2[n.id], []).append(n.id)
    candidates = {n.id: tuple(by_color.get(colors1[n.id], ())) for n in g1.nodes}
    if any(not c for c in candidates.values()):
        return False

    edge_set2 = {(e.src, e.role, e.tgt) for e in g2.edges}
    order = sorted(candidates, key=lambda nid: (len(candidates[nid]), natural_key(nid)))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(nid: str, cand: str) -> bool:
        if g1.top == nid and g2.top != cand:
            return False
        if g2.top == cand and g1.top != nid:
            return False
        for e in g1.out_edges[nid]:
            if e.tgt in mapping and (cand, e.role, mapping[e.tgt]) not in edge_set2:
                return False
        for e in g1.in_edges[nid]:
            if e.src in mapping and (mapping[e.src], e.role, cand) not in edge_set2:
                return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        nid = order[i]
        for cand in candidates[nid]:
            if cand in used or not consistent(nid, cand):
                continue
            mapping[nid] = cand
            used.add(cand)
            if backtrack(i + 1):
                return True
            del mapping[nid]
            used.discard(cand)
        return False

    return backtrack(0)
