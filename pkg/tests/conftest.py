import itertools
import random
import sys

import pytest

from shrg.fixtures import fig2_derivation, fig2_graph, mini_corpus_text, seed_grammar, table1_inventory
from shrg.graphs import SemEdge, SemGraph, SemNode


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # one visible line per acceptance criterion
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in str(item.fspath):
        return
    verdict = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    name = item.name.replace("test_", "")
    print(f"\n[acceptance] {name}: {verdict}", file=sys.stderr)


@pytest.fixture(scope="session")
def table1():
    return table1_inventory()


@pytest.fixture(scope="session")
def fig2():
    return fig2_graph()


@pytest.fixture(scope="session")
def fig2_deriv():
    return fig2_derivation()


@pytest.fixture(scope="session")
def grammar():
    return seed_grammar()


@pytest.fixture()
def mini_corpus_path(tmp_path):
    path = tmp_path / "mini_corpus.jsonl"
    path.write_text(mini_corpus_text(), encoding="utf-8")
    return path


def iso_oracle(g1: SemGraph, g2: SemGraph) -> bool:
    """Brute force isomorphism over all bijections; test-side ground truth."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return False
    if (g1.top is None) != (g2.top is None):
        return False
    ids1 = [n.id for n in g1.nodes]
    lab1 = {n.id: n.label for n in g1.nodes}
    lab2 = {n.id: n.label for n in g2.nodes}
    edges2 = {(e.src, e.role, e.tgt) for e in g2.edges}
    for perm in itertools.permutations([n.id for n in g2.nodes]):
        m = dict(zip(ids1, perm))
        if any(lab1[a] != lab2[m[a]] for a in ids1):
            continue
        if g1.top is not None and m[g1.top] != g2.top:
            continue
        if all((m[e.src], e.role, m[e.tgt]) in edges2 for e in g1.edges):
            return True
    return False


def random_graph(rng: random.Random, max_nodes=7, labels=("a", "b", "c", "d")) -> SemGraph:
    """Small random labeled graph for scorer and isomorphism tests."""
    n = rng.randint(1, max_nodes)
    nodes = tuple(SemNode(f"v{i}", rng.choice(labels)) for i in range(n))
    edges = []
    seen = set()
    for _ in range(rng.randint(0, 2 * n)):
        s = rng.randrange(n)
        t = rng.randrange(n)
        role = rng.choice(("ARG1", "ARG2", "BV"))
        key = (f"v{s}", role, f"v{t}")
        if key not in seen:
            seen.add(key)
            edges.append(SemEdge(*key))
    top = f"v{rng.randrange(n)}" if rng.random() < 0.8 else None
    return SemGraph(nodes, tuple(edges), top)


def permuted(g: SemGraph, perm: dict[str, str]) -> SemGraph:
    nodes = tuple(SemNode(perm[n.id], n.label, n.anchor) for n in g.nodes)
    edges = tuple(SemEdge(perm[e.src], e.role, perm[e.tgt]) for e in g.edges)
    top = perm[g.top] if g.top is not None else None
    return SemGraph(nodes, edges, top)
