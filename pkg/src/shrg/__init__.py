"""Synchronous hyperedge replacement grammar toolkit.

Composes semantic graphs from synchronized syntax/semantics rules, extracts
rules from gold tree-graph pairs, scores graphs with S-match, runs the
frequency/transparency study pipeline, and serves a review workbench.
"""

from .compose import ComposeError, DanglingNonterminalError, compose
from .extract import ExtractError, NonCompositionalError, extract, merge_extracted
from .fragments import (
    ArityMismatchError,
    FragmentError,
    GraphFragment,
    LabelClashError,
    NonterminalHyperedge,
    replace_hyperedge,
)
from .graphs import (
    GraphError,
    SemEdge,
    SemGraph,
    SemNode,
    canonicalize,
    graph_from_json,
    graph_to_json,
    isomorphic,
)
from .rules import (
    Derivation,
    Nonterminal,
    RuleError,
    RuleInventory,
    SyncRule,
    Terminal,
    cfg_signature,
)
from .smatch import SmatchResult, oracle_score, score, to_triples
from .substitute import RevisionError, RevisionPair, apply_revision, substitute_rules
from .trees import Internal, Leaf, TreeSyntaxError, parse_tree, serialize_tree

__version__ = "0.1.0"

__all__ = [
    "ArityMismatchError",
    "ComposeError",
    "DanglingNonterminalError",
    "Derivation",
    "ExtractError",
    "FragmentError",
    "GraphError",
    "GraphFragment",
    "Internal",
    "LabelClashError",
    "Leaf",
    "NonCompositionalError",
    "Nonterminal",
    "NonterminalHyperedge",
    "RevisionError",
    "RevisionPair",
    "RuleError",
    "RuleInventory",
    "SemEdge",
    "SemGraph",
    "SemNode",
    "SmatchResult",
    "SyncRule",
    "Terminal",
    "TreeSyntaxError",
    "apply_revision",
    "canonicalize",
    "cfg_signature",
    "compose",
    "extract",
    "graph_from_json",
    "graph_to_json",
    "isomorphic",
    "merge_extracted",
    "oracle_score",
    "parse_tree",
    "replace_hyperedge",
    "score",
    "serialize_tree",
    "substitute_rules",
    "to_triples",
]
