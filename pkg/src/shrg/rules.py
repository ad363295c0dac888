"""Synchronized rules: a CFG production paired with a hypergraph fragment.

The i-th nonterminal of the syntactic right-hand side corresponds to the
i-th nonterminal hyperedge of the fragment (same symbol, positional
alignment).  An inventory indexes rules by CFG signature for substitution.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from functools import cached_property

from .fragments import GraphFragment, fragment_from_json, fragment_to_json
from .graphs import natural_key


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Nonterminal:
    name: str


@dataclass(frozen=True)
class Terminal:
    token: str


Symbol = Nonterminal | Terminal


def is_punct_token(token: str) -> bool:
    return bool(token) and all(unicodedata.category(ch).startswith("P") for ch in token)


@dataclass(frozen=True)
class SyncRule:
    id: str
    lhs: str
    syn_rhs: tuple[Symbol, ...]
    sem: GraphFragment
    count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "syn_rhs", tuple(self.syn_rhs))
        if not self.lhs:
            raise RuleError(f"rule {self.id!r}: empty left-hand side")
        if not self.syn_rhs:
            raise RuleError(f"rule {self.id!r}: right-hand side must have >= 1 symbol")
        if self.count < 0:
            raise RuleError(f"rule {self.id!r}: negative count")
        nts = self.nonterminals
        if len(nts) != len(self.sem.nt_edges):
            raise RuleError(
                f"rule {self.id!r}: {len(nts)} nonterminals vs "
                f"{len(self.sem.nt_edges)} hyperedges"
            )
        for i, (nt, he) in enumerate(zip(nts, self.sem.nt_edges)):
            if nt.name != he.label:
                raise RuleError(
                    f"rule {self.id!r}: nonterminal {i} is {nt.name!r} "
                    f"but hyperedge {i} is {he.label!r}"
                )

    @cached_property
    def nonterminals(self) -> tuple[Nonterminal, ...]:
        return tuple(s for s in self.syn_rhs if isinstance(s, Nonterminal))

    @cached_property
    def terminals(self) -> tuple[Terminal, ...]:
        return tuple(s for s in self.syn_rhs if isinstance(s, Terminal))


def cfg_signature(rule: SyncRule, mode: str = "delex") -> str:
    """Syntax-side identity string, e.g. ``VP -> V + NP``.

    In delexicalized mode terminals render as ``{X}`` (punctuation tokens as
    ``punct``); in lexicalized mode they render as ``{token}``, so rules
    sharing a lexicalized signature have identical yields.
    """
    if mode not in ("delex", "lex"):
        raise RuleError(f"unknown signature mode {mode!r}")
    parts = []
    for sym in rule.syn_rhs:
        if isinstance(sym, Nonterminal):
            parts.append(sym.name)
        elif mode == "lex":
            parts.append("{%s}" % sym.token)
        elif is_punct_token(sym.token):
            parts.append("punct")
        else:
            parts.append("{X}")
    return f"{rule.lhs} -> " + " + ".join(parts)


def is_lexical_signature(signature: str) -> bool:
    """Rules made of a lexical node alone, or anything combined with punctuation."""
    rhs = signature.split(" -> ", 1)[1].split(" + ")
    return rhs == ["{X}"] or "punct" in rhs


class RuleInventory:
    """Immutable id-indexed rule collection with a CFG-signature index."""

    def __init__(self, rules, mode: str = "delex"):
        if mode not in ("delex", "lex"):
            raise RuleError(f"unknown inventory mode {mode!r}")
        self.mode = mode
        self.rules: dict[str, SyncRule] = {}
        for rule in rules:
            if rule.id in self.rules:
                raise RuleError(f"duplicate rule id {rule.id!r}")
            self.rules[rule.id] = rule
        index: dict[str, list[str]] = {}
        for rule in self.rules.values():
            index.setdefault(cfg_signature(rule, mode), []).append(rule.id)
        self.by_signature: dict[str, tuple[str, ...]] = {
            sig: tuple(sorted(ids, key=lambda rid: (-self.rules[rid].count, rid)))
            for sig, ids in index.items()
        }

    def __getitem__(self, rule_id: str) -> SyncRule:
        try:
            return self.rules[rule_id]
        except KeyError:
            raise RuleError(f"unknown rule id {rule_id!r}") from None

    def __contains__(self, rule_id: str) -> bool:
        return rule_id in self.rules

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules.values())

    def most_frequent(self, signature: str) -> SyncRule:
        ids = self.by_signature.get(signature)
        if not ids:
            raise RuleError(f"no rules for signature {signature!r}")
        return self.rules[ids[0]]


@dataclass(frozen=True)
class Derivation:
    rule_id: str
    children: tuple["Derivation", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def validate_derivation(d: Derivation, inv: RuleInventory) -> None:
    """Check lhs matching and hyperedge arity bottom-up; raises RuleError."""
    rule = inv[d.rule_id]
    nts = rule.nonterminals
    if len(d.children) != len(nts):
        raise RuleError(
            f"rule {rule.id!r} expects {len(nts)} children, got {len(d.children)}"
        )
    for i, (child, nt) in enumerate(zip(d.children, nts)):
        crule = inv[child.rule_id]
        if crule.lhs != nt.name:
            raise RuleError(
                f"child {i} of rule {rule.id!r} must derive {nt.name!r}, "
                f"got rule {crule.id!r} with lhs {crule.lhs!r}"
            )
        if len(crule.sem.externals) != len(rule.sem.nt_edges[i].attachments):
            raise RuleError(
                f"child rule {crule.id!r} has {len(crule.sem.externals)} externals "
                f"but hyperedge {i} of {rule.id!r} has arity "
                f"{len(rule.sem.nt_edges[i].attachments)}"
            )
        validate_derivation(child, inv)


def derivation_yield(d: Derivation, inv: RuleInventory) -> list[str]:
    rule = inv[d.rule_id]
    out = []
    child_iter = iter(d.children)
    for sym in rule.syn_rhs:
        if isinstance(sym, Terminal):
            out.append(sym.token)
        else:
            out.extend(derivation_yield(next(child_iter), inv))
    return out


# --- JSON wire formats ---


def rule_to_json(rule: SyncRule) -> dict:
    return {
        "id": rule.id,
        "lhs": rule.lhs,
        "syn_rhs": [
            {"nt": s.name} if isinstance(s, Nonterminal) else {"t": s.token}
            for s in rule.syn_rhs
        ],
        "sem": fragment_to_json(rule.sem),
        "count": rule.count,
    }


def rule_from_json(obj: dict) -> SyncRule:
    syn_rhs = []
    for sym in obj["syn_rhs"]:
        if "nt" in sym:
            syn_rhs.append(Nonterminal(sym["nt"]))
        elif "t" in sym:
            syn_rhs.append(Terminal(sym["t"]))
        else:
            raise RuleError(f"bad rhs symbol {sym!r} in rule {obj.get('id')!r}")
    return SyncRule(
        obj["id"], obj["lhs"], tuple(syn_rhs), fragment_from_json(obj["sem"]),
        obj.get("count", 0),
    )


def inventory_to_json(inv: RuleInventory) -> dict:
    rules = sorted(inv.rules.values(), key=lambda r: natural_key(r.id))
    return {"mode": inv.mode, "rules": [rule_to_json(r) for r in rules]}


def inventory_from_json(obj: dict) -> RuleInventory:
    return RuleInventory(
        (rule_from_json(r) for r in obj["rules"]), obj.get("mode", "delex")
    )


def derivation_to_json(d: Derivation) -> dict:
    return {"rule": d.rule_id, "children": [derivation_to_json(c) for c in d.children]}


def derivation_from_json(obj: dict) -> Derivation:
    return Derivation(obj["rule"], tuple(derivation_from_json(c) for c in obj.get("children", ())))


def load_inventory(path) -> RuleInventory:
    with open(path, encoding="utf-8") as f:
        return inventory_from_json(json.load(f))


def save_inventory(inv: RuleInventory, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(inventory_to_json(inv), f, ensure_ascii=False, indent=1)
        f.write("\n")
