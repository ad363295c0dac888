"""Rule substitution and manual revision over derivations.

Substitution swaps each rule for the most frequent rule sharing its CFG
signature (the transparency experiment).  Revision swaps specific rules for
manually corrected counterparts; when the corrected rules change hyperedge
arities the caller supplies the rewritten derivation, mirroring how revised
analyses come with restructured trees.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fragments import pass_through_fragment
from .rules import (
    Derivation,
    RuleError,
    RuleInventory,
    SyncRule,
    cfg_signature,
    derivation_yield,
    validate_derivation,
)


class RevisionError(RuleError):
    pass


def substitute_rules(d: Derivation, inv: RuleInventory, mode: str | None = None) -> Derivation:
    """Replace every rule with its signature bucket's most frequent rule.

    Ties go to the lowest rule id; a rule that is already the most frequent
    of its bucket stays.  The derivation structure is unchanged, so with
    lexicalized signatures the yield is preserved exactly.
    """
    mode = mode or inv.mode
    if mode != inv.mode:
        # the signature index is built per inventory mode
        inv = RuleInventory(list(inv), mode)

    def swap(node: Derivation) -> Derivation:
        rule = inv[node.rule_id]
        best = inv.most_frequent(cfg_signature(rule, mode))
        return Derivation(best.id, tuple(swap(c) for c in node.children))

    return swap(d)


@dataclass(frozen=True)
class RevisionPair:
    original: str  # rule id
    modified: SyncRule | None  # None deletes the semantic contribution


def revised_inventory(inv: RuleInventory, pairs) -> tuple[RuleInventory, dict[str, str]]:
    """Inventory extended with the modified rules; returns the id mapping."""
    mapping: dict[str, str] = {}
    extra: dict[str, SyncRule] = {}
    for pair in pairs:
        original = inv[pair.original]
        if pair.modified is None:
            if original.nonterminals or original.sem.nt_edges:
                raise RevisionError(
                    f"cannot null out rule {original.id!r}: it has nonterminals"
                )
            empty = pass_through_fragment(len(original.sem.externals))
            modified = SyncRule(
                f"{original.id}~null", original.lhs, original.syn_rhs, empty, 0
            )
        else:
            modified = pair.modified
        mapping[pair.original] = modified.id
        if modified.id not in inv:
            extra[modified.id] = modified
    return RuleInventory(list(inv) + list(extra.values()), inv.mode), mapping


def apply_revision(
    d: Derivation,
    inv: RuleInventory,
    pairs,
    rewritten: Derivation | None = None,
) -> tuple[Derivation, RuleInventory]:
    """Apply original-to-modified rule pairs to a derivation.

    If the in-place substitution still validates (arities line up), it is
    returned directly; otherwise the supplied ``rewritten`` derivation is
    validated and used, and its absence is a structural-mismatch error.
    """
    pairs = list(pairs)
    full_inv, mapping = revised_inventory(inv, pairs)

    def swap(node: Derivation) -> Derivation:
        return Derivation(
            mapping.get(node.rule_id, node.rule_id),
            tuple(swap(c) for c in node.children),
        )

    sentence = derivation_yield(d, inv)
    candidate = swap(d)
    try:
        validate_derivation(candidate, full_inv)
        if derivation_yield(candidate, full_inv) != sentence:
            raise RuleError("revised rules change the token yield")
        return candidate, full_inv
    except RuleError as exc:
        if rewritten is None:
            raise RevisionError(
                f"revision changes derivation structure and no rewrite was supplied: {exc}"
            ) from exc
    validate_derivation(rewritten, full_inv)
    if derivation_yield(rewritten, full_inv) != sentence:
        raise RevisionError("rewritten derivation does not yield the same sentence")
    return rewritten, full_inv
