"""Bracketed constituency trees.

Text format: ``(S (NP (N I)) (VP (V sleep)))`` -- UTF-8, single spaces
between constituents, bare tokens as leaves.  Nonterminal labels may contain
slash categories such as ``VP/N`` or ``S/PP``.
"""

from __future__ import annotations

from dataclasses import dataclass


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Leaf:
    token: str
    span: int  # token index, left to right


@dataclass(frozen=True)
class Internal:
    label: str
    children: tuple  # of Internal | Leaf

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise TreeSyntaxError(f"empty constituent {self.label!r}", -1)


SynTree = Internal | Leaf  # parse_tree always yields an Internal root


def leaves(t) -> list[Leaf]:
    if isinstance(t, Leaf):
        return [t]
    out = []
    for c in t.children:
        out.extend(leaves(c))
    return out


def yield_tokens(t) -> list[str]:
    return [leaf.token for leaf in leaves(t)]


def renumber_leaves(t, _counter=None):
    """Return a copy with leaf spans assigned 0,1,2,... left to right."""
    if _counter is None:
        _counter = [0]
    if isinstance(t, Leaf):
        leaf = Leaf(t.token, _counter[0])
        _counter[0] += 1
        return leaf
    return Internal(t.label, tuple(renumber_leaves(c, _counter) for c in t.children))


def parse_tree(text: str) -> Internal:
    """Parse a bracketed tree; errors carry the byte offset of the fault."""
    i = 0
    n = len(text)

    def skip_ws():
        nonlocal i
        while i < n and text[i].isspace():
            i += 1

    def parse_node():
        nonlocal i
        skip_ws()
        if i >= n or text[i] != "(":
            raise TreeSyntaxError("expected '('", i)
        open_at = i
        i += 1
        skip_ws()
        start = i
        while i < n and not text[i].isspace() and text[i] not in "()":
            i += 1
        label = text[start:i]
        if not label:
            raise TreeSyntaxError("missing constituent label", start)
        children = []
        while True:
            skip_ws()
            if i >= n:
                raise TreeSyntaxError("unbalanced bracket", open_at)
            if text[i] == ")":
                i += 1
                break
            if text[i] == "(":
                children.append(parse_node())
            else:
                start = i
                while i < n and not text[i].isspace() and text[i] not in "()":
                    i += 1
                children.append(Leaf(text[start:i], -1))
        if not children:
            raise TreeSyntaxError(f"empty constituent {label!r}", open_at)
        return Internal(label, tuple(children))

    tree = parse_node()
    skip_ws()
    if i != n:
        raise TreeSyntaxError("trailing input after tree", i)
    return renumber_leaves(tree)


def serialize_tree(t) -> str:
    if isinstance(t, Leaf):
        return t.token
    return "({} {})".format(t.label, " ".join(serialize_tree(c) for c in t.children))


def token_char_spans(tokens: list[str]) -> list[tuple[int, int]]:
    """Character spans of each token in ``" ".join(tokens)``."""
    spans = []
    pos = 0
    for tok in tokens:
        spans.append((pos, pos + len(tok)))
        pos += len(tok) + 1
    return spans
