"""Sembank corpus: sentence records with trees, graphs, derivations and
annotation labels, stored as JSONL, plus the corpus-level reports."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field

from .graphs import GraphError, SemGraph, graph_from_json, graph_to_json
from .rules import Derivation, derivation_from_json, derivation_to_json
from .stats import percent_agreement
from .trees import Internal, TreeSyntaxError, parse_tree, serialize_tree, yield_tokens

LABELS = ("accept", "reject", "abandon")
PROVENANCES = ("accepted", "modified", "composed", "unlabeled")
SOURCES = ("esfl", "english")


class CorpusError(ValueError):
    pass


def tokenize(sentence: str) -> list[str]:
    """Fallback tokenizer: whitespace split plus edge punctuation splitting.

    Gold token lists in corpus files are authoritative; this is only used
    when a record carries no tokens.
    """
    out: list[str] = []
    for chunk in sentence.split():
        prefix = []
        while chunk and unicodedata.category(chunk[0]).startswith("P"):
            prefix.append(chunk[0])
            chunk = chunk[1:]
        suffix = []
        while chunk and unicodedata.category(chunk[-1]).startswith("P"):
            suffix.append(chunk[-1])
            chunk = chunk[:-1]
        out.extend(prefix)
        if chunk:
            out.append(chunk)
        out.extend(reversed(suffix))
    return out


@dataclass(frozen=True)
class SentenceRecord:
    id: str
    sentence: str
    tokens: tuple[str, ...]
    source: str
    tree: Internal | None = None
    graph: SemGraph | None = None
    derivation: Derivation | None = None
    labels: dict[str, str] = field(default_factory=dict)
    provenance: str = "unlabeled"

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "labels", dict(self.labels))
        if not self.id:
            raise CorpusError("record id must be non-empty")
        if self.source not in SOURCES:
            raise CorpusError(f"record {self.id!r}: unknown source {self.source!r}")
        if self.provenance not in PROVENANCES:
            raise CorpusError(f"record {self.id!r}: unknown provenance {self.provenance!r}")
        for annotator, label in self.labels.items():
            if label not in LABELS:
                raise CorpusError(
                    f"record {self.id!r}: bad label {label!r} from {annotator!r}"
                )
        joined = "".join(self.tokens).replace(" ", "")
        flat = "".join(self.sentence.split())
        if joined != flat:
            raise CorpusError(f"record {self.id!r}: tokens do not normalize the sentence")
        if self.tree is not None and yield_tokens(self.tree) != list(self.tokens):
            raise CorpusError(f"record {self.id!r}: tree yield differs from tokens")
        if self.provenance == "composed" and self.derivation is None:
            raise CorpusError(f"record {self.id!r}: composed record without derivation")


def record_to_json(rec: SentenceRecord) -> dict:
    return {
        "id": rec.id,
        "sentence": rec.sentence,
        "tokens": list(rec.tokens),
        "source": rec.source,
        "tree": serialize_tree(rec.tree) if rec.tree is not None else None,
        "graph": graph_to_json(rec.graph) if rec.graph is not None else None,
        "derivation": derivation_to_json(rec.derivation) if rec.derivation is not None else None,
        "labels": {k: rec.labels[k] for k in sorted(rec.labels)},
        "provenance": rec.provenance,
    }


def record_from_json(obj: dict) -> SentenceRecord:
    try:
        return SentenceRecord(
            id=obj["id"],
            sentence=obj["sentence"],
            tokens=tuple(obj["tokens"]),
            source=obj["source"],
            tree=parse_tree(obj["tree"]) if obj.get("tree") else None,
            graph=graph_from_json(obj["graph"]) if obj.get("graph") else None,
            derivation=derivation_from_json(obj["derivation"]) if obj.get("derivation") else None,
            labels=obj.get("labels") or {},
            provenance=obj.get("provenance", "unlabeled"),
        )
    except (KeyError, TypeError, TreeSyntaxError, GraphError) as exc:
        raise CorpusError(f"malformed record {obj.get('id', '?')!r}: {exc}") from exc


def dumps_record(rec: SentenceRecord) -> str:
    return json.dumps(record_to_json(rec), ensure_ascii=False, separators=(", ", ": "))


def load_corpus(path, lenient: bool = False) -> tuple[list[SentenceRecord], list[str]]:
    """Read a JSONL corpus; returns (records, per-line problem reports).

    Invalid lines are fatal unless ``lenient``, in which case they are
    skipped and reported with their line numbers.
    """
    records: list[SentenceRecord] = []
    problems: list[str] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                records.append(record_from_json(json.loads(line)))
            except (json.JSONDecodeError, CorpusError) as exc:
                message = f"line {lineno}: {exc}"
                if not lenient:
                    raise CorpusError(message) from exc
                problems.append(message)
    return records, problems


def save_corpus(records, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(dumps_record(rec))
            f.write("\n")


# --- reports ---


def _votes(rec: SentenceRecord) -> tuple[int, int]:
    acc = sum(1 for v in rec.labels.values() if v == "accept")
    rej = sum(1 for v in rec.labels.values() if v == "reject")
    return acc, rej


STRATA = {3: "triple", 2: "double", 1: "single"}


@dataclass(frozen=True)
class CorpusStats:
    """Accept/reject counts stratified by how many annotators labeled each
    item; ties and abandon-only items are excluded as inconsistent/invalid."""

    groups: dict  # source -> stratum -> {"acc": int, "rej": int, "all": int, ...}
    excluded: dict  # source -> count of inconsistent or invalid records

    def to_json(self) -> dict:
        return {"groups": self.groups, "excluded": self.excluded}


def corpus_report(records) -> CorpusStats:
    groups: dict[str, dict] = {}
    excluded: dict[str, int] = {}
    for rec in records:
        if not rec.labels:
            continue
        acc, rej = _votes(rec)
        stratum = STRATA.get(len(rec.labels))
        if stratum is None or acc == rej:
            # tie (inconsistent) or all-abandon (invalid) or over-annotated
            excluded[rec.source] = excluded.get(rec.source, 0) + 1
            continue
        bucket = groups.setdefault(rec.source, {})
        row = bucket.setdefault(stratum, {"acc": 0, "rej": 0})
        row["acc" if acc > rej else "rej"] += 1
    out: dict[str, dict] = {}
    for source, buckets in sorted(groups.items()):
        rows = {}
        total_acc = total_rej = 0
        for stratum in ("triple", "double", "single"):
            if stratum not in buckets:
                continue
            acc, rej = buckets[stratum]["acc"], buckets[stratum]["rej"]
            total_acc += acc
            total_rej += rej
            rows[stratum] = _stratum_row(acc, rej)
        rows["overall"] = _stratum_row(total_acc, total_rej)
        out[source] = rows
    return CorpusStats(out, excluded)


def _stratum_row(acc: int, rej: int) -> dict:
    all_ = acc + rej
    return {
        "acc": acc,
        "rej": rej,
        "all": all_,
        "acc_pct": round(100.0 * acc / all_, 2) if all_ else 0.0,
        "rej_pct": round(100.0 * rej / all_, 2) if all_ else 0.0,
    }


def provenance_report(records) -> dict:
    """Counts per build manner (accepted / modified / composed) and overall."""
    out = {"accepted": 0, "modified": 0, "composed": 0, "unlabeled": 0}
    for rec in records:
        out[rec.provenance] += 1
    out["overall"] = len(records)
    return out


def iaa_report(records, groups) -> dict:
    """Percent agreement per annotator group per source.

    A group's comparison set is the records labeled by all its members;
    a group with no co-labeled items in a source is reported as null.
    """
    sources = sorted({rec.source for rec in records})
    table: dict[str, dict] = {}
    for group in groups:
        group = tuple(group)
        name = "-".join(group)
        row = {}
        for source in sources:
            rows = [
                [rec.labels[a] for a in group]
                for rec in records
                if rec.source == source and all(a in rec.labels for a in group)
            ]
            row[source] = percent_agreement(rows) if rows else None
        table[name] = row
    return table


def annotators(records) -> list[str]:
    seen = set()
    for rec in records:
        seen.update(rec.labels)
    return sorted(seen)
