"""Linguistic-niche study pipeline: rule-frequency profiling, the syntactic
complexity test, and the semantic-transparency substitution experiment."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .compose import ComposeError, compose
from .graphs import GraphError, graph_from_json, graph_to_json
from .rules import (
    RuleError,
    RuleInventory,
    cfg_signature,
    derivation_from_json,
    derivation_to_json,
    inventory_from_json,
    inventory_to_json,
    is_lexical_signature,
)
from .smatch import SmatchResult, score
from .stats import (
    ContingencyTable,
    TestResult,
    chi_square_independence,
    describe,
    expected_frequency_filter,
    ratio_ci,
    t_test,
    z_test,
)
from .substitute import substitute_rules

GROUPS = ("esfl", "english")


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class SignatureRow:
    signature: str
    lexical: bool
    count_esfl: int
    count_english: int
    ratio: float | None = None
    ci_lo: float | None = None
    ci_hi: float | None = None


@dataclass(frozen=True)
class FrequencyProfile:
    rows: tuple[SignatureRow, ...]
    skipped: tuple[str, ...]  # record ids without derivations

    def combined(self, signature: str) -> int:
        for row in self.rows:
            if row.signature == signature:
                return row.count_esfl + row.count_english
        return 0


def build_frequency_profile(records, inv: RuleInventory) -> FrequencyProfile:
    """Count rule occurrences per group under delexicalized signatures,
    ordered by descending combined count then signature."""
    counts: dict[str, dict[str, int]] = {}
    skipped = []
    for rec in records:
        if rec.derivation is None:
            skipped.append(rec.id)
            continue
        for node in rec.derivation.walk():
            sig = cfg_signature(inv[node.rule_id], "delex")
            bucket = counts.setdefault(sig, {g: 0 for g in GROUPS})
            bucket[rec.source] += 1
    rows = []
    for sig in sorted(
        counts, key=lambda s: (-(counts[s]["esfl"] + counts[s]["english"]), s)
    ):
        a, b = counts[sig]["esfl"], counts[sig]["english"]
        if a > 0 and b > 0:
            ratio, lo, hi = ratio_ci(a, b)
        else:
            ratio = lo = hi = None
        rows.append(SignatureRow(sig, is_lexical_signature(sig), a, b, ratio, lo, hi))
    return FrequencyProfile(tuple(rows), tuple(skipped))


@dataclass(frozen=True)
class ComplexityResult:
    test: TestResult
    retained: tuple[str, ...]  # signatures surviving the expected-frequency filter
    non_lexical: tuple[str, ...]  # after the lexical exclusion; the tested columns

    def to_json(self) -> dict:
        return {
            "test": self.test.to_json(),
            "retained": list(self.retained),
            "non_lexical_retained": list(self.non_lexical),
        }


def syntactic_complexity(
    profile: FrequencyProfile, min_expected: float = 4.0
) -> ComplexityResult:
    if not profile.rows:
        raise PipelineError("empty frequency profile")
    cols = [r.signature for r in profile.rows]
    table = ContingencyTable(
        GROUPS,
        cols,
        (
            tuple(r.count_esfl for r in profile.rows),
            tuple(r.count_english for r in profile.rows),
        ),
    )
    filtered = expected_frequency_filter(table, min_expected)
    lexical = {r.signature for r in profile.rows if r.lexical}
    keep = [j for j, sig in enumerate(filtered.cols) if sig not in lexical]
    if len(keep) < 2:
        raise PipelineError("fewer than 2 non-lexical signatures survive the filter")
    final = ContingencyTable(
        filtered.rows,
        tuple(filtered.cols[j] for j in keep),
        tuple(tuple(row[j] for j in keep) for row in filtered.counts),
    )
    return ComplexityResult(
        chi_square_independence(final), tuple(filtered.cols), tuple(final.cols)
    )


# --- transparency experiment -------------------------------------------------

_WORKER_INV: RuleInventory | None = None


def _init_worker(inv_json: str):
    global _WORKER_INV
    _WORKER_INV = inventory_from_json(json.loads(inv_json))


def _score_record(task: tuple) -> tuple[int, tuple | None, str | None]:
    idx, deriv_json, gold_json, restarts, seed, include_top = task
    inv = _WORKER_INV
    derivation = derivation_from_json(json.loads(deriv_json))
    gold = graph_from_json(json.loads(gold_json))
    try:
        substituted = substitute_rules(derivation, inv)
        _, regenerated = compose(substituted, inv)
        result = score(regenerated, gold, restarts=restarts, seed=seed, include_top=include_top)
    except (RuleError, ComposeError, GraphError) as exc:
        return idx, None, str(exc)
    return idx, (result.matched, result.precision, result.recall, result.f1), None


@dataclass(frozen=True)
class SentenceScore:
    id: str
    source: str
    result: SmatchResult | None
    error: str | None = None


@dataclass(frozen=True)
class TransparencyOutcome:
    scores: tuple[SentenceScore, ...]
    describes: dict  # group -> Describe
    tests: dict  # kind -> TestResult | None
    histogram: dict  # group -> list of (lo, hi, count)
    excluded: dict  # group -> count of failed/missing records

    def group_f1(self, group: str) -> list[float]:
        return [
            s.result.f1 for s in self.scores if s.source == group and s.result is not None
        ]


def _histogram(values, bins: int = 10) -> list[tuple[float, float, int]]:
    """Equal-width bins over [min, 1.0]; the top bin is closed at 1.0."""
    if not values:
        return []
    lo = min(values)
    if lo >= 1.0:
        return [(1.0, 1.0, len(values))]
    width = (1.0 - lo) / bins
    edges = [lo + i * width for i in range(bins)] + [1.0]
    out = []
    for i in range(bins):
        a, b = edges[i], edges[i + 1]
        n = sum(1 for v in values if (a <= v < b) or (i == bins - 1 and v == 1.0))
        out.append((a, b, n))
    return out


def transparency_experiment(
    records,
    inv: RuleInventory,
    restarts: int = 16,
    seed: int = 0,
    jobs: int = 1,
    include_top: bool = True,
) -> TransparencyOutcome:
    """Substitute rules, recompose, and S-match each record against gold.

    Substitution uses lexicalized signature buckets so the yield is
    preserved; records failing recomposition are excluded from aggregates
    and counted.  Bit-identical for fixed (restarts, seed) at any job count.
    """
    if inv.mode != "lex":
        inv = RuleInventory(list(inv), "lex")
    records = list(records)
    tasks = []
    prepared: list[SentenceScore | None] = []
    for idx, rec in enumerate(records):
        if rec.derivation is None or rec.graph is None:
            prepared.append(SentenceScore(rec.id, rec.source, None, "missing derivation or graph"))
            continue
        prepared.append(None)
        tasks.append(
            (
                idx,
                json.dumps(derivation_to_json(rec.derivation)),
                json.dumps(graph_to_json(rec.graph)),
                restarts,
                seed,
                include_top,
            )
        )

    inv_json = json.dumps(inventory_to_json(inv))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(inv_json,)
        ) as pool:
            results = list(pool.map(_score_record, tasks, chunksize=8))
    else:
        _init_worker(inv_json)
        results = [_score_record(t) for t in tasks]

    for idx, payload, error in results:
        rec = records[idx]
        if payload is None:
            prepared[idx] = SentenceScore(rec.id, rec.source, None, error)
        else:
            matched, p, r, f1 = payload
            prepared[idx] = SentenceScore(rec.id, rec.source, SmatchResult(matched, p, r, f1))

    scores = tuple(prepared)
    describes = {}
    histogram = {}
    excluded = {}
    per_group: dict[str, list[float]] = {}
    for group in GROUPS:
        f1s = [s.result.f1 for s in scores if s.source == group and s.result is not None]
        per_group[group] = f1s
        excluded[group] = sum(
            1 for s in scores if s.source == group and s.result is None
        )
        if f1s:
            describes[group] = describe(f1s)
            histogram[group] = _histogram(f1s)

    tests: dict[str, TestResult | None] = {}
    a, b = per_group.get("esfl", []), per_group.get("english", [])
    if len(a) >= 2 and len(b) >= 2:
        tests["welch_t"] = t_test(a, b, "welch")
        tests["student_t"] = t_test(a, b, "student")
        tests["paired_t"] = t_test(a, b, "paired") if len(a) == len(b) else None
        tests["z"] = z_test(a, b)
    return TransparencyOutcome(scores, describes, tests, histogram, excluded)
