"""Statistical primitives: agreement, contingency tests, location tests,
ratio confidence intervals and descriptive summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .special import chi2_sf, normal_ppf, normal_sf, student_t_sf


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class ContingencyTable:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    counts: tuple[tuple[float, ...], ...]  # row-major, non-negative

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        object.__setattr__(self, "counts", tuple(tuple(r) for r in self.counts))
        if len(self.counts) != len(self.rows):
            raise StatsError("row label / count mismatch")
        if any(len(r) != len(self.cols) for r in self.counts):
            raise StatsError("table is not rectangular")
        if len(self.cols) < 2:
            raise StatsError("need at least 2 columns")
        if any(c < 0 for row in self.counts for c in row):
            raise StatsError("negative count")
        if any(sum(row) <= 0 for row in self.counts):
            raise StatsError("zero row sum")

    @property
    def row_sums(self):
        return tuple(sum(r) for r in self.counts)

    @property
    def col_sums(self):
        return tuple(sum(col) for col in zip(*self.counts))

    @property
    def total(self):
        return sum(self.row_sums)

    def expected(self, i: int, j: int) -> float:
        return self.row_sums[i] * self.col_sums[j] / self.total


@dataclass(frozen=True)
class Describe:
    mean: float
    median: float
    sd: float
    max: float
    min: float
    sd_defined: bool = True


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df: float | None
    kind: str  # chi2 | welch_t | student_t | paired_t | z

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "statistic": _sig9(self.statistic),
            "df": _sig9(self.df) if self.df is not None else None,
            "p_value": _sig9(self.p_value),
        }


def _sig9(x: float) -> float:
    if math.isinf(x) or math.isnan(x):
        return x
    return float(f"{x:.9g}")


def percent_agreement(rows) -> float:
    """Percent of items on which all listed annotators agree, to 2 decimals.

    ``rows`` holds one label sequence per item (one label per annotator).
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        raise StatsError("empty item set")
    agreed = sum(1 for r in rows if len(set(r)) == 1)
    return round(100.0 * agreed / len(rows), 2)


def expected_frequency_filter(
    t: ContingencyTable, min_expected: float = 4.0
) -> ContingencyTable:
    """Keep columns whose every cell's expected count exceeds the minimum."""
    keep = [
        j
        for j in range(len(t.cols))
        if all(t.expected(i, j) > min_expected for i in range(len(t.rows)))
    ]
    if len(keep) < 2:
        raise StatsError(
            f"expected-frequency filter left {len(keep)} column(s); need at least 2"
        )
    return ContingencyTable(
        t.rows,
        tuple(t.cols[j] for j in keep),
        tuple(tuple(row[j] for j in keep) for row in t.counts),
    )


def chi_square_independence(t: ContingencyTable) -> TestResult:
    stat = 0.0
    for i in range(len(t.rows)):
        for j in range(len(t.cols)):
            e = t.expected(i, j)
            if e <= 0:
                raise StatsError(f"zero expected count in cell ({i}, {j})")
            stat += (t.counts[i][j] - e) ** 2 / e
    df = (len(t.rows) - 1) * (len(t.cols) - 1)
    return TestResult(stat, chi2_sf(stat, df), float(df), "chi2")


def _mean_var(sample):
    xs = [float(x) for x in sample]
    n = len(xs)
    if n < 2:
        raise StatsError("need at least 2 observations per sample")
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    return n, mean, var


def _two_sided_t(stat: float, df: float) -> float:
    return min(1.0, 2.0 * student_t_sf(abs(stat), df))


def _degenerate(ma: float, mb: float, df: float | None, kind: str) -> TestResult:
    # zero-variance samples: statistic 0 when means agree, +/-inf otherwise
    if ma == mb:
        return TestResult(0.0, 1.0, df, kind)
    return TestResult(math.copysign(math.inf, ma - mb), 0.0, df, kind)


def t_test(a, b, variant: str = "welch") -> TestResult:
    if variant == "paired":
        if len(a) != len(b):
            raise StatsError("paired test requires equal-length samples")
        diffs = [float(x) - float(y) for x, y in zip(a, b)]
        n, mean, var = _mean_var(diffs)
        df = n - 1
        if var == 0:
            return _degenerate(mean, 0.0, float(df), "paired_t")
        stat = mean / math.sqrt(var / n)
        return TestResult(stat, _two_sided_t(stat, df), float(df), "paired_t")

    na, ma, va = _mean_var(a)
    nb, mb, vb = _mean_var(b)
    if variant == "welch":
        if va == 0 and vb == 0:
            return _degenerate(ma, mb, None, "welch_t")
        se2 = va / na + vb / nb
        stat = (ma - mb) / math.sqrt(se2)
        df = se2**2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
        return TestResult(stat, _two_sided_t(stat, df), df, "welch_t")
    if variant == "student":
        df = na + nb - 2
        pooled = ((na - 1) * va + (nb - 1) * vb) / df
        if pooled == 0:
            return _degenerate(ma, mb, float(df), "student_t")
        stat = (ma - mb) / math.sqrt(pooled * (1.0 / na + 1.0 / nb))
        return TestResult(stat, _two_sided_t(stat, df), float(df), "student_t")
    raise StatsError(f"unknown t-test variant {variant!r}")


def z_test(a, b) -> TestResult:
    na, ma, va = _mean_var(a)
    nb, mb, vb = _mean_var(b)
    if va == 0 and vb == 0:
        return _degenerate(ma, mb, None, "z")
    stat = (ma - mb) / math.sqrt(va / na + vb / nb)
    p = min(1.0, 2.0 * normal_sf(abs(stat)))
    return TestResult(stat, p, None, "z")


def describe(sample) -> Describe:
    xs = sorted(float(x) for x in sample)
    if not xs:
        raise StatsError("empty sample")
    n = len(xs)
    mean = sum(xs) / n
    median = xs[n // 2] if n % 2 else 0.5 * (xs[n // 2 - 1] + xs[n // 2])
    if n < 2:
        return Describe(mean, median, 0.0, xs[-1], xs[0], sd_defined=False)
    sd = math.sqrt(sum((x - mean) ** 2 for x in xs) / (n - 1))
    return Describe(mean, median, sd, xs[-1], xs[0])


def ratio_ci(a: float, b: float, alpha: float = 0.05) -> tuple[float, float, float]:
    """Count ratio a/b with a log-normal (Katz) confidence interval."""
    if a <= 0 or b <= 0:
        raise StatsError("ratio_ci requires positive counts")
    if not 0.0 < alpha < 1.0:
        raise StatsError("alpha must be in (0, 1)")
    ratio = a / b
    z = normal_ppf(1.0 - alpha / 2.0)
    half = z * math.sqrt(1.0 / a + 1.0 / b)
    return ratio, ratio * math.exp(-half), ratio * math.exp(half)
