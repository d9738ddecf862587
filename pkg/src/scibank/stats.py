"""Descriptive statistics over survey populations and term corpora.

All percentages are rounded half-up to one decimal (the rule that
reproduces the published reference tables cell for cell). The audit
helper recomputes percent columns of already-published tables and flags
cells that no longer agree; it reports, it never corrects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, NamedTuple

from .errors import EmptyPopulationError


def half_up_percent(part: int, whole: int) -> float:
    """100*part/whole rounded half-up to one decimal; exact for integer inputs."""
    if whole == 0:
        raise EmptyPopulationError("percentage of an empty total")
    ratio = Decimal(100 * part) / Decimal(whole)
    return float(ratio.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


class FrequencyRow(NamedTuple):
    label: str
    count: int
    percent: float


@dataclass(frozen=True)
class FrequencyTable:
    rows: list[FrequencyRow]
    total: int

    def percent_of(self, label: str) -> float:
        for row in self.rows:
            if row.label == label:
                return row.percent
        raise KeyError(label)

    def count_of(self, label: str) -> int:
        for row in self.rows:
            if row.label == label:
                return row.count
        raise KeyError(label)


def frequency_table(counts: Mapping[str, int]) -> FrequencyTable:
    """Build a frequency table, rows sorted by count descending then label."""
    for label, count in counts.items():
        if count < 0:
            raise ValueError(f"negative count for {label!r}")
    total = sum(counts.values())
    rows = [
        FrequencyRow(label, count, half_up_percent(count, total) if total else 0.0)
        for label, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    return FrequencyTable(rows=rows, total=total)


def response_rate(respondents: int, population: int) -> float:
    """Response percentage, half-up to one decimal."""
    if population == 0:
        raise EmptyPopulationError("response rate over an empty population")
    if not 0 <= respondents <= population:
        raise ValueError(f"respondents {respondents} outside 0..{population}")
    return half_up_percent(respondents, population)


class RepeatStats(NamedTuple):
    unique: int
    repeated: int
    repeated_percent: float


def repeat_stats(multiplicity: Mapping[str, int]) -> RepeatStats:
    """How many distinct terms occur more than once, and their share."""
    unique = len(multiplicity)
    if unique == 0:
        return RepeatStats(0, 0, 0.0)
    repeated = sum(1 for count in multiplicity.values() if count > 1)
    return RepeatStats(unique, repeated, half_up_percent(repeated, unique))


@dataclass(frozen=True)
class DistributionSummary:
    """Range, mean, and adjusted sample skewness of per-respondent counts.

    sample_skewness is None when fewer than three observations make the
    adjusted estimator undefined; a constant sample has skewness 0.
    """

    min: int
    max: int
    mean: float
    sample_skewness: float | None


def distribution_summary(per_respondent_counts: list[int]) -> DistributionSummary:
    if not per_respondent_counts:
        raise ValueError("distribution summary of an empty sample")
    n = len(per_respondent_counts)
    mean = sum(per_respondent_counts) / n
    lo, hi = min(per_respondent_counts), max(per_respondent_counts)
    if n < 3:
        return DistributionSummary(lo, hi, mean, None)
    # Adjusted Fisher-Pearson g1: (n/((n-1)(n-2))) * sum(((x-mean)/s)^3),
    # s the n-1 sample standard deviation.
    variance = sum((x - mean) ** 2 for x in per_respondent_counts) / (n - 1)
    if variance == 0.0:
        return DistributionSummary(lo, hi, mean, 0.0)
    s = math.sqrt(variance)
    cubed = sum(((x - mean) / s) ** 3 for x in per_respondent_counts)
    g1 = n / ((n - 1) * (n - 2)) * cubed
    return DistributionSummary(lo, hi, mean, g1)


class AuditFinding(NamedTuple):
    table: str
    label: str
    count: int
    published: float
    recomputed: float

    def render(self) -> str:
        return (
            f"AUDIT {self.table} {self.label}: "
            f"published={self.published} recomputed={self.recomputed}"
        )


def audit_table(
    published_rows: Iterable[tuple[str, int, float]],
    total: int | None = None,
    table: str = "table",
) -> list[AuditFinding]:
    """Recompute percents of a published (label, count, percent) table.

    ``total`` defaults to the sum of the counts. A finding is emitted
    whenever the recomputed one-decimal percent differs from the
    published one by more than 0.05.
    """
    rows = list(published_rows)
    if total is None:
        total = sum(count for _, count, _ in rows)
    findings = []
    for label, count, published in rows:
        recomputed = half_up_percent(count, total) if total else 0.0
        if abs(recomputed - published) > 0.05:
            findings.append(AuditFinding(table, label, count, published, recomputed))
    return findings


def render_frequency_table(
    ft: FrequencyTable, label_header: str = "Label", title: str | None = None
) -> str:
    """Aligned plain-text rendering with a total line."""
    width = max([len(label_header), 5] + [len(row.label) for row in ft.rows])
    lines = []
    if title:
        lines.append(title)
    lines.append(f"{label_header:<{width}}  {'Count':>7}  {'Percent':>7}")
    for row in ft.rows:
        lines.append(f"{row.label:<{width}}  {row.count:>7}  {row.percent:>7.1f}")
    lines.append(f"{'Total':<{width}}  {ft.total:>7}")
    return "\n".join(lines)


def frequency_table_csv(ft: FrequencyTable, label_header: str = "label") -> str:
    lines = [f"{label_header},count,percent"]
    for row in ft.rows:
        label = f'"{row.label}"' if "," in row.label else row.label
        lines.append(f"{label},{row.count},{row.percent:.1f}")
    lines.append(f"total,{ft.total},")
    return "\n".join(lines) + "\n"
