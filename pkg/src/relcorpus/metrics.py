"""Corpus-level statistics: distributions, genre tables, discrepancies,
literal-token ratios, and the relation edit distance.

All aggregations are pure folds over sentences; recomputation is
bit-identical. Percentages are rounded half-up to a configurable number of
decimals (3 by default); raw counts are always carried alongside.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence, Union

from .model import (
    AnnotationError,
    Corpus,
    RelationLabel,
    project_source_relations,
    unit_counts,
)

Value = Union[int, float, str, None]

#: Canonical row order of the distribution reports (the table5 outputs).
DISTRIBUTION_ROW_ORDER: tuple[RelationLabel, ...] = (
    RelationLabel.EQUIVALENCE,
    RelationLabel.FIGURATIVE,
    RelationLabel.GENERALIZATION,
    RelationLabel.LEXICAL_SHIFT,
    RelationLabel.LITERAL,
    RelationLabel.MODULATION,
    RelationLabel.MODULATION_TRANSPOSITION,
    RelationLabel.PARTICULARIZATION,
    RelationLabel.TRANSLATION_ERROR,
    RelationLabel.TRANSPOSITION,
    RelationLabel.NO_TYPE,
    RelationLabel.UNALIGNED_EXPLICITATION,
    RelationLabel.UNALIGNED_REDUCTION,
    RelationLabel.UNCERTAIN,
)

TOTAL_LABEL = "total"


def round_half_up(value: float, decimals: int = 3) -> float:
    """Round half away from zero at the given decimal place (2.1375 -> 2.138)."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(str(value)).quantize(q, rounding=ROUND_HALF_UP))


def format_decimal(value: float, decimals: int = 3) -> str:
    q = Decimal(1).scaleb(-decimals)
    return str(Decimal(str(value)).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class StatTable:
    """Labeled rows of counts/percentages with fixed serialization rules."""

    title: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, tuple[Value, ...]], ...]
    decimals: int = 3
    provenance: str = ""

    def format_value(self, value: Value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return str(value)
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            return format_decimal(value, self.decimals)
        return str(value)

    def json_value(self, value: Value):
        if isinstance(value, float):
            return float(format_decimal(value, self.decimals))
        return value

    def row(self, label: str) -> tuple[Value, ...]:
        for row_label, values in self.rows:
            if row_label == label:
                return values
        raise KeyError(label)

    def column_index(self, name: str) -> int:
        return self.columns.index(name)

    def cell(self, row_label: str, column: str) -> Value:
        return self.row(row_label)[self.column_index(column)]


def relation_distribution(corpus: Corpus, decimals: int = 3) -> StatTable:
    """Units per relation with percentages of the corpus total (table5 shape)."""
    counts = unit_counts(corpus)
    total = sum(counts.values())
    rows: list[tuple[str, tuple[Value, ...]]] = []
    for label in DISTRIBUTION_ROW_ORDER:
        count = counts[label]
        pct = (count / total * 100.0) if total else 0.0
        rows.append((label.value, (count, pct)))
    rows.append((TOTAL_LABEL, (total, 100.0 if total else 0.0)))
    return StatTable(
        title=f"relation distribution ({corpus.name})",
        columns=("count", "percentage"),
        rows=tuple(rows),
        decimals=decimals,
        provenance="relation_distribution",
    )


def literal_split_by_genre(corpus: Corpus, decimals: int = 3) -> StatTable:
    """Literal vs non-literal unit counts per genre (table8 shape)."""
    per_genre: dict[str, list[int]] = {}
    for pair in corpus:
        bucket = per_genre.setdefault(pair.genre, [0, 0])
        for unit in pair.units:
            bucket[0 if unit.relation is RelationLabel.LITERAL else 1] += 1
    rows: list[tuple[str, tuple[Value, ...]]] = []
    total_lit = total_non = 0
    for genre in sorted(per_genre):
        lit, non = per_genre[genre]
        total_lit += lit
        total_non += non
        denom = lit + non
        pct = (non / denom * 100.0) if denom else 0.0
        rows.append((genre, (lit, non, pct)))
    denom = total_lit + total_non
    rows.append(
        (TOTAL_LABEL, (total_lit, total_non, (total_non / denom * 100.0) if denom else 0.0))
    )
    return StatTable(
        title=f"literal/non-literal by genre ({corpus.name})",
        columns=("literal", "non_literal", "non_literal_pct"),
        rows=tuple(rows),
        decimals=decimals,
        provenance="literal_split_by_genre",
    )


def discrepancy(
    candidate_pct: float,
    reference_pct: float,
    policy: str = "reference",
    decimals: Optional[int] = None,
) -> float:
    """Signed relative difference of two percentages.

    policy="reference": (c - r) / r * 100
    policy="candidate": (c - r) / c * 100

    With ``decimals`` given the result is rounded half-up; otherwise raw.
    """
    if policy == "reference":
        denom = reference_pct
    elif policy == "candidate":
        denom = candidate_pct
    else:
        raise ValueError(f"policy must be 'reference' or 'candidate', got {policy!r}")
    if denom == 0:
        raise AnnotationError("ZERO_DENOMINATOR", f"{policy} percentage is zero")
    value = (candidate_pct - reference_pct) / denom * 100.0
    return round_half_up(value, decimals) if decimals is not None else value


def discrepancy_table(
    candidate: Corpus, reference: Corpus, policy: str = "reference", decimals: int = 3
) -> StatTable:
    """Per-relation discrepancy of candidate vs reference percentage shares."""
    cand = relation_distribution(candidate, decimals)
    ref = relation_distribution(reference, decimals)
    rows: list[tuple[str, tuple[Value, ...]]] = []
    for label in DISTRIBUTION_ROW_ORDER:
        c_count, c_pct = cand.row(label.value)
        r_count, r_pct = ref.row(label.value)
        if (c_pct == 0 and policy == "candidate") or (r_pct == 0 and policy == "reference"):
            disc: Value = None
        else:
            disc = discrepancy(c_pct, r_pct, policy)
        rows.append((label.value, (c_count, r_count, c_pct, r_pct, disc)))
    c_total = cand.row(TOTAL_LABEL)[0]
    r_total = ref.row(TOTAL_LABEL)[0]
    rows.append((TOTAL_LABEL, (c_total, r_total, 100.0, 100.0, 0.0)))
    return StatTable(
        title=f"discrepancy {candidate.name} vs {reference.name} (denominator={policy})",
        columns=(
            "candidate_count",
            "reference_count",
            "candidate_pct",
            "reference_pct",
            "discrepancy_pct",
        ),
        rows=tuple(rows),
        decimals=decimals,
        provenance="discrepancy_table",
    )


@dataclass(frozen=True)
class SentenceLiteralRatio:
    id: str
    genre: str
    literal_tokens: int
    total_tokens: int

    @property
    def ratio(self) -> float:
        return self.literal_tokens / self.total_tokens if self.total_tokens else 0.0


@dataclass(frozen=True)
class TokenLiteralStats:
    sentences: tuple[SentenceLiteralRatio, ...]
    literal_tokens: int
    total_tokens: int

    @property
    def pooled_percentage(self) -> float:
        """Corpus ratio: total literal tokens over total tokens (not a mean)."""
        return self.literal_tokens / self.total_tokens * 100.0 if self.total_tokens else 0.0

    @property
    def mean_sentence_ratio(self) -> float:
        if not self.sentences:
            return 0.0
        return statistics.fmean(s.ratio for s in self.sentences)


def token_literal_stats(corpus: Corpus) -> TokenLiteralStats:
    """Per-sentence literally-translated-token ratios plus corpus totals."""
    sentences = []
    literal_total = 0
    token_total = 0
    for pair in corpus:
        labels = project_source_relations(pair)
        lit = sum(1 for label in labels if label is RelationLabel.LITERAL)
        sentences.append(SentenceLiteralRatio(pair.id, pair.genre, lit, len(labels)))
        literal_total += lit
        token_total += len(labels)
    return TokenLiteralStats(tuple(sentences), literal_total, token_total)


def relation_edit_distance(
    ref_seq: Sequence[RelationLabel], cand_seq: Sequence[RelationLabel]
) -> int:
    """Number of positions at which two equal-length relation sequences differ.

    This is the substitution-only edit distance over the shared-source
    projection (a per-position comparison).
    """
    if len(ref_seq) != len(cand_seq):
        raise AnnotationError(
            "LENGTH_MISMATCH",
            f"sequences of length {len(ref_seq)} and {len(cand_seq)}; "
            "shared-source projection must agree",
        )
    return sum(1 for a, b in zip(ref_seq, cand_seq) if a != b)


@dataclass(frozen=True)
class DistanceSummary:
    genre: str
    values: tuple[int, ...]
    minimum: int
    q1: float
    median: float
    q3: float
    maximum: int


def _five_numbers(values: Sequence[int]) -> tuple[int, float, float, float, int]:
    ordered = sorted(values)
    if len(ordered) == 1:
        v = ordered[0]
        return v, float(v), float(v), float(v), v
    q1, med, q3 = statistics.quantiles(ordered, n=4, method="inclusive")
    return ordered[0], q1, med, q3, ordered[-1]


def edit_distance_by_genre(
    reference: Corpus, candidate: Corpus
) -> tuple[dict[str, DistanceSummary], list[tuple[str, str, int]]]:
    """Per-sentence relation edit distances grouped by genre (fig11 series).

    Returns (per-genre summaries keyed by genre, flat rows of
    (sentence id, genre, distance) in corpus order).
    """
    if len(reference) != len(candidate):
        raise AnnotationError(
            "LENGTH_MISMATCH",
            f"{len(reference)} reference vs {len(candidate)} candidate sentences",
        )
    per_genre: dict[str, list[int]] = {}
    flat: list[tuple[str, str, int]] = []
    for ref_pair, cand_pair in zip(reference, candidate):
        if ref_pair.genre != cand_pair.genre:
            raise AnnotationError(
                "GENRE_MISMATCH",
                f"sentence {ref_pair.id}: genre {ref_pair.genre!r} vs {cand_pair.genre!r}",
            )
        distance = relation_edit_distance(
            project_source_relations(ref_pair), project_source_relations(cand_pair)
        )
        per_genre.setdefault(ref_pair.genre, []).append(distance)
        flat.append((ref_pair.id, ref_pair.genre, distance))
    summaries = {}
    for genre in sorted(per_genre):
        values = per_genre[genre]
        lo, q1, med, q3, hi = _five_numbers(values)
        summaries[genre] = DistanceSummary(genre, tuple(values), lo, q1, med, q3, hi)
    return summaries, flat


def token_counts(corpus: Corpus) -> StatTable:
    """Source/target token totals per genre (table3 shape for one corpus)."""
    per_genre: dict[str, list[int]] = {}
    for pair in corpus:
        bucket = per_genre.setdefault(pair.genre, [0, 0])
        bucket[0] += len(pair.src_tokens)
        bucket[1] += len(pair.tgt_tokens)
    rows: list[tuple[str, tuple[Value, ...]]] = []
    total_src = total_tgt = 0
    for genre in sorted(per_genre):
        src, tgt = per_genre[genre]
        total_src += src
        total_tgt += tgt
        rows.append((genre, (src, tgt)))
    rows.append((TOTAL_LABEL, (total_src, total_tgt)))
    return StatTable(
        title=f"token counts ({corpus.name})",
        columns=("source_tokens", "target_tokens"),
        rows=tuple(rows),
        decimals=0,
        provenance="token_counts",
    )


def relation_distribution_by_genre(
    corpus: Corpus, decimals: int = 3
) -> tuple[StatTable, list[str]]:
    """Relation percentage per genre; each genre column sums to 100 (fig12 series).

    Returns the table and the list of genres omitted because they hold no
    units (reported as warnings by callers).
    """
    counts: dict[str, dict[RelationLabel, int]] = {}
    for pair in corpus:
        genre_counts = counts.setdefault(pair.genre, {label: 0 for label in RelationLabel})
        for unit in pair.units:
            genre_counts[unit.relation] += 1
    omitted = [genre for genre in sorted(counts) if sum(counts[genre].values()) == 0]
    genres = [genre for genre in sorted(counts) if genre not in omitted]
    rows: list[tuple[str, tuple[Value, ...]]] = []
    for label in DISTRIBUTION_ROW_ORDER:
        values: list[Value] = []
        for genre in genres:
            total = sum(counts[genre].values())
            values.append(counts[genre][label] / total * 100.0)
        rows.append((label.value, tuple(values)))
    rows.append((TOTAL_LABEL, tuple(100.0 for _ in genres)))
    return (
        StatTable(
            title=f"relation percentages by genre ({corpus.name})",
            columns=tuple(genres),
            rows=tuple(rows),
            decimals=decimals,
            provenance="relation_distribution_by_genre",
        ),
        omitted,
    )
