"""Rule-based pre-annotation: turn raw token alignments plus linguistic
annotations into draft units with suggested relations.

Only the mechanically detectable categories are ever suggested; semantic
categories (equivalence, modulation, particularization, ...) require human
judgment and stay out. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .model import (
    AlignedUnit,
    LingToken,
    PROVENANCE_SUGGESTED,
    RelationLabel,
    SentencePair,
    SubTag,
)

Edge = tuple[int, int]

CONFIDENCE_CERTAIN = "rule_certain"
CONFIDENCE_HEURISTIC = "rule_heuristic"

#: POS transfers that trigger a transposition suggestion.
TRANSPOSITION_TRANSFERS: frozenset[tuple[str, str]] = frozenset(
    {
        ("ADP", "PART"),
        ("ADJ", "NOUN"),
        ("NOUN", "VERB"),
        ("ADP", "NOUN"),
        ("ADP", "VERB"),
        ("ADJ", "VERB"),
        ("VERB", "NOUN"),
        ("ADJ", "ADV"),
        ("DET", "PART"),
        ("PRON", "PART"),
        ("ADJ", "PART"),
        ("ADJ", "PROPN"),
    }
)

#: Chinese plural markers; their absence is what makes a plural source noun a
#: lexical shift. Heuristic: annotators can demote false positives.
PLURAL_MARKERS = ("们", "些")

#: Passive / agent markers whose absence signals a passive-to-active switch.
PASSIVE_MARKERS = ("被", "由")

#: Negation tokens on the Chinese side (irony heuristic).
TARGET_NEGATION = ("不", "没", "未", "非")

#: English negation surfaces checked on the source side.
SOURCE_NEGATION = frozenset(
    {"not", "n't", "no", "never", "none", "nothing", "neither", "nor", "without"}
)

BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been", "being"})


@dataclass(frozen=True)
class Suggestion:
    unit: AlignedUnit
    confidence: str
    rule_id: str

    def __post_init__(self) -> None:
        if self.confidence == CONFIDENCE_CERTAIN and self.unit.relation not in (
            RelationLabel.UNALIGNED_REDUCTION,
            RelationLabel.UNALIGNED_EXPLICITATION,
        ):
            raise ValueError("rule_certain is reserved for structurally forced labels")


def group_edges(edges: Sequence[Edge], pair: SentencePair) -> list[AlignedUnit]:
    """Connected components of the bipartite edge graph, as literal units.

    Unaligned tokens are excluded; every aligned token lands in exactly one
    unit. Units come back ordered by their smallest source index.
    """
    parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(node):
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for i, j in edges:
        s, t = ("s", i), ("t", j)
        parent.setdefault(s, s)
        parent.setdefault(t, t)
        union(s, t)

    components: dict[tuple[str, int], tuple[set[int], set[int]]] = {}
    for node in parent:
        root = find(node)
        src, tgt = components.setdefault(root, (set(), set()))
        (src if node[0] == "s" else tgt).add(node[1])
    units = [
        AlignedUnit(tuple(sorted(src)), tuple(sorted(tgt)), RelationLabel.LITERAL)
        for src, tgt in components.values()
    ]
    units.sort(key=lambda u: (u.src, u.tgt))
    return units


def _uncovered_runs(size: int, covered: set[int]) -> list[tuple[int, ...]]:
    runs: list[tuple[int, ...]] = []
    run: list[int] = []
    for i in range(size):
        if i in covered:
            if run:
                runs.append(tuple(run))
                run = []
        else:
            run.append(i)
    if run:
        runs.append(tuple(run))
    return runs


def suggest_unaligned(pair: SentencePair, units: Sequence[AlignedUnit]) -> list[Suggestion]:
    """One reduction suggestion per maximal uncovered source run, one
    explicitation suggestion per maximal uncovered target run."""
    src_covered = {i for u in units for i in u.src}
    tgt_covered = {j for u in units for j in u.tgt}
    suggestions = [
        Suggestion(
            AlignedUnit(run, (), RelationLabel.UNALIGNED_REDUCTION, SubTag(None, PROVENANCE_SUGGESTED)),
            CONFIDENCE_CERTAIN,
            "unaligned-src-run",
        )
        for run in _uncovered_runs(len(pair.src_tokens), src_covered)
    ]
    suggestions.extend(
        Suggestion(
            AlignedUnit((), run, RelationLabel.UNALIGNED_EXPLICITATION, SubTag(None, PROVENANCE_SUGGESTED)),
            CONFIDENCE_CERTAIN,
            "unaligned-tgt-run",
        )
        for run in _uncovered_runs(len(pair.tgt_tokens), tgt_covered)
    )
    return suggestions


def _tgt_has_marker(pair: SentencePair, unit: AlignedUnit, markers: Sequence[str]) -> bool:
    for j in unit.tgt:
        surface = pair.tgt_tokens[j]
        if any(marker in surface for marker in markers):
            return True
    return False


def suggest_lexical_shift(pair: SentencePair, unit: AlignedUnit) -> Optional[Suggestion]:
    """Plural or tense lexical-shift suggestion from source features.

    plural: a source token has Number=Plur and the target group shows no
    plural marker. tense: a source token has Tense=Past or VerbForm=Part.
    plural wins when both fire.
    """
    if pair.src_ling is None:
        return None
    ling = [pair.src_ling[i] for i in unit.src]
    plural = any(lt.has_feat("Number", "Plur") for lt in ling) and not _tgt_has_marker(
        pair, unit, PLURAL_MARKERS
    )
    tense = any(
        lt.has_feat("Tense", "Past") or lt.has_feat("VerbForm", "Part") for lt in ling
    )
    if plural:
        value = "plural"
    elif tense:
        value = "tense"
    else:
        return None
    return Suggestion(
        AlignedUnit(
            unit.src, unit.tgt, RelationLabel.LEXICAL_SHIFT, SubTag(value, PROVENANCE_SUGGESTED)
        ),
        CONFIDENCE_HEURISTIC,
        f"lexical-shift-{value}",
    )


def _group_head_upos(group: Sequence[int], ling: Sequence[LingToken]) -> Optional[str]:
    if not group:
        return None
    from .subcat import group_head_pos  # single shared head-finding rule

    return group_head_pos(group, ling).pos


def suggest_transposition(pair: SentencePair, unit: AlignedUnit) -> Optional[Suggestion]:
    """Transposition suggestion when the head-POS pair is a known transfer."""
    if pair.src_ling is None or pair.tgt_ling is None or not unit.src or not unit.tgt:
        return None
    src_pos = _group_head_upos(unit.src, pair.src_ling)
    tgt_pos = _group_head_upos(unit.tgt, pair.tgt_ling)
    if src_pos == tgt_pos or (src_pos, tgt_pos) not in TRANSPOSITION_TRANSFERS:
        return None
    return Suggestion(
        AlignedUnit(unit.src, unit.tgt, RelationLabel.TRANSPOSITION, SubTag(None, PROVENANCE_SUGGESTED)),
        CONFIDENCE_HEURISTIC,
        f"transposition-{src_pos}-{tgt_pos}",
    )


def suggest_for_pair(pair: SentencePair, edges: Sequence[Edge]) -> list[Suggestion]:
    """All suggestions for one sentence: unaligned runs plus per-unit rules."""
    units = group_edges(edges, pair)
    suggestions = suggest_unaligned(pair, units)
    for unit in units:
        shift = suggest_lexical_shift(pair, unit)
        if shift is not None:
            suggestions.append(shift)
            continue  # lexical shift outranks transposition on the same unit
        transposition = suggest_transposition(pair, unit)
        if transposition is not None:
            suggestions.append(transposition)
    return suggestions


def preannotate_sentence(pair: SentencePair, edges: Sequence[Edge]) -> SentencePair:
    """Draft annotation: literal units from the edge graph, overridden by any
    fired suggestion (unaligned > lexical_shift > transposition)."""
    units = group_edges(edges, pair)
    replacements: dict[tuple[tuple[int, ...], tuple[int, ...]], AlignedUnit] = {}
    extra: list[AlignedUnit] = []
    for suggestion in suggest_for_pair(pair, edges):
        unit = suggestion.unit
        if unit.relation in (
            RelationLabel.UNALIGNED_REDUCTION,
            RelationLabel.UNALIGNED_EXPLICITATION,
        ):
            extra.append(unit)
        else:
            replacements.setdefault((unit.src, unit.tgt), unit)
    final = [replacements.get((u.src, u.tgt), u) for u in units]
    final.extend(extra)
    final.sort(key=lambda u: (u.src, u.tgt))
    return SentencePair(
        id=pair.id,
        src_tokens=pair.src_tokens,
        tgt_tokens=pair.tgt_tokens,
        units=tuple(final),
        genre=pair.genre,
        src_ling=pair.src_ling,
        tgt_ling=pair.tgt_ling,
    )
