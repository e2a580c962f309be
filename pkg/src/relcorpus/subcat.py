"""Sub-category classification and profiling of non-literal units.

Classifiers are deterministic and total on their declared relation; feeding
the wrong relation raises WRONG_RELATION. Corpus profiles prefer a unit's
gold sub-tag, fall back to the rule classifier, and bucket the remainder as
"unclassified" so class counts always sum to the relation's unit count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .model import (
    AlignedUnit,
    AnnotationError,
    Corpus,
    LingToken,
    RelationLabel,
    SentencePair,
)
from .metrics import StatTable, Value
from .preannotate import (
    BE_FORMS,
    PASSIVE_MARKERS,
    PLURAL_MARKERS,
    SOURCE_NEGATION,
    TARGET_NEGATION,
)

WRONG_RELATION = "WRONG_RELATION"
NO_RULE_FIRED = "NO_RULE_FIRED"
MISSING_LING = "MISSING_LING"
EMPTY_GROUP = "EMPTY_GROUP"

UNCLASSIFIED = "unclassified"
MULTI_TOKEN_ROW = "More than one token"

#: Row orders for the per-relation profile tables.
SUBCATEGORY_ORDER: dict[RelationLabel, tuple[str, ...]] = {
    RelationLabel.EQUIVALENCE: (
        "slight_semantic_change",
        "named_entity",
        "fixed_expression",
        "adjective",
        "refined",
    ),
    RelationLabel.GENERALIZATION: ("short_name", "hyperonym"),
    RelationLabel.LEXICAL_SHIFT: ("plural", "tense"),
    RelationLabel.MODULATION: ("passive_to_active", "irony", "other"),
    RelationLabel.MODULATION_TRANSPOSITION: ("proposition", "other"),
    RelationLabel.PARTICULARIZATION: ("pronoun", "noun", "verb", "adv_adj", "other"),
}


@dataclass(frozen=True)
class PosTransfer:
    src_pos: str
    tgt_pos: str

    def __str__(self) -> str:
        return f"{self.src_pos}->{self.tgt_pos}"


@dataclass(frozen=True)
class GroupHead:
    pos: str
    deprel: str
    index: int
    ambiguous: bool


@dataclass(frozen=True)
class ClassResult:
    value: str
    low_confidence: bool = False


def _require(unit: AlignedUnit, *relations: RelationLabel) -> None:
    if unit.relation not in relations:
        raise AnnotationError(
            WRONG_RELATION,
            f"expected {'/'.join(r.value for r in relations)}, got {unit.relation}",
        )


def group_head_pos(group: Sequence[int], ling: Sequence[LingToken]) -> GroupHead:
    """Syntactic head of a token group: the unique token whose dependency head
    lies outside the group (or is the root). Zero or several such tokens fall
    back to the first token with the ambiguity flag set."""
    if not group:
        raise AnnotationError(EMPTY_GROUP, "cannot take the head of an empty group")
    members = set(group)
    candidates = [
        i for i in group if ling[i].head is None or ling[i].head not in members
    ]
    if len(candidates) == 1:
        head = candidates[0]
        return GroupHead(ling[head].upos, ling[head].deprel, head, ambiguous=False)
    first = min(group)
    return GroupHead(ling[first].upos, ling[first].deprel, first, ambiguous=True)


# ---------------------------------------------------------------------------
# Per-relation classifiers

def classify_equivalence(
    pair: SentencePair,
    unit: AlignedUnit,
    ne_spans: Sequence[tuple[int, int]] = (),
    fixed_expressions: Optional[Iterable[str]] = None,
) -> ClassResult:
    """Equivalence cascade: named entity, fixed expression, four-character
    adjective rendering, else slight semantic change. ``refined`` is a manual
    judgment and never auto-assigned."""
    _require(unit, RelationLabel.EQUIVALENCE)
    if any(start <= i <= end for i in unit.src for start, end in ne_spans):
        return ClassResult("named_entity")
    if fixed_expressions is not None:
        phrase = " ".join(pair.src_tokens[i] for i in unit.src).lower()
        if phrase in set(fixed_expressions):
            return ClassResult("fixed_expression")
    if pair.src_ling is not None and unit.src:
        head = group_head_pos(unit.src, pair.src_ling)
        rendering = "".join(pair.tgt_tokens[j] for j in unit.tgt)
        if (
            head.pos == "ADJ"
            and len(rendering) == 4
            and all("一" <= ch <= "鿿" for ch in rendering)
        ):
            return ClassResult("adjective")
        return ClassResult("slight_semantic_change")
    return ClassResult("slight_semantic_change", low_confidence=pair.src_ling is None)


def classify_generalization(
    pair: SentencePair,
    unit: AlignedUnit,
    hypernyms: Optional[dict[str, set[str]]] = None,
    glosses: Optional[dict[str, set[str]]] = None,
) -> ClassResult:
    """short_name for truncating renderings, hyperonym otherwise; without a
    confirming lexicon the hyperonym default carries a low-confidence flag."""
    _require(unit, RelationLabel.GENERALIZATION)
    if len(unit.src) >= 2 and len(unit.tgt) < len(unit.src):
        if glosses is None:
            return ClassResult("short_name")
        gloss_pool: set[str] = set()
        for i in unit.src:
            gloss_pool |= glosses.get(pair.src_tokens[i].lower(), set())
        if all(pair.tgt_tokens[j] in gloss_pool for j in unit.tgt):
            return ClassResult("short_name")
    if hypernyms is not None:
        tgt_surfaces = {pair.tgt_tokens[j] for j in unit.tgt}
        for i in unit.src:
            if hypernyms.get(pair.src_tokens[i].lower(), set()) & tgt_surfaces:
                return ClassResult("hyperonym")
    return ClassResult("hyperonym", low_confidence=True)


def classify_lexical_shift(pair: SentencePair, unit: AlignedUnit) -> ClassResult:
    """Shared rule with pre-annotation: plural beats tense; neither firing is
    reported as NO_RULE_FIRED rather than guessed."""
    _require(unit, RelationLabel.LEXICAL_SHIFT)
    if pair.src_ling is None:
        raise AnnotationError(MISSING_LING, "lexical-shift rule needs source features")
    ling = [pair.src_ling[i] for i in unit.src]
    has_marker = any(
        marker in pair.tgt_tokens[j] for j in unit.tgt for marker in PLURAL_MARKERS
    )
    if any(lt.has_feat("Number", "Plur") for lt in ling) and not has_marker:
        return ClassResult("plural")
    if any(lt.has_feat("Tense", "Past") or lt.has_feat("VerbForm", "Part") for lt in ling):
        return ClassResult("tense")
    raise AnnotationError(NO_RULE_FIRED, "neither plural nor tense features present")


def classify_modulation(pair: SentencePair, unit: AlignedUnit) -> ClassResult:
    _require(unit, RelationLabel.MODULATION)
    src_surfaces = [pair.src_tokens[i].lower() for i in unit.src]
    src_ling = [pair.src_ling[i] for i in unit.src] if pair.src_ling is not None else []
    passive_source = any(lt.has_feat("Voice", "Pass") for lt in src_ling) or (
        any(s in BE_FORMS for s in src_surfaces)
        and any(lt.has_feat("VerbForm", "Part") for lt in src_ling)
    )
    tgt_surfaces = [pair.tgt_tokens[j] for j in unit.tgt]
    if passive_source and not any(
        marker in surface for surface in tgt_surfaces for marker in PASSIVE_MARKERS
    ):
        return ClassResult("passive_to_active")
    tgt_negated = any(
        marker in surface for surface in tgt_surfaces for marker in TARGET_NEGATION
    )
    src_negated = any(s in SOURCE_NEGATION for s in src_surfaces) or any(
        lt.has_feat("Polarity", "Neg") for lt in src_ling
    )
    if tgt_negated and not src_negated:
        return ClassResult("irony")
    return ClassResult("other")


def classify_mod_transposition(pair: SentencePair, unit: AlignedUnit) -> ClassResult:
    """proposition iff the source group is headed by an adposition."""
    _require(unit, RelationLabel.MODULATION_TRANSPOSITION)
    if pair.src_ling is None:
        raise AnnotationError(MISSING_LING, "needs source POS annotations")
    head = group_head_pos(unit.src, pair.src_ling)
    return ClassResult("proposition" if head.pos == "ADP" else "other")


_PARTICULARIZATION_MAP = {
    "PRON": "pronoun",
    "NOUN": "noun",
    "PROPN": "noun",
    "VERB": "verb",
    "AUX": "verb",
    "ADJ": "adv_adj",
    "ADV": "adv_adj",
}


def classify_particularization_pos(pair: SentencePair, unit: AlignedUnit) -> ClassResult:
    _require(unit, RelationLabel.PARTICULARIZATION)
    if pair.src_ling is None:
        raise AnnotationError(MISSING_LING, "needs source POS annotations")
    head = group_head_pos(unit.src, pair.src_ling)
    return ClassResult(_PARTICULARIZATION_MAP.get(head.pos, "other"))


def transposition_transfer(pair: SentencePair, unit: AlignedUnit) -> PosTransfer:
    """The (source head POS, target head POS) pair of a transposition unit."""
    _require(unit, RelationLabel.TRANSPOSITION, RelationLabel.MODULATION_TRANSPOSITION)
    if pair.src_ling is None or pair.tgt_ling is None:
        raise AnnotationError(MISSING_LING, "needs POS annotations on both sides")
    return PosTransfer(
        group_head_pos(unit.src, pair.src_ling).pos,
        group_head_pos(unit.tgt, pair.tgt_ling).pos,
    )


# ---------------------------------------------------------------------------
# Resource files

def load_ne_spans(text: str) -> dict[str, list[tuple[int, int]]]:
    """Named-entity span file: `<sentence-id> <start>-<end> ...` per line."""
    spans: dict[str, list[tuple[int, int]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split()
        sid, ranges = fields[0], fields[1:]
        for item in ranges:
            try:
                start_s, end_s = item.split("-", 1)
                start, end = int(start_s), int(end_s)
            except ValueError:
                raise AnnotationError(
                    "BAD_SPAN", f"line {lineno}: bad index range {item!r}"
                )
            spans.setdefault(sid, []).append((start, end))
    return spans


def load_fixed_expressions(text: str) -> set[str]:
    """Fixed-expression lexicon: one expression per line, case-insensitive."""
    return {
        " ".join(line.split()).lower()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    }


def load_hypernym_lexicon(text: str) -> dict[str, set[str]]:
    """Hypernym lexicon: `lemma<TAB>hyperonym[<TAB>hyperonym...]`, keys lowercased."""
    lexicon: dict[str, set[str]] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) < 2:
            continue
        lexicon.setdefault(fields[0].lower(), set()).update(f for f in fields[1:] if f)
    return lexicon


@dataclass(frozen=True)
class Resources:
    ne_spans: dict[str, list[tuple[int, int]]] = None  # type: ignore[assignment]
    fixed_expressions: Optional[set[str]] = None
    hypernyms: Optional[dict[str, set[str]]] = None

    def __post_init__(self) -> None:
        if self.ne_spans is None:
            object.__setattr__(self, "ne_spans", {})


# ---------------------------------------------------------------------------
# Corpus profiling

def classify_unit(
    pair: SentencePair, unit: AlignedUnit, resources: Resources
) -> Optional[str]:
    """Best sub-category for one unit: gold sub-tag, else rule classifier,
    else None (unclassifiable)."""
    if unit.sub is not None and unit.sub.value is not None:
        return unit.sub.value
    try:
        if unit.relation is RelationLabel.EQUIVALENCE:
            return classify_equivalence(
                pair,
                unit,
                resources.ne_spans.get(pair.id, ()),
                resources.fixed_expressions,
            ).value
        if unit.relation is RelationLabel.GENERALIZATION:
            return classify_generalization(pair, unit, resources.hypernyms).value
        if unit.relation is RelationLabel.LEXICAL_SHIFT:
            return classify_lexical_shift(pair, unit).value
        if unit.relation is RelationLabel.MODULATION:
            return classify_modulation(pair, unit).value
        if unit.relation is RelationLabel.MODULATION_TRANSPOSITION:
            return classify_mod_transposition(pair, unit).value
        if unit.relation is RelationLabel.PARTICULARIZATION:
            return classify_particularization_pos(pair, unit).value
    except AnnotationError:
        return None
    return None


def subcategory_profile(
    corpus: Corpus,
    relation: RelationLabel,
    resources: Optional[Resources] = None,
    decimals: int = 3,
) -> StatTable:
    """Sub-category counts for one relation over a corpus (table9-table14 shape).

    Counts sum to the relation's unit count; units that neither carry a gold
    sub-tag nor trigger a rule land in the "unclassified" row.
    """
    if relation not in SUBCATEGORY_ORDER:
        raise AnnotationError(WRONG_RELATION, f"no sub-category profile for {relation}")
    resources = resources or Resources()
    counts = {value: 0 for value in SUBCATEGORY_ORDER[relation]}
    unclassified = 0
    total = 0
    for pair in corpus:
        for unit in pair.units:
            if unit.relation is not relation:
                continue
            total += 1
            value = classify_unit(pair, unit, resources)
            if value is None:
                unclassified += 1
            else:
                counts[value] += 1
    rows: list[tuple[str, tuple[Value, ...]]] = [
        (value, (counts[value],)) for value in SUBCATEGORY_ORDER[relation]
    ]
    if unclassified:
        rows.append((UNCLASSIFIED, (unclassified,)))
    rows.append(("total", (total,)))
    return StatTable(
        title=f"{relation.value} sub-categories ({corpus.name})",
        columns=("count",),
        rows=tuple(rows),
        decimals=decimals,
        provenance="subcategory_profile",
    )


def _apply_top_k(
    counted: dict[str, int], top_k: Optional[int]
) -> list[tuple[str, tuple[Value, ...]]]:
    ordered = sorted(counted.items(), key=lambda item: (-item[1], item[0]))
    if top_k is not None and len(ordered) > top_k:
        head, tail = ordered[:top_k], ordered[top_k:]
        rows = [(label, (count,)) for label, count in head]
        rows.append(("others", (sum(count for _, count in tail),)))
    else:
        rows = [(label, (count,)) for label, count in ordered]
    rows.append(("total", (sum(counted.values()),)))
    return rows


def transfer_profile(
    corpus: Corpus, top_k: Optional[int] = None, decimals: int = 3
) -> StatTable:
    """POS-transfer counts over transposition units (table15 shape)."""
    counted: dict[str, int] = {}
    for pair in corpus:
        for unit in pair.units:
            if unit.relation is not RelationLabel.TRANSPOSITION:
                continue
            try:
                label = str(transposition_transfer(pair, unit))
            except AnnotationError:
                label = UNCLASSIFIED
            counted[label] = counted.get(label, 0) + 1
    return StatTable(
        title=f"transposition POS transfers ({corpus.name})",
        columns=("count",),
        rows=tuple(_apply_top_k(counted, top_k)),
        decimals=decimals,
        provenance="transfer_profile",
    )


def profile_unaligned(
    corpus: Corpus,
    side: str,
    facet: str,
    top_k: Optional[int] = None,
    decimals: int = 3,
) -> StatTable:
    """Group-head POS or deprel counts of unaligned units (table16-table19 shape).

    side="explicitation" profiles the target groups of explicitation units;
    side="reduction" the source groups of reduction units. Ambiguous
    multi-token reduction groups are counted as "More than one token".
    """
    if side not in ("explicitation", "reduction"):
        raise ValueError(f"side must be explicitation or reduction, got {side!r}")
    if facet not in ("pos", "dep"):
        raise ValueError(f"facet must be pos or dep, got {facet!r}")
    relation = (
        RelationLabel.UNALIGNED_EXPLICITATION
        if side == "explicitation"
        else RelationLabel.UNALIGNED_REDUCTION
    )
    counted: dict[str, int] = {}
    for pair in corpus:
        for unit in pair.units:
            if unit.relation is not relation:
                continue
            group = unit.tgt if side == "explicitation" else unit.src
            ling = pair.tgt_ling if side == "explicitation" else pair.src_ling
            if ling is None:
                raise AnnotationError(
                    MISSING_LING, f"sentence {pair.id} lacks {side}-side annotations"
                )
            head = group_head_pos(group, ling)
            if side == "reduction" and len(group) > 1 and head.ambiguous:
                label = MULTI_TOKEN_ROW
            else:
                label = head.pos if facet == "pos" else head.deprel
            counted[label] = counted.get(label, 0) + 1
    return StatTable(
        title=f"{side} {facet} profile ({corpus.name})",
        columns=("count",),
        rows=tuple(_apply_top_k(counted, top_k)),
        decimals=decimals,
        provenance="profile_unaligned",
    )
