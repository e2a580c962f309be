"""Domain model: relation taxonomy, aligned units, sentence pairs, validation.

Everything here is an immutable value; operations are pure functions, so
sentences can be processed concurrently without shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional


class RelationLabel(str, Enum):
    """The closed 14-way translation-relation taxonomy."""

    LITERAL = "literal"
    EQUIVALENCE = "equivalence"
    GENERALIZATION = "generalization"
    PARTICULARIZATION = "particularization"
    MODULATION = "modulation"
    TRANSPOSITION = "transposition"
    MODULATION_TRANSPOSITION = "modulation_transposition"
    FIGURATIVE = "figurative"
    LEXICAL_SHIFT = "lexical_shift"
    TRANSLATION_ERROR = "translation_error"
    UNCERTAIN = "uncertain"
    NO_TYPE = "no_type"
    UNALIGNED_EXPLICITATION = "unaligned_explicitation"
    UNALIGNED_REDUCTION = "unaligned_reduction"

    def __str__(self) -> str:  # canonical snake_case form everywhere
        return self.value

    @classmethod
    def parse(cls, text: str) -> "RelationLabel":
        """Parse a canonical relation string (surrounding whitespace tolerated)."""
        cleaned = text.strip()
        for member in cls:
            if member.value == cleaned:
                return member
        raise UnknownRelationError(f"unknown relation label: {text!r}")


class UnknownRelationError(ValueError):
    pass


#: The 11 labels offered in the annotation drop list (everything except the
#: structurally assigned no_type / unaligned pair).
ANNOTATABLE_LABELS: tuple[RelationLabel, ...] = (
    RelationLabel.LITERAL,
    RelationLabel.EQUIVALENCE,
    RelationLabel.TRANSPOSITION,
    RelationLabel.MODULATION,
    RelationLabel.MODULATION_TRANSPOSITION,
    RelationLabel.GENERALIZATION,
    RelationLabel.PARTICULARIZATION,
    RelationLabel.FIGURATIVE,
    RelationLabel.LEXICAL_SHIFT,
    RelationLabel.UNCERTAIN,
    RelationLabel.TRANSLATION_ERROR,
)

#: Closed per-relation sub-category vocabularies. Relations absent from this
#: map admit no sub-category value (a SubTag may still carry provenance only).
SUB_CATEGORIES: dict[RelationLabel, frozenset[str]] = {
    RelationLabel.EQUIVALENCE: frozenset(
        {"slight_semantic_change", "named_entity", "fixed_expression", "adjective", "refined"}
    ),
    RelationLabel.GENERALIZATION: frozenset({"short_name", "hyperonym"}),
    RelationLabel.LEXICAL_SHIFT: frozenset({"plural", "tense"}),
    RelationLabel.MODULATION: frozenset({"passive_to_active", "irony", "other"}),
    RelationLabel.MODULATION_TRANSPOSITION: frozenset({"proposition", "other"}),
    RelationLabel.PARTICULARIZATION: frozenset({"pronoun", "noun", "verb", "adv_adj", "other"}),
}

#: The nine genres of the source corpus; genre stays an open string.
PAPER_GENRES: tuple[str, ...] = (
    "education",
    "laws",
    "microblog",
    "news",
    "officialDoc",
    "science",
    "scientificArticle",
    "spoken",
    "subtitles",
)

PROVENANCE_MANUAL = "manual"
PROVENANCE_SUGGESTED = "suggested"


@dataclass(frozen=True)
class SubTag:
    """Optional refinement of a unit: sub-category value plus provenance."""

    value: Optional[str]
    provenance: str = PROVENANCE_MANUAL

    def __post_init__(self) -> None:
        if self.provenance not in (PROVENANCE_MANUAL, PROVENANCE_SUGGESTED):
            raise ValueError(f"bad provenance: {self.provenance!r}")


@dataclass(frozen=True)
class LingToken:
    """Per-token linguistic annotation: UPOS, feats, dependency head and relation.

    ``head`` is a 0-based token index or None for the sentence root.
    ``feats`` holds ``Key=Value`` strings, e.g. ``Number=Plur``.
    """

    upos: str
    feats: frozenset[str] = frozenset()
    head: Optional[int] = None
    deprel: str = "dep"

    def has_feat(self, key: str, value: str) -> bool:
        return f"{key}={value}" in self.feats


@dataclass(frozen=True)
class AlignedUnit:
    """One annotation unit: a source index group aligned to a target index group.

    Index groups are kept in sorted order; at most one side may be empty.
    """

    src: tuple[int, ...]
    tgt: tuple[int, ...]
    relation: RelationLabel
    sub: Optional[SubTag] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", tuple(sorted(self.src)))
        object.__setattr__(self, "tgt", tuple(sorted(self.tgt)))


@dataclass(frozen=True)
class SentencePair:
    id: str
    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]
    units: tuple[AlignedUnit, ...] = ()
    genre: str = "unknown"
    src_ling: Optional[tuple[LingToken, ...]] = None
    tgt_ling: Optional[tuple[LingToken, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "src_tokens", tuple(self.src_tokens))
        object.__setattr__(self, "tgt_tokens", tuple(self.tgt_tokens))
        object.__setattr__(self, "units", tuple(self.units))
        if self.src_ling is not None:
            object.__setattr__(self, "src_ling", tuple(self.src_ling))
        if self.tgt_ling is not None:
            object.__setattr__(self, "tgt_ling", tuple(self.tgt_ling))


@dataclass(frozen=True)
class Corpus:
    """Named, ordered collection of sentence pairs with unique ids."""

    name: str
    sentences: tuple[SentencePair, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sentences", tuple(self.sentences))
        seen: set[str] = set()
        for pair in self.sentences:
            if pair.id in seen:
                raise ValueError(f"duplicate sentence id in corpus {self.name!r}: {pair.id}")
            seen.add(pair.id)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def get(self, sentence_id: str) -> Optional[SentencePair]:
        for pair in self.sentences:
            if pair.id == sentence_id:
                return pair
        return None


@dataclass(frozen=True)
class Violation:
    code: str
    locus: str
    message: str
    # sort key components; locus ordering is (section, index, code)
    _section: int = field(default=0, repr=False, compare=False)
    _index: int = field(default=0, repr=False, compare=False)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


class AnnotationError(Exception):
    """Raised when an operation's declared error condition is met."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


# Violation codes
EMPTY_UNIT = "EMPTY_UNIT"
BAD_UNALIGNED_LABEL = "BAD_UNALIGNED_LABEL"
BAD_INDEX = "BAD_INDEX"
OVERLAP = "OVERLAP"
UNCOVERED = "UNCOVERED"
SUB_TAG_MISMATCH = "SUB_TAG_MISMATCH"
BAD_TOKEN = "BAD_TOKEN"
LING_LENGTH = "LING_LENGTH"
BAD_HEAD = "BAD_HEAD"
NO_ROOT = "NO_ROOT"
MULTI_ROOT = "MULTI_ROOT"

_SECTION_UNIT = 0
_SECTION_SRC = 1
_SECTION_TGT = 2
_SECTION_LING = 3


def _check_tokens(side: str, section: int, tokens: tuple[str, ...], out: list[Violation]) -> None:
    for i, surface in enumerate(tokens):
        if not surface or any(ch.isspace() for ch in surface):
            out.append(
                Violation(
                    BAD_TOKEN,
                    f"{side}[{i}]",
                    f"token surface must be non-empty without whitespace, got {surface!r}",
                    _section=section,
                    _index=i,
                )
            )


def _check_ling(
    side: str, tokens: tuple[str, ...], ling: Optional[tuple[LingToken, ...]], out: list[Violation]
) -> None:
    if ling is None:
        return
    if len(ling) != len(tokens):
        out.append(
            Violation(
                LING_LENGTH,
                f"{side}_ling",
                f"{len(ling)} linguistic tokens for {len(tokens)} tokens",
                _section=_SECTION_LING,
            )
        )
        return
    roots = 0
    for i, lt in enumerate(ling):
        if lt.head is None:
            roots += 1
        elif not (0 <= lt.head < len(ling)) or lt.head == i:
            out.append(
                Violation(
                    BAD_HEAD,
                    f"{side}_ling[{i}]",
                    f"head {lt.head} invalid for token {i}",
                    _section=_SECTION_LING,
                    _index=i,
                )
            )
    if ling:
        if roots == 0:
            out.append(Violation(NO_ROOT, f"{side}_ling", "no root token", _section=_SECTION_LING))
        elif roots > 1:
            out.append(
                Violation(
                    MULTI_ROOT, f"{side}_ling", f"{roots} root tokens", _section=_SECTION_LING
                )
            )


def validate(pair: SentencePair, mode: str = "complete") -> ValidationReport:
    """Check a sentence pair against the annotation invariants.

    ``mode="draft"`` requires every token to be covered at most once (work in
    progress); ``mode="complete"`` requires exactly once (the partition
    invariant). Violations are data, not exceptions, and come back ordered by
    locus: units first, then source tokens, target tokens, linguistic
    annotations.
    """
    if mode not in ("draft", "complete"):
        raise ValueError(f"mode must be 'draft' or 'complete', got {mode!r}")

    out: list[Violation] = []
    n_src = len(pair.src_tokens)
    n_tgt = len(pair.tgt_tokens)

    for u, unit in enumerate(pair.units):
        if not unit.src and not unit.tgt:
            out.append(
                Violation(
                    EMPTY_UNIT, f"unit[{u}]", "src and tgt both empty", _section=_SECTION_UNIT, _index=u
                )
            )
            continue
        if not unit.tgt and unit.relation not in (
            RelationLabel.UNALIGNED_REDUCTION,
            RelationLabel.NO_TYPE,
        ):
            out.append(
                Violation(
                    BAD_UNALIGNED_LABEL,
                    f"unit[{u}]",
                    f"target-empty unit must be unaligned_reduction or no_type, got {unit.relation}",
                    _section=_SECTION_UNIT,
                    _index=u,
                )
            )
        if not unit.src and unit.relation is not RelationLabel.UNALIGNED_EXPLICITATION:
            out.append(
                Violation(
                    BAD_UNALIGNED_LABEL,
                    f"unit[{u}]",
                    f"source-empty unit must be unaligned_explicitation, got {unit.relation}",
                    _section=_SECTION_UNIT,
                    _index=u,
                )
            )
        if unit.relation is RelationLabel.UNALIGNED_EXPLICITATION and unit.src:
            out.append(
                Violation(
                    BAD_UNALIGNED_LABEL,
                    f"unit[{u}]",
                    "unaligned_explicitation unit must have empty src",
                    _section=_SECTION_UNIT,
                    _index=u,
                )
            )
        if unit.relation is RelationLabel.UNALIGNED_REDUCTION and unit.tgt:
            out.append(
                Violation(
                    BAD_UNALIGNED_LABEL,
                    f"unit[{u}]",
                    "unaligned_reduction unit must have empty tgt",
                    _section=_SECTION_UNIT,
                    _index=u,
                )
            )
        for idx in unit.src:
            if not 0 <= idx < n_src:
                out.append(
                    Violation(
                        BAD_INDEX,
                        f"unit[{u}]",
                        f"src index {idx} out of range 0..{n_src - 1}",
                        _section=_SECTION_UNIT,
                        _index=u,
                    )
                )
        for idx in unit.tgt:
            if not 0 <= idx < n_tgt:
                out.append(
                    Violation(
                        BAD_INDEX,
                        f"unit[{u}]",
                        f"tgt index {idx} out of range 0..{n_tgt - 1}",
                        _section=_SECTION_UNIT,
                        _index=u,
                    )
                )
        if unit.sub is not None and unit.sub.value is not None:
            allowed = SUB_CATEGORIES.get(unit.relation, frozenset())
            if unit.sub.value not in allowed:
                out.append(
                    Violation(
                        SUB_TAG_MISMATCH,
                        f"unit[{u}]",
                        f"sub-tag {unit.sub.value!r} not valid for {unit.relation}",
                        _section=_SECTION_UNIT,
                        _index=u,
                    )
                )

    _check_tokens("src", _SECTION_SRC, pair.src_tokens, out)
    _check_tokens("tgt", _SECTION_TGT, pair.tgt_tokens, out)

    for side, section, size, groups in (
        ("src", _SECTION_SRC, n_src, [u.src for u in pair.units]),
        ("tgt", _SECTION_TGT, n_tgt, [u.tgt for u in pair.units]),
    ):
        counts = [0] * size
        for group in groups:
            for idx in group:
                if 0 <= idx < size:
                    counts[idx] += 1
        for i, c in enumerate(counts):
            if c > 1:
                out.append(
                    Violation(
                        OVERLAP,
                        f"{side}[{i}]",
                        f"{side} token {i} covered by {c} units",
                        _section=section,
                        _index=i,
                    )
                )
            elif c == 0 and mode == "complete":
                out.append(
                    Violation(
                        UNCOVERED,
                        f"{side}[{i}]",
                        f"{side} token {i} not covered by any unit",
                        _section=section,
                        _index=i,
                    )
                )

    _check_ling("src", pair.src_tokens, pair.src_ling, out)
    _check_ling("tgt", pair.tgt_tokens, pair.tgt_ling, out)

    out.sort(key=lambda v: (v._section, v._index, v.code))
    return ValidationReport(tuple(out))


def is_complete(pair: SentencePair) -> bool:
    return validate(pair, "complete").ok


def project_source_relations(pair: SentencePair) -> tuple[RelationLabel, ...]:
    """Label every source token with the relation of the unit that owns it.

    Target-empty units (unaligned_reduction / no_type) label their source
    tokens like any other unit; explicitation units own no source tokens and
    contribute nothing. Raises INCOMPLETE if any source token is uncovered.
    """
    owner: list[Optional[RelationLabel]] = [None] * len(pair.src_tokens)
    for unit in pair.units:
        for idx in unit.src:
            if not 0 <= idx < len(owner):
                raise AnnotationError(BAD_INDEX, f"src index {idx} out of range in {pair.id}")
            if owner[idx] is not None:
                raise AnnotationError(OVERLAP, f"src token {idx} covered twice in {pair.id}")
            owner[idx] = unit.relation
    uncovered = [i for i, rel in enumerate(owner) if rel is None]
    if uncovered:
        raise AnnotationError(
            "INCOMPLETE", f"source tokens {uncovered} uncovered in sentence {pair.id}"
        )
    return tuple(owner)  # type: ignore[arg-type]


def unit_counts(corpus: Corpus) -> dict[RelationLabel, int]:
    """Number of units per relation over a whole corpus."""
    counts = {label: 0 for label in RelationLabel}
    for pair in corpus:
        for unit in pair.units:
            counts[unit.relation] += 1
    return counts


def iter_units(corpus: Corpus) -> Iterable[tuple[SentencePair, AlignedUnit]]:
    for pair in corpus:
        for unit in pair.units:
            yield pair, unit
