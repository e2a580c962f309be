"""Builders shared across the test suite: distribution-shaped fixture corpora,
random complete-valid sentences with mutations, and on-disk project writing."""

from __future__ import annotations

import random
from itertools import product
from pathlib import Path

from relcorpus.ingest import (
    parse_manifest,
    serialize_alignment,
    serialize_annotations,
    serialize_tokenized,
)
from relcorpus.model import (
    ANNOTATABLE_LABELS,
    SUB_CATEGORIES,
    AlignedUnit,
    Corpus,
    LingToken,
    RelationLabel,
    SentencePair,
    SubTag,
)

R = RelationLabel

# Unit counts of the table5 distribution fixture (MT / HT columns).
TABLE5_MT = {
    R.EQUIVALENCE: 164,
    R.FIGURATIVE: 1,
    R.GENERALIZATION: 32,
    R.LEXICAL_SHIFT: 756,
    R.LITERAL: 6221,
    R.MODULATION: 95,
    R.MODULATION_TRANSPOSITION: 18,
    R.PARTICULARIZATION: 102,
    R.TRANSLATION_ERROR: 21,
    R.TRANSPOSITION: 500,
    R.NO_TYPE: 30,
    R.UNALIGNED_EXPLICITATION: 736,
    R.UNALIGNED_REDUCTION: 636,
    R.UNCERTAIN: 2,
}
TABLE5_HT = {
    R.EQUIVALENCE: 326,
    R.FIGURATIVE: 3,
    R.GENERALIZATION: 49,
    R.LEXICAL_SHIFT: 705,
    R.LITERAL: 5045,
    R.MODULATION: 128,
    R.MODULATION_TRANSPOSITION: 22,
    R.PARTICULARIZATION: 224,
    R.TRANSLATION_ERROR: 14,
    R.TRANSPOSITION: 545,
    R.NO_TYPE: 62,
    R.UNALIGNED_EXPLICITATION: 1220,
    R.UNALIGNED_REDUCTION: 870,
    R.UNCERTAIN: 22,
}

# Per-genre (literal, non-literal) splits of the table8 fixture.
TABLE8_MT = {
    "education": (613, 273),
    "laws": (941, 563),
    "microblog": (747, 282),
    "news": (906, 411),
    "officialDoc": (877, 620),
    "science": (545, 288),
    "scientificArticle": (748, 365),
    "spoken": (421, 179),
    "subtitles": (423, 112),
}
TABLE8_HT = {
    "education": (496, 382),
    "laws": (820, 636),
    "microblog": (562, 464),
    "news": (805, 528),
    "officialDoc": (783, 654),
    "science": (487, 353),
    "scientificArticle": (475, 695),
    "spoken": (341, 283),
    "subtitles": (276, 195),
}

NONLITERAL_ORDER = tuple(
    label
    for label in (
        R.EQUIVALENCE,
        R.FIGURATIVE,
        R.GENERALIZATION,
        R.LEXICAL_SHIFT,
        R.MODULATION,
        R.MODULATION_TRANSPOSITION,
        R.PARTICULARIZATION,
        R.TRANSLATION_ERROR,
        R.TRANSPOSITION,
        R.NO_TYPE,
        R.UNALIGNED_EXPLICITATION,
        R.UNALIGNED_REDUCTION,
        R.UNCERTAIN,
    )
)


def unit(src, tgt, relation, sub=None, provenance="manual"):
    tag = SubTag(sub, provenance) if sub is not None or provenance != "manual" else None
    return AlignedUnit(tuple(src), tuple(tgt), relation, tag)


def sentence_from_labels(
    sentence_id: str, labels: list[RelationLabel], genre: str = "unknown"
) -> SentencePair:
    """One minimal complete-valid sentence holding one unit per label."""
    units = []
    src_tokens: list[str] = []
    tgt_tokens: list[str] = []
    for label in labels:
        if label is R.UNALIGNED_EXPLICITATION:
            tgt_tokens.append(f"c{len(tgt_tokens)}")
            units.append(AlignedUnit((), (len(tgt_tokens) - 1,), label))
        elif label in (R.UNALIGNED_REDUCTION, R.NO_TYPE):
            src_tokens.append(f"w{len(src_tokens)}")
            units.append(AlignedUnit((len(src_tokens) - 1,), (), label))
        else:
            src_tokens.append(f"w{len(src_tokens)}")
            tgt_tokens.append(f"c{len(tgt_tokens)}")
            units.append(
                AlignedUnit((len(src_tokens) - 1,), (len(tgt_tokens) - 1,), label)
            )
    return SentencePair(
        id=sentence_id,
        src_tokens=tuple(src_tokens),
        tgt_tokens=tuple(tgt_tokens),
        units=tuple(units),
        genre=genre,
    )


def corpus_from_counts(
    name: str,
    counts: dict[RelationLabel, int],
    genre_split: dict[str, tuple[int, int]] | None = None,
    units_per_sentence: int = 100,
) -> Corpus:
    """Deterministic corpus with exactly the given per-relation unit counts,
    optionally distributed over genres by (literal, non-literal) quotas."""
    pool: list[RelationLabel] = []
    for label in NONLITERAL_ORDER:
        pool.extend([label] * counts.get(label, 0))
    if genre_split is None:
        genre_split = {"unknown": (counts.get(R.LITERAL, 0), len(pool))}
    assert sum(non for _, non in genre_split.values()) == len(pool)
    assert sum(lit for lit, _ in genre_split.values()) == counts.get(R.LITERAL, 0)

    def has_src(labels):
        return any(label is not R.UNALIGNED_EXPLICITATION for label in labels)

    def has_tgt(labels):
        return any(
            label not in (R.UNALIGNED_REDUCTION, R.NO_TYPE) for label in labels
        )

    sentences = []
    sid = 1
    offset = 0
    for genre in sorted(genre_split):
        lit, non = genre_split[genre]
        labels = [R.LITERAL] * lit + pool[offset : offset + non]
        offset += non
        # pack into sentences that always carry tokens on both sides so the
        # corpus stays serializable (one sentence per non-blank line)
        chunks: list[list[RelationLabel]] = []
        current: list[RelationLabel] = []
        for label in labels:
            current.append(label)
            if len(current) >= units_per_sentence and has_src(current) and has_tgt(current):
                chunks.append(current)
                current = []
        if current:
            if chunks and not (has_src(current) and has_tgt(current)):
                chunks[-1].extend(current)
            else:
                assert has_src(current) and has_tgt(current), genre
                chunks.append(current)
        for chunk in chunks:
            sentences.append(sentence_from_labels(f"s{sid}", chunk, genre))
            sid += 1
    return Corpus(name, tuple(sentences))


def literal_mirror(corpus: Corpus, name: str) -> Corpus:
    """A corpus sharing `corpus`'s source text, annotated all-literal 1:1.
    Useful as the second corpus of an on-disk project."""
    pairs = []
    for p in corpus:
        n = len(p.src_tokens)
        pairs.append(
            SentencePair(
                id=p.id,
                src_tokens=p.src_tokens,
                tgt_tokens=tuple(f"c{j}" for j in range(n)),
                units=tuple(AlignedUnit((i,), (i,), R.LITERAL) for i in range(n)),
                genre=p.genre,
            )
        )
    return Corpus(name, tuple(pairs))


# ---------------------------------------------------------------------------
# Random complete-valid sentences and mutations

def _random_partition(rng: random.Random, indices: list[int]) -> list[list[int]]:
    rng.shuffle(indices)
    groups: list[list[int]] = []
    i = 0
    while i < len(indices):
        size = min(rng.randint(1, 3), len(indices) - i)
        groups.append(sorted(indices[i : i + size]))
        i += size
    return groups


def random_complete_pair(rng: random.Random, sentence_id: str = "s1") -> SentencePair:
    n_src = rng.randint(1, 12)
    n_tgt = rng.randint(1, 12)
    src_groups = _random_partition(rng, list(range(n_src)))
    tgt_groups = _random_partition(rng, list(range(n_tgt)))
    rng.shuffle(src_groups)
    rng.shuffle(tgt_groups)
    matched = rng.randint(0, min(len(src_groups), len(tgt_groups)))
    units = []
    for k in range(matched):
        relation = rng.choice(ANNOTATABLE_LABELS)
        sub = None
        allowed = sorted(SUB_CATEGORIES.get(relation, frozenset()))
        if allowed and rng.random() < 0.3:
            sub = SubTag(rng.choice(allowed))
        units.append(AlignedUnit(tuple(src_groups[k]), tuple(tgt_groups[k]), relation, sub))
    for group in src_groups[matched:]:
        relation = rng.choice((R.UNALIGNED_REDUCTION, R.NO_TYPE))
        units.append(AlignedUnit(tuple(group), (), relation))
    for group in tgt_groups[matched:]:
        units.append(AlignedUnit((), tuple(group), R.UNALIGNED_EXPLICITATION))
    return SentencePair(
        id=sentence_id,
        src_tokens=tuple(f"w{i}" for i in range(n_src)),
        tgt_tokens=tuple(f"c{j}" for j in range(n_tgt)),
        units=tuple(units),
    )


def mutate_pair(rng: random.Random, pair: SentencePair) -> tuple[str, SentencePair]:
    """Apply one structural mutation; the result must fail complete validation."""
    kind = rng.choice(("remove_index", "duplicate_index", "bad_unaligned_label"))
    units = [AlignedUnit(u.src, u.tgt, u.relation, u.sub) for u in pair.units]
    if kind == "remove_index":
        candidates = [k for k, u in enumerate(units) if u.src or u.tgt]
        k = rng.choice(candidates)
        u = units[k]
        if u.src and (not u.tgt or rng.random() < 0.5):
            group = list(u.src)
            group.remove(rng.choice(group))
            units[k] = AlignedUnit(tuple(group), u.tgt, u.relation, u.sub)
        else:
            group = list(u.tgt)
            group.remove(rng.choice(group))
            units[k] = AlignedUnit(u.src, tuple(group), u.relation, u.sub)
    elif kind == "duplicate_index":
        donors = [
            (k, side)
            for k, u in enumerate(units)
            for side in ("src", "tgt")
            if getattr(u, side)
        ]
        k, side = rng.choice(donors)
        idx = rng.choice(getattr(units[k], side))
        k2 = rng.randrange(len(units))
        u2 = units[k2]
        if side == "src":
            units[k2] = AlignedUnit(u2.src + (idx,), u2.tgt, u2.relation, u2.sub)
        else:
            units[k2] = AlignedUnit(u2.src, u2.tgt + (idx,), u2.relation, u2.sub)
    else:
        k = rng.randrange(len(units))
        u = units[k]
        if not u.tgt or not u.src:
            units[k] = AlignedUnit(u.src, u.tgt, R.LITERAL, None)
        else:
            units[k] = AlignedUnit(u.src, u.tgt, R.UNALIGNED_REDUCTION, None)
    return kind, SentencePair(
        id=pair.id,
        src_tokens=pair.src_tokens,
        tgt_tokens=pair.tgt_tokens,
        units=tuple(units),
    )


# ---------------------------------------------------------------------------
# On-disk projects

def edges_for_pair(pair: SentencePair) -> list[tuple[int, int]]:
    """Alignment edges implied by a pair's units (cartesian per unit)."""
    edges = []
    for u in pair.units:
        edges.extend(product(u.src, u.tgt))
    return sorted(edges)


def conllu_for(tokens, ling) -> str:
    lines = []
    for i, (form, lt) in enumerate(zip(tokens, ling), start=1):
        feats = "|".join(sorted(lt.feats)) if lt.feats else "_"
        head = 0 if lt.head is None else lt.head + 1
        lines.append(
            "\t".join(
                [str(i), form, "_", lt.upos, "_", feats, str(head), lt.deprel, "_", "_"]
            )
        )
    return "\n".join(lines) + "\n\n"


def write_project(
    tmp_path: Path,
    reference: Corpus,
    candidate: Corpus,
    name: str = "fixture",
    with_conllu: bool = False,
):
    """Write a full on-disk project for two corpora and return its manifest."""
    tmp_path.mkdir(parents=True, exist_ok=True)
    sections = []
    for role, corpus in (("reference", reference), ("candidate", candidate)):
        d = tmp_path / role
        d.mkdir(exist_ok=True)
        (d / "source.txt").write_text(
            serialize_tokenized(p.src_tokens for p in corpus), encoding="utf-8"
        )
        (d / "target.txt").write_text(
            serialize_tokenized(p.tgt_tokens for p in corpus), encoding="utf-8"
        )
        (d / "corpus.aln").write_text(
            serialize_alignment(edges_for_pair(p) for p in corpus), encoding="utf-8"
        )
        (d / "annotations.jsonl").write_text(
            serialize_annotations(corpus), encoding="utf-8"
        )
        lines = [f"[{role}]", f"name = {corpus.name}"]
        for key, filename in (
            ("source", "source.txt"),
            ("target", "target.txt"),
            ("alignment", "corpus.aln"),
            ("annotations", "annotations.jsonl"),
        ):
            lines.append(f"{key} = {role}/{filename}")
        if with_conllu:
            for key, side in (("source_conllu", "src"), ("target_conllu", "tgt")):
                text = "".join(
                    conllu_for(
                        getattr(p, f"{side}_tokens"), getattr(p, f"{side}_ling") or ()
                    )
                    for p in corpus
                )
                (d / f"{side}.conllu").write_text(text, encoding="utf-8")
                lines.append(f"{key} = {role}/{side}.conllu")
        sections.append("\n".join(lines))

    genre_lines = []
    genres = [p.genre for p in reference]
    start = 0
    for k in range(1, len(genres) + 1):
        if k == len(genres) or genres[k] != genres[start]:
            genre_lines.append(f"{start + 1}-{k} = {genres[start]}")
            start = k
    genre_section = ""
    if set(genres) != {"unknown"}:
        genre_section = "[genres]\n" + "\n".join(genre_lines) + "\n"

    manifest_path = tmp_path / "project.ini"
    manifest_path.write_text(
        f"[project]\nname = {name}\n\n" + "\n\n".join(sections) + "\n\n" + genre_section,
        encoding="utf-8",
    )
    return parse_manifest(manifest_path)
