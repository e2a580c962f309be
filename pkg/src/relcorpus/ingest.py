"""Parsers and serializers for every project file format.

Formats (all UTF-8):
  source.txt / target.txt    one sentence per line, tokens separated by spaces
  corpus.aln                 one line per sentence of space-separated "i-j"
                             0-based edges; an empty line means no edges
  annotations.jsonl          one unit record per line:
                             {"id", "src", "tgt", "relation", "sub"?, "provenance"?}
  *.conllu                   standard 10-column CoNLL-U
  project.ini                manifest: [project]/[reference]/[candidate]/[genres]

Parsers never silently drop input: every repaired or skipped line yields a
ParseWarning with its line number; anything worse raises ParseError.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from .model import (
    AlignedUnit,
    Corpus,
    LingToken,
    RelationLabel,
    SentencePair,
    SubTag,
    UnknownRelationError,
    validate,
)

TextSource = Union[str, TextIO]


class ParseError(Exception):
    def __init__(self, code: str, message: str, line: Optional[int] = None):
        loc = f" (line {line})" if line is not None else ""
        super().__init__(f"{code}: {message}{loc}")
        self.code = code
        self.line = line


class ProjectError(Exception):
    """A cross-file consistency failure discovered at project load."""

    def __init__(self, code: str, message: str, details: Optional[list] = None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.details = details or []


@dataclass(frozen=True)
class ParseWarning:
    code: str
    line: int
    message: str


def _read(source: TextSource) -> str:
    if isinstance(source, str):
        return source
    return source.read()


# ---------------------------------------------------------------------------
# Tokenized text

def parse_tokenized(source: TextSource) -> tuple[list[list[str]], list[ParseWarning]]:
    """Parse one-sentence-per-line tokenized text.

    A run of multiple spaces is collapsed with a WARN record; blank lines and
    empty files are errors.
    """
    text = _read(source)
    if text.endswith("\n"):
        text = text[:-1]
    if text == "":
        raise ParseError("EMPTY_FILE", "no sentences in token file")
    sentences: list[list[str]] = []
    warnings: list[ParseWarning] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.strip() == "":
            raise ParseError("EMPTY_LINE", "blank line in token file", line=lineno)
        tokens = line.split(" ")
        if "" in tokens or line != line.strip():
            tokens = line.split()
            warnings.append(
                ParseWarning(
                    "COLLAPSED_WHITESPACE",
                    lineno,
                    "collapsed a whitespace run while tokenizing",
                )
            )
        sentences.append(tokens)
    return sentences, warnings


def serialize_tokenized(sentences: Iterable[Sequence[str]]) -> str:
    return "".join(" ".join(tokens) + "\n" for tokens in sentences)


# ---------------------------------------------------------------------------
# Alignment edge files ("i-j" items)

Edge = tuple[int, int]

_EDGE_RE = re.compile(r"^(\d+)-(\d+)$")


def parse_alignment(source: TextSource) -> list[list[Edge]]:
    """Parse a token-index alignment file into per-sentence edge lists."""
    text = _read(source)
    if text.endswith("\n"):
        text = text[:-1]
    result: list[list[Edge]] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        edges: list[Edge] = []
        seen: set[Edge] = set()
        if line.strip() == "":
            result.append(edges)
            continue
        for item_no, item in enumerate(line.split(), start=1):
            m = _EDGE_RE.match(item)
            if not m:
                raise ParseError(
                    "MALFORMED_EDGE",
                    f"item {item_no} is not an i-j edge: {item!r}",
                    line=lineno,
                )
            edge = (int(m.group(1)), int(m.group(2)))
            if edge in seen:
                raise ParseError(
                    "DUPLICATE_EDGE",
                    f"item {item_no} repeats edge {edge[0]}-{edge[1]}",
                    line=lineno,
                )
            seen.add(edge)
            edges.append(edge)
        result.append(edges)
    return result


def serialize_alignment(edges_per_sentence: Iterable[Sequence[Edge]]) -> str:
    return "".join(
        " ".join(f"{i}-{j}" for i, j in edges) + "\n" for edges in edges_per_sentence
    )


# ---------------------------------------------------------------------------
# Annotation records (JSON lines)

def _unit_to_record(sentence_id: str, unit: AlignedUnit) -> dict:
    record: dict = {
        "id": sentence_id,
        "src": list(unit.src),
        "tgt": list(unit.tgt),
        "relation": unit.relation.value,
    }
    if unit.sub is not None:
        if unit.sub.value is not None:
            record["sub"] = unit.sub.value
        record["provenance"] = unit.sub.provenance
    return record


def _record_to_unit(record: dict, lineno: int) -> tuple[str, AlignedUnit]:
    try:
        sentence_id = record["id"]
        src = record["src"]
        tgt = record["tgt"]
        relation_text = record["relation"]
    except KeyError as exc:
        raise ParseError("MISSING_FIELD", f"record lacks field {exc}", line=lineno)
    for name, group in (("src", src), ("tgt", tgt)):
        if not isinstance(group, list) or not all(
            isinstance(i, int) and i >= 0 for i in group
        ):
            raise ParseError(
                "BAD_INDEX", f"{name} must be a list of non-negative ints", line=lineno
            )
    try:
        relation = RelationLabel.parse(relation_text)
    except UnknownRelationError:
        raise ParseError("UNKNOWN_RELATION", f"{relation_text!r}", line=lineno)
    sub = None
    if "sub" in record or "provenance" in record:
        value = record.get("sub")
        provenance = record.get("provenance", "manual")
        if value is not None:
            from .model import SUB_CATEGORIES

            allowed = SUB_CATEGORIES.get(relation, frozenset())
            if value not in allowed:
                raise ParseError(
                    "SUB_TAG_MISMATCH",
                    f"sub-tag {value!r} not valid for {relation}",
                    line=lineno,
                )
        try:
            sub = SubTag(value, provenance)
        except ValueError as exc:
            raise ParseError("SUB_TAG_MISMATCH", str(exc), line=lineno)
    return sentence_id, AlignedUnit(tuple(src), tuple(tgt), relation, sub)


def parse_annotations(source: TextSource) -> dict[str, list[AlignedUnit]]:
    """Parse unit records grouped by sentence id, in file order."""
    text = _read(source)
    units: dict[str, list[AlignedUnit]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() == "":
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError("MALFORMED_RECORD", str(exc), line=lineno)
        sentence_id, unit = _record_to_unit(record, lineno)
        units.setdefault(sentence_id, []).append(unit)
    return units


def serialize_annotations(corpus: Corpus) -> str:
    """One JSON record per unit, sentences in corpus order. Round-trips exactly."""
    lines = []
    for pair in corpus:
        for unit in pair.units:
            lines.append(
                json.dumps(_unit_to_record(pair.id, unit), ensure_ascii=False)
            )
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# CoNLL-U

_MWT_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")


def parse_conllu(source: TextSource) -> tuple[list[list[LingToken]], list[ParseWarning]]:
    """Parse 10-column CoNLL-U into per-sentence LingToken lists.

    Multiword-token and empty-node lines are skipped with a WARN; heads are
    converted to 0-based with None for the root.
    """
    text = _read(source)
    sentences: list[list[LingToken]] = []
    warnings: list[ParseWarning] = []
    current: list[LingToken] = []
    saw_tokens = False
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.startswith("#"):
            continue
        if line.strip() == "":
            if current:
                sentences.append(current)
                current = []
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(
                "COLUMN_COUNT", f"expected 10 columns, got {len(cols)}", line=lineno
            )
        token_id = cols[0]
        if _MWT_ID.match(token_id):
            warnings.append(ParseWarning("SKIPPED_MWT", lineno, f"multiword token {token_id}"))
            continue
        if _EMPTY_ID.match(token_id):
            warnings.append(ParseWarning("SKIPPED_EMPTY_NODE", lineno, f"empty node {token_id}"))
            continue
        try:
            int(token_id)
        except ValueError:
            raise ParseError("COLUMN_COUNT", f"bad token id {token_id!r}", line=lineno)
        try:
            head_1based = int(cols[6])
        except ValueError:
            raise ParseError("NONNUMERIC_HEAD", f"head {cols[6]!r}", line=lineno)
        feats = frozenset(cols[5].split("|")) if cols[5] not in ("_", "") else frozenset()
        current.append(
            LingToken(
                upos=cols[3],
                feats=feats,
                head=None if head_1based == 0 else head_1based - 1,
                deprel=cols[7],
            )
        )
        saw_tokens = True
    if current:
        sentences.append(current)
    if not saw_tokens:
        raise ParseError("EMPTY_FILE", "no tokens in CoNLL-U file")
    return sentences, warnings


# ---------------------------------------------------------------------------
# Project manifest

@dataclass(frozen=True)
class CorpusFiles:
    name: str
    source: Path
    target: Path
    alignment: Path
    annotations: Path
    source_conllu: Optional[Path] = None
    target_conllu: Optional[Path] = None


@dataclass(frozen=True)
class ProjectManifest:
    name: str
    reference: CorpusFiles
    candidate: CorpusFiles
    genre_ranges: tuple[tuple[int, int, str], ...] = ()  # 1-based inclusive
    path: Optional[Path] = None

    def genre_for(self, ordinal: int) -> str:
        for start, end, genre in self.genre_ranges:
            if start <= ordinal <= end:
                return genre
        return "unknown"


_RANGE_RE = re.compile(r"^(\d+)(?:-(\d+))?$")


def _corpus_files(section: configparser.SectionProxy, base: Path, default_name: str) -> CorpusFiles:
    def resolve(key: str, required: bool = True) -> Optional[Path]:
        value = section.get(key)
        if value is None:
            if required:
                raise ParseError("MANIFEST_FIELD", f"[{section.name}] missing key {key!r}")
            return None
        return (base / value).resolve() if not Path(value).is_absolute() else Path(value)

    return CorpusFiles(
        name=section.get("name", default_name),
        source=resolve("source"),
        target=resolve("target"),
        alignment=resolve("alignment"),
        annotations=resolve("annotations"),
        source_conllu=resolve("source_conllu", required=False),
        target_conllu=resolve("target_conllu", required=False),
    )


def parse_manifest(path: Union[str, Path]) -> ProjectManifest:
    path = Path(path)
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ParseError("MANIFEST_UNREADABLE", str(exc))
    except configparser.Error as exc:
        raise ParseError("MANIFEST_SYNTAX", str(exc))
    for section in ("project", "reference", "candidate"):
        if section not in parser:
            raise ParseError("MANIFEST_FIELD", f"missing [{section}] section")
    base = path.parent
    ranges: list[tuple[int, int, str]] = []
    if "genres" in parser:
        for key, genre in parser["genres"].items():
            m = _RANGE_RE.match(key.strip())
            if not m:
                raise ParseError("MANIFEST_FIELD", f"bad genre range {key!r}")
            start = int(m.group(1))
            end = int(m.group(2)) if m.group(2) else start
            if end < start or start < 1:
                raise ParseError("MANIFEST_FIELD", f"bad genre range {key!r}")
            ranges.append((start, end, genre.strip()))
        ranges.sort()
    return ProjectManifest(
        name=parser["project"].get("name", path.stem),
        reference=_corpus_files(parser["reference"], base, "HT"),
        candidate=_corpus_files(parser["candidate"], base, "MT"),
        genre_ranges=tuple(ranges),
        path=path,
    )


def _check_genre_cover(manifest: ProjectManifest, n_sentences: int) -> None:
    if not manifest.genre_ranges:
        return
    covered = [0] * n_sentences
    for start, end, _genre in manifest.genre_ranges:
        for k in range(start, min(end, n_sentences) + 1):
            covered[k - 1] += 1
        if end > n_sentences or start > n_sentences:
            raise ProjectError(
                "GENRE_RANGE", f"genre range {start}-{end} exceeds {n_sentences} sentences"
            )
    gaps = [k + 1 for k, c in enumerate(covered) if c == 0]
    overlaps = [k + 1 for k, c in enumerate(covered) if c > 1]
    if gaps:
        raise ProjectError("GENRE_GAP", f"genre map misses sentences {gaps[:10]}")
    if overlaps:
        raise ProjectError("GENRE_OVERLAP", f"genre map overlaps at sentences {overlaps[:10]}")


# ---------------------------------------------------------------------------
# Project loading

@dataclass
class LoadedCorpus:
    corpus: Corpus
    edges: list[list[Edge]]
    files: CorpusFiles


@dataclass
class LoadedProject:
    manifest: ProjectManifest
    reference: LoadedCorpus
    candidate: LoadedCorpus
    warnings: list[ParseWarning] = field(default_factory=list)

    @property
    def corpora(self) -> tuple[Corpus, Corpus]:
        return self.reference.corpus, self.candidate.corpus


def sentence_id(ordinal: int) -> str:
    """Stable sentence identifier for a 1-based file ordinal."""
    return f"s{ordinal}"


def _load_corpus(
    files: CorpusFiles, manifest: ProjectManifest, warnings: list[ParseWarning]
) -> LoadedCorpus:
    def read_file(p: Path) -> str:
        try:
            return p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError("FILE_UNREADABLE", f"{p}: {exc}")

    src_sents, w = parse_tokenized(read_file(files.source))
    warnings.extend(w)
    tgt_sents, w = parse_tokenized(read_file(files.target))
    warnings.extend(w)
    edges = parse_alignment(read_file(files.alignment))
    units_by_id = parse_annotations(read_file(files.annotations))

    if len(tgt_sents) != len(src_sents):
        raise ProjectError(
            "SENTENCE_COUNT_MISMATCH",
            f"{files.name}: {len(src_sents)} source vs {len(tgt_sents)} target sentences",
        )
    if len(edges) != len(src_sents):
        raise ProjectError(
            "SENTENCE_COUNT_MISMATCH",
            f"{files.name}: {len(edges)} alignment lines vs {len(src_sents)} sentences",
        )

    ling: dict[str, Optional[list[list[LingToken]]]] = {"src": None, "tgt": None}
    for key, path, token_sents in (
        ("src", files.source_conllu, src_sents),
        ("tgt", files.target_conllu, tgt_sents),
    ):
        if path is None:
            continue
        parsed, w = parse_conllu(read_file(path))
        warnings.extend(w)
        if len(parsed) != len(token_sents):
            raise ProjectError(
                "SENTENCE_COUNT_MISMATCH",
                f"{files.name}: {len(parsed)} CoNLL-U sentences vs {len(token_sents)} in {key} tokens",
            )
        for k, (ling_sent, tok_sent) in enumerate(zip(parsed, token_sents), start=1):
            if len(ling_sent) != len(tok_sent):
                raise ProjectError(
                    "SENTENCE_COUNT_MISMATCH",
                    f"{files.name} sentence {k}: {len(ling_sent)} CoNLL-U tokens vs {len(tok_sent)} tokens ({key})",
                )
        ling[key] = parsed

    known_ids = {sentence_id(k) for k in range(1, len(src_sents) + 1)}
    unknown = sorted(set(units_by_id) - known_ids)
    if unknown:
        raise ProjectError(
            "UNKNOWN_SENTENCE", f"{files.name}: annotation records for unknown ids {unknown[:10]}"
        )

    for k, sentence_edges in enumerate(edges, start=1):
        n_src, n_tgt = len(src_sents[k - 1]), len(tgt_sents[k - 1])
        for i, j in sentence_edges:
            if i >= n_src or j >= n_tgt:
                raise ProjectError(
                    "EDGE_OUT_OF_BOUNDS",
                    f"{files.name} sentence {k}: edge {i}-{j} outside {n_src}x{n_tgt}",
                )

    pairs = []
    for k in range(1, len(src_sents) + 1):
        sid = sentence_id(k)
        pairs.append(
            SentencePair(
                id=sid,
                src_tokens=tuple(src_sents[k - 1]),
                tgt_tokens=tuple(tgt_sents[k - 1]),
                units=tuple(units_by_id.get(sid, [])),
                genre=manifest.genre_for(k),
                src_ling=tuple(ling["src"][k - 1]) if ling["src"] else None,
                tgt_ling=tuple(ling["tgt"][k - 1]) if ling["tgt"] else None,
            )
        )
    return LoadedCorpus(Corpus(files.name, tuple(pairs)), edges, files)


def load_project(manifest: ProjectManifest, strict: bool = True) -> LoadedProject:
    """Load and cross-check both corpora of a project.

    Checks: per-file counts are consistent, alignment edges are in bounds,
    every sentence passes draft validation, and the two corpora share their
    source text sentence-by-sentence. With ``strict=False`` draft-validation
    failures are downgraded to warnings so reporting tools can proceed.
    """
    warnings: list[ParseWarning] = []
    reference = _load_corpus(manifest.reference, manifest, warnings)
    candidate = _load_corpus(manifest.candidate, manifest, warnings)

    if len(reference.corpus) != len(candidate.corpus):
        raise ProjectError(
            "SHARED_SOURCE_VIOLATION",
            f"{len(reference.corpus)} reference vs {len(candidate.corpus)} candidate sentences",
        )
    _check_genre_cover(manifest, len(reference.corpus))

    differing = [
        ref.id
        for ref, cand in zip(reference.corpus, candidate.corpus)
        if ref.src_tokens != cand.src_tokens
    ]
    if differing:
        raise ProjectError(
            "SHARED_SOURCE_VIOLATION",
            f"source texts differ at {differing[:10]}",
            details=differing[:10],
        )

    for loaded in (reference, candidate):
        for k, pair in enumerate(loaded.corpus, start=1):
            report = validate(pair, "draft")
            if not report.ok:
                if strict:
                    raise ProjectError(
                        "INVALID_ANNOTATION",
                        f"{loaded.corpus.name} sentence {pair.id}: "
                        + "; ".join(f"{v.code}@{v.locus}" for v in report),
                    )
                warnings.append(
                    ParseWarning(
                        "INVALID_ANNOTATION",
                        k,
                        f"{loaded.corpus.name} {pair.id}: "
                        + "; ".join(f"{v.code}@{v.locus}" for v in report),
                    )
                )
    return LoadedProject(manifest, reference, candidate, warnings)


# ---------------------------------------------------------------------------
# StatTable export

def export_tables(table, fmt: str = "csv") -> str:
    """Serialize a StatTable as csv, tsv, or json-lines text."""
    from .metrics import StatTable  # local import to avoid a cycle

    assert isinstance(table, StatTable)
    if fmt == "csv" or fmt == "tsv":
        buf = io.StringIO()
        writer = csv.writer(
            buf, delimiter="," if fmt == "csv" else "\t", lineterminator="\r\n"
        )
        writer.writerow(["label", *table.columns])
        for label, values in table.rows:
            writer.writerow([label, *[table.format_value(v) for v in values]])
        return buf.getvalue()
    if fmt == "json-lines":
        lines = []
        for label, values in table.rows:
            row = {"label": label}
            for col, value in zip(table.columns, values):
                row[col] = table.json_value(value)
            lines.append(json.dumps(row, ensure_ascii=False))
        return "".join(line + "\n" for line in lines)
    raise ValueError(f"unknown export format: {fmt!r}")
