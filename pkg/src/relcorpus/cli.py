"""Command-line front door.

Subcommands: validate, stats, diff, subcat, suggest, serve.
Exit codes: 0 success, 1 data violation, 2 configuration error,
3 environment error. Every output file starts with a metadata header
(tool version, manifest hash, policies) and is byte-identical across reruns
of unchanged inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .ingest import (
    LoadedProject,
    ParseError,
    ProjectError,
    export_tables,
    load_project,
    parse_manifest,
    serialize_annotations,
)
from .metrics import (
    StatTable,
    discrepancy_table,
    edit_distance_by_genre,
    format_decimal,
    literal_split_by_genre,
    relation_distribution,
    relation_distribution_by_genre,
    token_counts,
    token_literal_stats,
)
from .model import Corpus, RelationLabel, validate
from .preannotate import preannotate_sentence
from .subcat import (
    Resources,
    load_fixed_expressions,
    load_hypernym_lexicon,
    load_ne_spans,
    profile_unaligned,
    subcategory_profile,
    transfer_profile,
)
from .model import AnnotationError

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2
EXIT_ENV = 3

_CONFIG_ERROR_CODES = {
    "MANIFEST_UNREADABLE",
    "MANIFEST_SYNTAX",
    "MANIFEST_FIELD",
    "FILE_UNREADABLE",
}


@dataclass
class RunConfig:
    manifest_path: Path
    out_dir: Path
    denominator: str = "reference"
    decimals: int = 3
    top_k: Optional[int] = None
    ne_spans_path: Optional[Path] = None
    fixed_expressions_path: Optional[Path] = None
    hypernyms_path: Optional[Path] = None

    def __post_init__(self) -> None:
        if not 0 <= self.decimals <= 6:
            raise ValueError(f"decimals must be in [0, 6], got {self.decimals}")


def _manifest_hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _meta_lines(config: RunConfig, **extra) -> list[str]:
    lines = [
        f"# relcorpus {__version__}",
        f"# manifest_sha256: {_manifest_hash(config.manifest_path)}",
        f"# decimals: {config.decimals}",
    ]
    for key, value in extra.items():
        lines.append(f"# {key}: {value}")
    return lines


def _write_table(path: Path, table: StatTable, config: RunConfig, **extra) -> None:
    header = "".join(line + "\r\n" for line in _meta_lines(config, **extra))
    path.write_text(header + export_tables(table, "csv"), encoding="utf-8")


def _write_csv_rows(
    path: Path, columns: list[str], rows: list[list], config: RunConfig, **extra
) -> None:
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    writer = _csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    header = "".join(line + "\r\n" for line in _meta_lines(config, **extra))
    path.write_text(header + buf.getvalue(), encoding="utf-8")


def _load(config: RunConfig, strict: bool = True) -> LoadedProject:
    manifest = parse_manifest(config.manifest_path)
    return load_project(manifest, strict=strict)


# ---------------------------------------------------------------------------
# validate

def cmd_validate(config: RunConfig, require_ling: bool = False) -> int:
    manifest = parse_manifest(config.manifest_path)
    if require_ling:
        missing = [
            f"{role}.{key}"
            for role, files in (
                ("reference", manifest.reference),
                ("candidate", manifest.candidate),
            )
            for key, value in (
                ("source_conllu", files.source_conllu),
                ("target_conllu", files.target_conllu),
            )
            if value is None
        ]
        if missing:
            print(f"error: --require-ling but manifest lacks {', '.join(missing)}")
            return EXIT_CONFIG

    report: dict = {
        "_meta": {
            "tool": f"relcorpus {__version__}",
            "manifest_sha256": _manifest_hash(config.manifest_path),
        },
        "ok": True,
        "shared_source": "ok",
        "violations": {},
        "warnings": [],
    }
    try:
        project = load_project(manifest, strict=False)
    except (ParseError, ProjectError) as exc:
        code = getattr(exc, "code", "PARSE_ERROR")
        report["ok"] = False
        if code == "SHARED_SOURCE_VIOLATION":
            report["shared_source"] = str(exc)
        else:
            report["violations"]["project"] = [{"code": code, "message": str(exc)}]
        _write_report(config, report)
        return EXIT_CONFIG if code in _CONFIG_ERROR_CODES else EXIT_DATA

    report["warnings"] = [
        {"code": w.code, "line": w.line, "message": w.message} for w in project.warnings
    ]
    for role, corpus in (("reference", project.reference.corpus), ("candidate", project.candidate.corpus)):
        per_sentence = {}
        for pair in corpus:
            result = validate(pair, "complete")
            if not result.ok:
                per_sentence[pair.id] = [
                    {"code": v.code, "locus": v.locus, "message": v.message}
                    for v in result
                ]
        if per_sentence:
            report["ok"] = False
            report["violations"][role] = per_sentence
    _write_report(config, report)
    print("validation: " + ("ok" if report["ok"] else "violations found"))
    return EXIT_OK if report["ok"] else EXIT_DATA


def _write_report(config: RunConfig, report: dict) -> None:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / "validation_report.json"
    path.write_text(
        json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# stats

def _role_corpora(project: LoadedProject) -> tuple[tuple[str, Corpus], ...]:
    return (
        ("reference", project.reference.corpus),
        ("candidate", project.candidate.corpus),
    )


def cmd_stats(config: RunConfig) -> int:
    project = _load(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    d = config.decimals

    ref_tokens = token_counts(project.reference.corpus)
    cand_tokens = token_counts(project.candidate.corpus)
    genres = [label for label, _ in ref_tokens.rows if label != "total"]
    rows = []
    for genre in genres + ["total"]:
        src, ref_tgt = ref_tokens.row(genre)
        _, cand_tgt = cand_tokens.row(genre)
        rows.append((genre, (src, cand_tgt, ref_tgt)))
    combined = StatTable(
        title="token counts",
        columns=("source_tokens", "candidate_target_tokens", "reference_target_tokens"),
        rows=tuple(rows),
        decimals=0,
    )
    _write_table(config.out_dir / "table3_token_counts.csv", combined, config)

    for role, corpus in _role_corpora(project):
        _write_table(
            config.out_dir / f"table5_distribution_{role}.csv",
            relation_distribution(corpus, d),
            config,
            corpus=corpus.name,
        )
        _write_table(
            config.out_dir / f"table8_genre_split_{role}.csv",
            literal_split_by_genre(corpus, d),
            config,
            corpus=corpus.name,
        )
        stats = token_literal_stats(corpus)
        summary = StatTable(
            title="literal token totals",
            columns=("value",),
            rows=(
                ("literal_tokens", (stats.literal_tokens,)),
                ("non_literal_tokens", (stats.total_tokens - stats.literal_tokens,)),
                ("total_tokens", (stats.total_tokens,)),
                ("literal_pct", (stats.pooled_percentage,)),
                ("mean_sentence_ratio_pct", (stats.mean_sentence_ratio * 100.0,)),
            ),
            decimals=d,
        )
        _write_table(
            config.out_dir / f"table6_token_literal_{role}.csv",
            summary,
            config,
            corpus=corpus.name,
        )
        _write_csv_rows(
            config.out_dir / f"fig8_literal_ratio_{role}.csv",
            ["id", "genre", "literal_tokens", "total_tokens", "ratio"],
            [
                [s.id, s.genre, s.literal_tokens, s.total_tokens, format_decimal(s.ratio, d)]
                for s in stats.sentences
            ],
            config,
            corpus=corpus.name,
        )
        by_genre, omitted = relation_distribution_by_genre(corpus, d)
        _write_table(
            config.out_dir / f"fig12_relation_by_genre_{role}.csv",
            by_genre,
            config,
            corpus=corpus.name,
            omitted_genres=",".join(omitted) if omitted else "none",
        )
    print(f"stats written to {config.out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# diff

def cmd_diff(config: RunConfig) -> int:
    project = _load(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    table = discrepancy_table(
        project.candidate.corpus,
        project.reference.corpus,
        policy=config.denominator,
        decimals=config.decimals,
    )
    _write_table(
        config.out_dir / "table5_discrepancy.csv",
        table,
        config,
        denominator=config.denominator,
    )
    summaries, flat = edit_distance_by_genre(
        project.reference.corpus, project.candidate.corpus
    )
    _write_csv_rows(
        config.out_dir / "fig11_edit_distance.csv",
        ["id", "genre", "distance"],
        [list(row) for row in flat],
        config,
    )
    _write_csv_rows(
        config.out_dir / "fig11_edit_distance_summary.csv",
        ["genre", "sentences", "min", "q1", "median", "q3", "max"],
        [
            [
                s.genre,
                len(s.values),
                s.minimum,
                format_decimal(s.q1, config.decimals),
                format_decimal(s.median, config.decimals),
                format_decimal(s.q3, config.decimals),
                s.maximum,
            ]
            for s in summaries.values()
        ],
        config,
    )
    print(f"diff written to {config.out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcat

_SUBCAT_TABLES = (
    ("table9_equivalence", RelationLabel.EQUIVALENCE),
    ("table10_generalization", RelationLabel.GENERALIZATION),
    ("table11_lexical_shift", RelationLabel.LEXICAL_SHIFT),
    ("table12_modulation", RelationLabel.MODULATION),
    ("table13_modulation_transposition", RelationLabel.MODULATION_TRANSPOSITION),
    ("table14_particularization", RelationLabel.PARTICULARIZATION),
)

_UNALIGNED_TABLES = (
    ("table16_explicitation_pos", "explicitation", "pos"),
    ("table17_explicitation_dep", "explicitation", "dep"),
    ("table18_reduction_pos", "reduction", "pos"),
    ("table19_reduction_dep", "reduction", "dep"),
)


def _load_resources(config: RunConfig) -> Resources:
    ne_spans = {}
    fixed = None
    hyper = None
    if config.ne_spans_path is not None:
        ne_spans = load_ne_spans(config.ne_spans_path.read_text(encoding="utf-8"))
    if config.fixed_expressions_path is not None:
        fixed = load_fixed_expressions(
            config.fixed_expressions_path.read_text(encoding="utf-8")
        )
    if config.hypernyms_path is not None:
        hyper = load_hypernym_lexicon(config.hypernyms_path.read_text(encoding="utf-8"))
    return Resources(ne_spans=ne_spans, fixed_expressions=fixed, hypernyms=hyper)


def cmd_subcat(config: RunConfig) -> int:
    project = _load(config)
    resources = _load_resources(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    for role, corpus in _role_corpora(project):
        for stem, relation in _SUBCAT_TABLES:
            table = subcategory_profile(corpus, relation, resources, config.decimals)
            note = "empty" if table.cell("total", "count") == 0 else "ok"
            _write_table(
                config.out_dir / f"{stem}_{role}.csv",
                table,
                config,
                corpus=corpus.name,
                note=note,
            )
        table = transfer_profile(corpus, config.top_k, config.decimals)
        _write_table(
            config.out_dir / f"table15_transposition_transfers_{role}.csv",
            table,
            config,
            corpus=corpus.name,
            top_k=config.top_k if config.top_k is not None else "all",
        )
        for stem, side, facet in _UNALIGNED_TABLES:
            try:
                table = profile_unaligned(corpus, side, facet, config.top_k, config.decimals)
                note = "ok"
            except AnnotationError as exc:
                table = StatTable(
                    title=f"{side} {facet} profile ({corpus.name})",
                    columns=("count",),
                    rows=(),
                    decimals=config.decimals,
                )
                note = f"skipped ({exc.code})"
            _write_table(
                config.out_dir / f"{stem}_{role}.csv",
                table,
                config,
                corpus=corpus.name,
                note=note,
                top_k=config.top_k if config.top_k is not None else "all",
            )
    print(f"sub-category tables written to {config.out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# suggest

def cmd_suggest(config: RunConfig) -> int:
    project = _load(config, strict=False)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    for role, loaded in (("reference", project.reference), ("candidate", project.candidate)):
        drafts = []
        for pair, edges in zip(loaded.corpus, loaded.edges):
            draft = preannotate_sentence(pair, edges)
            drafts.append(draft)
        draft_corpus = Corpus(loaded.corpus.name, tuple(drafts))
        path = config.out_dir / f"suggested_{role}.jsonl"
        path.write_text(serialize_annotations(draft_corpus), encoding="utf-8")
    print(f"draft annotations written to {config.out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve

def cmd_serve(
    config: RunConfig,
    port: int,
    corpus: str,
    annotator: str,
    static_dir: Optional[Path],
    host: str = "127.0.0.1",
) -> int:
    from .service import AnnotationService, serve

    project = _load(config)
    service = AnnotationService(
        project, corpus=corpus, annotator=annotator, static_dir=static_dir
    )
    try:
        httpd = serve(service, host=host, port=port)
    except OSError as exc:
        print(f"error: cannot bind port {port}: {exc}")
        return EXIT_ENV
    print(f"annotation service for {service.loaded.corpus.name} on http://{host}:{httpd.server_port}/")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
        service.flush()
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relcorpus",
        description="Corpus analytics and annotation tooling for translation relations.",
    )
    parser.add_argument("--version", action="version", version=f"relcorpus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, out_default=None) -> None:
        p.add_argument("--manifest", required=True, type=Path, help="project manifest (INI)")
        p.add_argument(
            "--out",
            type=Path,
            default=out_default,
            required=out_default is None,
            help="output directory",
        )
        p.add_argument("--decimals", type=int, default=3, help="percentage decimals (0-6)")

    p = sub.add_parser("validate", help="cross-check a project and report violations")
    common(p, out_default=Path("."))
    p.add_argument("--require-ling", action="store_true", help="fail when CoNLL-U files are absent")

    p = sub.add_parser("stats", help="write distribution/genre/token tables for both corpora")
    common(p)

    p = sub.add_parser("diff", help="write cross-corpus discrepancy and edit-distance series")
    common(p)
    p.add_argument(
        "--denominator",
        choices=("reference", "candidate"),
        default="reference",
        help="discrepancy denominator policy",
    )

    p = sub.add_parser("subcat", help="write sub-category profile tables")
    common(p)
    p.add_argument("--top-k", type=int, default=None, help="aggregate profile tails into 'others'")
    p.add_argument("--ne-spans", type=Path, default=None, help="named-entity span file")
    p.add_argument("--fixed-expressions", type=Path, default=None, help="fixed-expression lexicon")
    p.add_argument("--hypernyms", type=Path, default=None, help="hypernym lexicon (TSV)")

    p = sub.add_parser("suggest", help="write rule-based draft annotations from alignments")
    common(p)

    p = sub.add_parser("serve", help="run the annotation service")
    common(p, out_default=Path("."))
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--corpus", choices=("reference", "candidate"), default="reference")
    p.add_argument("--annotator", default="anonymous")
    p.add_argument("--static", type=Path, default=None, help="UI bundle directory")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            manifest_path=args.manifest,
            out_dir=args.out,
            denominator=getattr(args, "denominator", "reference"),
            decimals=args.decimals,
            top_k=getattr(args, "top_k", None),
            ne_spans_path=getattr(args, "ne_spans", None),
            fixed_expressions_path=getattr(args, "fixed_expressions", None),
            hypernyms_path=getattr(args, "hypernyms", None),
        )
    except ValueError as exc:
        print(f"error: {exc}")
        return EXIT_CONFIG
    if not config.manifest_path.is_file():
        print(f"error: manifest not readable: {config.manifest_path}")
        return EXIT_CONFIG
    try:
        if args.command == "validate":
            return cmd_validate(config, require_ling=args.require_ling)
        if args.command == "stats":
            return cmd_stats(config)
        if args.command == "diff":
            return cmd_diff(config)
        if args.command == "subcat":
            return cmd_subcat(config)
        if args.command == "suggest":
            return cmd_suggest(config)
        if args.command == "serve":
            return cmd_serve(
                config,
                port=args.port,
                corpus=args.corpus,
                annotator=args.annotator,
                static_dir=args.static,
                host=args.host,
            )
    except (ParseError, ProjectError) as exc:
        print(f"error: {exc}")
        code = getattr(exc, "code", "")
        return EXIT_CONFIG if code in _CONFIG_ERROR_CODES else EXIT_DATA
    except AnnotationError as exc:
        print(f"error: {exc}")
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}")
        return EXIT_ENV
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
