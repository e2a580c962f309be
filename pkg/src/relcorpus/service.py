"""HTTP backend for the annotation workbench.

Serves sentences, alignments, suggestions, and taxonomy metadata; persists
human edits with optimistic per-sentence revisions. State lives in memory
and is flushed to the project's annotation file (atomic rewrite), so a fresh
project load reproduces exactly what was accepted.

Endpoints (JSON, UTF-8):
  GET  /api/health                     -> "ok"
  GET  /api/project                    -> manifest summary + per-genre progress
  GET  /api/palette                    -> relation -> display color
  GET  /api/sentences/{id}             -> tokens, units, suggestions, revision
  PUT  /api/sentences/{id}/units       -> atomic unit-list replace (409 on stale)
  POST /api/sentences/{id}/suggest     -> recompute rule suggestions
  POST /api/flush                      -> persist all dirty sentences
Anything outside /api/ serves the optional static UI bundle.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from . import __version__
from .ingest import LoadedProject, ParseError, _record_to_unit, serialize_annotations
from .model import (
    Corpus,
    RelationLabel,
    SentencePair,
    validate,
)
from .preannotate import (
    suggest_lexical_shift,
    suggest_transposition,
    suggest_unaligned,
)

#: Annotatable labels with their drop-list colors. transposition and
#: modulation_transposition share green on purpose (the workbench overlays a
#: pattern to tell them apart).
PALETTE: dict[str, dict[str, str]] = {
    "literal": {"name": "yellow", "hex": "#f5c518"},
    "equivalence": {"name": "orange", "hex": "#e8761a"},
    "transposition": {"name": "green", "hex": "#2e8b57"},
    "modulation": {"name": "light blue", "hex": "#7ec8e3"},
    "modulation_transposition": {"name": "green", "hex": "#2e8b57"},
    "generalization": {"name": "brown", "hex": "#8b5a2b"},
    "particularization": {"name": "red", "hex": "#d0312d"},
    "figurative": {"name": "pink", "hex": "#f49ac2"},
    "lexical_shift": {"name": "purple", "hex": "#8e44ad"},
    "uncertain": {"name": "light red", "hex": "#f1948a"},
    "translation_error": {"name": "deep blue", "hex": "#1f3a93"},
}

PALETTE_COLLISION = ("transposition", "modulation_transposition")


def _unit_payload(unit) -> dict:
    payload = {
        "src": list(unit.src),
        "tgt": list(unit.tgt),
        "relation": unit.relation.value,
    }
    if unit.sub is not None:
        payload["sub"] = unit.sub.value
        payload["provenance"] = unit.sub.provenance
    return payload


def _suggestion_payload(suggestion) -> dict:
    payload = _unit_payload(suggestion.unit)
    payload["confidence"] = suggestion.confidence
    payload["ruleId"] = suggestion.rule_id
    return payload


@dataclass
class SentenceState:
    pair: SentencePair
    revision: int = 0


class AnnotationService:
    """Mutable project state behind the HTTP handler. Writes are serialized
    per service; reads take the same lock briefly (correctness over throughput
    at this corpus scale)."""

    def __init__(
        self,
        project: LoadedProject,
        corpus: str = "reference",
        annotator: str = "anonymous",
        static_dir: Optional[Path] = None,
    ):
        if corpus not in ("reference", "candidate"):
            raise ValueError(f"corpus must be reference or candidate, got {corpus!r}")
        self.project = project
        self.role = corpus
        self.loaded = project.reference if corpus == "reference" else project.candidate
        self.annotator = annotator
        self.static_dir = Path(static_dir) if static_dir else None
        self._states = {
            pair.id: SentenceState(pair) for pair in self.loaded.corpus
        }
        self._order = [pair.id for pair in self.loaded.corpus]
        self._edges = {
            pair.id: edges for pair, edges in zip(self.loaded.corpus, self.loaded.edges)
        }
        self._dirty: set[str] = set()
        self._lock = threading.RLock()

    # -- queries ------------------------------------------------------------

    def project_summary(self) -> dict:
        with self._lock:
            genres: dict[str, dict[str, int]] = {}
            for sid in self._order:
                pair = self._states[sid].pair
                bucket = genres.setdefault(
                    pair.genre, {"total": 0, "complete": 0, "draft": 0}
                )
                bucket["total"] += 1
                state = "complete" if validate(pair, "complete").ok else "draft"
                bucket[state] += 1
            return {
                "name": self.project.manifest.name,
                "corpus": self.loaded.corpus.name,
                "role": self.role,
                "annotator": self.annotator,
                "sentenceCount": len(self._order),
                "sentenceIds": list(self._order),
                "genres": genres,
                "version": __version__,
            }

    def sentence_payload(self, sid: str) -> Optional[dict]:
        with self._lock:
            state = self._states.get(sid)
            if state is None:
                return None
            pair = state.pair
            return {
                "id": sid,
                "genre": pair.genre,
                "revision": state.revision,
                "state": "complete" if validate(pair, "complete").ok else "draft",
                "srcTokens": list(pair.src_tokens),
                "tgtTokens": list(pair.tgt_tokens),
                "units": [_unit_payload(u) for u in pair.units],
                "suggestions": [_suggestion_payload(s) for s in self.suggestions(pair)],
                "edges": [list(edge) for edge in self._edges.get(sid, [])],
            }

    def suggestions(self, pair: SentencePair) -> list:
        """Suggestions that would change the current state: uncovered-run
        units plus rule relabels of still-literal units."""
        out = list(suggest_unaligned(pair, pair.units))
        for unit in pair.units:
            if unit.relation is not RelationLabel.LITERAL:
                continue
            shift = suggest_lexical_shift(pair, unit)
            if shift is not None:
                out.append(shift)
                continue
            transposition = suggest_transposition(pair, unit)
            if transposition is not None:
                out.append(transposition)
        return out

    # -- mutations ----------------------------------------------------------

    def put_units(self, sid: str, body: dict) -> tuple[int, dict]:
        with self._lock:
            state = self._states.get(sid)
            if state is None:
                return 404, {"error": f"unknown sentence {sid}"}
            if not isinstance(body, dict) or "revision" not in body or "units" not in body:
                return 400, {"error": "body must carry revision and units"}
            if body["revision"] != state.revision:
                return 409, {
                    "error": "stale revision",
                    "expected": state.revision,
                    "got": body["revision"],
                }
            try:
                units = tuple(
                    _record_to_unit({"id": sid, **record}, lineno)[1]
                    for lineno, record in enumerate(body["units"], start=1)
                )
            except ParseError as exc:
                return 400, {"error": str(exc), "code": exc.code}
            except (TypeError, KeyError) as exc:
                return 400, {"error": f"malformed unit record: {exc}"}
            candidate = SentencePair(
                id=sid,
                src_tokens=state.pair.src_tokens,
                tgt_tokens=state.pair.tgt_tokens,
                units=units,
                genre=state.pair.genre,
                src_ling=state.pair.src_ling,
                tgt_ling=state.pair.tgt_ling,
            )
            report = validate(candidate, "draft")
            if not report.ok:
                return 400, {
                    "error": "draft validation failed",
                    "violations": [
                        {"code": v.code, "locus": v.locus, "message": v.message}
                        for v in report
                    ],
                }
            state.pair = candidate
            state.revision += 1
            self._dirty.add(sid)
            return 200, {
                "revision": state.revision,
                "state": "complete" if validate(candidate, "complete").ok else "draft",
            }

    def flush(self) -> dict:
        with self._lock:
            flushed = len(self._dirty)
            if flushed:
                corpus = Corpus(
                    self.loaded.corpus.name,
                    tuple(self._states[sid].pair for sid in self._order),
                )
                path = self.loaded.files.annotations
                tmp = path.with_suffix(path.suffix + ".tmp")
                tmp.write_text(serialize_annotations(corpus), encoding="utf-8")
                os.replace(tmp, path)
                self._dirty.clear()
            return {"flushed": flushed}


_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>relcorpus annotation service</title></head>
<body><h1>relcorpus annotation service</h1>
<p>No UI bundle is configured. The JSON API lives under <code>/api/</code>:
<code>/api/health</code>, <code>/api/project</code>, <code>/api/palette</code>,
<code>/api/sentences/&lt;id&gt;</code>.</p></body></html>
"""

_STATIC_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


def make_handler(service: AnnotationService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # keep test output quiet
            pass

        def _send(self, status: int, body: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status: int, payload) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self._send(status, body, "application/json; charset=utf-8")

        def _read_json(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                return None
            return json.loads(raw.decode("utf-8"))

        def _serve_static(self, path: str) -> None:
            if service.static_dir is None:
                self._send(200, _PLACEHOLDER_PAGE.encode("utf-8"), "text/html; charset=utf-8")
                return
            rel = path.lstrip("/") or "index.html"
            target = (service.static_dir / rel).resolve()
            try:
                target.relative_to(service.static_dir.resolve())
            except ValueError:
                self._send_json(404, {"error": "not found"})
                return
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                # single-page app fallback
                target = service.static_dir / "index.html"
                if not target.is_file():
                    self._send_json(404, {"error": "not found"})
                    return
            content_type = _STATIC_TYPES.get(target.suffix, "application/octet-stream")
            self._send(200, target.read_bytes(), content_type)

        def do_GET(self) -> None:
            path = self.path.split("?", 1)[0]
            if path == "/api/health":
                self._send(200, b"ok", "text/plain; charset=utf-8")
            elif path == "/api/project":
                self._send_json(200, service.project_summary())
            elif path == "/api/palette":
                self._send_json(
                    200, {"colors": PALETTE, "collision": list(PALETTE_COLLISION)}
                )
            elif path.startswith("/api/sentences/"):
                sid = path[len("/api/sentences/") :]
                payload = service.sentence_payload(sid)
                if payload is None:
                    self._send_json(404, {"error": f"unknown sentence {sid}"})
                else:
                    self._send_json(200, payload)
            elif path.startswith("/api/"):
                self._send_json(404, {"error": "not found"})
            else:
                self._serve_static(path)

        def do_PUT(self) -> None:
            path = self.path.split("?", 1)[0]
            if path.startswith("/api/sentences/") and path.endswith("/units"):
                sid = path[len("/api/sentences/") : -len("/units")]
                try:
                    body = self._read_json()
                except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                    self._send_json(400, {"error": f"bad JSON body: {exc}"})
                    return
                status, payload = service.put_units(sid, body or {})
                self._send_json(status, payload)
            else:
                self._send_json(404, {"error": "not found"})

        def do_POST(self) -> None:
            path = self.path.split("?", 1)[0]
            if path == "/api/flush":
                self._send_json(200, service.flush())
            elif path.startswith("/api/sentences/") and path.endswith("/suggest"):
                sid = path[len("/api/sentences/") : -len("/suggest")]
                with service._lock:
                    state = service._states.get(sid)
                    if state is None:
                        self._send_json(404, {"error": f"unknown sentence {sid}"})
                        return
                    suggestions = [
                        _suggestion_payload(s) for s in service.suggestions(state.pair)
                    ]
                self._send_json(200, {"suggestions": suggestions})
            else:
                self._send_json(404, {"error": "not found"})

    return Handler


def serve(service: AnnotationService, host: str = "127.0.0.1", port: int = 8765):
    """Build the HTTP server (bind only; call serve_forever on the result)."""
    return ThreadingHTTPServer((host, port), make_handler(service))
