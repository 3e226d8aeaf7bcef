"""Read-only JSON HTTP API over a valence index.

Endpoints (GET only):

``/health``
    ``{"api_version", "status", "n_sentences", "n_annosets", "corpus_fingerprint", "index_fingerprint"}``
``/vp?vp=FE.PT.GF+FE.PT.GF[&frame=NAME][&limit=N][&offset=M]``
    Lexical units with an annotation set loosely matching the pattern:
    ``{"api_version", "query", "frame", "total", "offset", "limit",
    "results": [{"lu_id", "lu", "lemma", "pos", "annosets": [ids]}]}``,
    results ordered by lemma. 400 on a malformed pattern or paging
    parameter, 404 when the frame or an FE cannot be resolved, 422 when
    several frames own all the FEs and no ``frame`` is given.
``/lu/{id}`` and ``/annoset/{id}``
    The record, or 404.

Error bodies are ``{"api_version", "error": {"status", "message"}}``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Dict, List, Optional, Tuple
from urllib.parse import parse_qs, urlsplit

from .errors import ParseError
from .fndata import Corpus, corpus_stats, export_text
from .valence import (
    ValenceIndex,
    ValencePattern,
    build_index,
    compatible_lexical_units,
    frames_owning,
    matching_entries,
    parse_pattern,
)

logger = logging.getLogger(__name__)

API_VERSION = 1


def dump(doc) -> bytes:
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")


class HttpError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass(frozen=True)
class QueryRequest:
    vp: str
    frame: Optional[str] = None
    limit: Optional[int] = None
    offset: int = 0

    @classmethod
    def from_params(cls, params: Dict[str, List[str]]) -> "QueryRequest":
        def one(name):
            values = params.get(name)
            return values[-1] if values else None

        vp = one("vp")
        if not vp or not vp.strip():
            raise HttpError(400, "missing vp parameter")
        try:
            limit = int(one("limit")) if one("limit") is not None else None
            offset = int(one("offset")) if one("offset") is not None else 0
        except ValueError:
            raise HttpError(400, "limit and offset must be integers") from None
        if limit is not None and limit < 1:
            raise HttpError(400, "limit must be >= 1")
        if offset < 0:
            raise HttpError(400, "offset must be >= 0")
        return cls(vp.strip(), one("frame"), limit, offset)


def resolve_pattern(req: QueryRequest, corpus: Corpus) -> ValencePattern:
    try:
        units = parse_pattern(req.vp, -1).units
    except ParseError as exc:
        raise HttpError(400, exc.reason) from None
    fe_names = [u.fe_name for u in units]
    if req.frame is not None:
        frame = corpus.frames_by_name.get(req.frame)
        if frame is None:
            raise HttpError(404, f"unknown frame {req.frame!r}")
        missing = [n for n in fe_names if not frame.has_fe(n)]
        if missing:
            raise HttpError(404, f"frame {frame.name} has no frame element {missing[0]!r}")
        return ValencePattern(units, frame.id)
    owners = frames_owning(corpus, fe_names)
    if not owners:
        raise HttpError(404, f"no frame owns all of {sorted(set(fe_names))}")
    if len(owners) > 1:
        raise HttpError(422, f"ambiguous frame: {[f.name for f in owners]}; pass frame=")
    return ValencePattern(units, owners[0].id)


def vp_document(
    idx: ValenceIndex, pattern: ValencePattern, limit: Optional[int] = None, offset: int = 0
) -> dict:
    """Serializable answer for a pattern query; the /vp endpoint returns exactly this."""
    corpus = idx.corpus
    lu_ids = compatible_lexical_units(idx, pattern)
    annosets: Dict[int, List[int]] = {i: [] for i in lu_ids}
    for e in matching_entries(idx, pattern):
        annosets[e.lu_id].append(e.annoset_id)
    ordered = sorted(
        lu_ids, key=lambda i: (corpus.lexical_units[i].lemma, corpus.lexical_units[i].pos.value, i)
    )
    page = ordered[offset : offset + limit if limit is not None else None]
    return {
        "api_version": API_VERSION,
        "query": str(pattern),
        "frame": corpus.frames[pattern.frame_id].name,
        "total": len(ordered),
        "offset": offset,
        "limit": limit,
        "results": [
            {
                "lu_id": i,
                "lu": corpus.lexical_units[i].name,
                "lemma": corpus.lexical_units[i].lemma,
                "pos": corpus.lexical_units[i].pos.value,
                "annosets": sorted(annosets[i]),
            }
            for i in page
        ],
    }


def index_fingerprint(idx: ValenceIndex) -> str:
    h = hashlib.sha256()
    for (fid, sig), entries in sorted(idx.buckets.items(), key=lambda kv: (kv[0][0], [str(u) for u in kv[0][1]])):
        h.update(f"{fid}|{' '.join(str(u) for u in sig)}|".encode())
        h.update(",".join(f"{e.lu_id}:{e.annoset_id}" for e in entries).encode())
        h.update(b"\n")
    return h.hexdigest()


@dataclass(frozen=True)
class _Snapshot:
    corpus: Corpus
    index: ValenceIndex
    corpus_fingerprint: str
    index_fingerprint: str


class ValenceService:
    """Request handling independent of the HTTP transport.

    State lives in one immutable snapshot; :meth:`reload` swaps it whole,
    so concurrent requests always see a consistent corpus and index.
    """

    def __init__(self, corpus: Corpus):
        self._lock = threading.Lock()
        self._snap = self._build(corpus)

    @staticmethod
    def _build(corpus: Corpus) -> _Snapshot:
        idx = build_index(corpus)
        digest = hashlib.sha256(export_text(corpus).encode("utf-8")).hexdigest()
        return _Snapshot(corpus, idx, digest, index_fingerprint(idx))

    def reload(self, corpus: Corpus) -> None:
        snap = self._build(corpus)
        with self._lock:
            self._snap = snap

    def handle(self, path: str) -> Tuple[int, bytes]:
        snap = self._snap
        parts = urlsplit(path)
        route = parts.path.rstrip("/") or "/"
        try:
            if route == "/health":
                doc = self.health(snap)
            elif route == "/vp":
                req = QueryRequest.from_params(parse_qs(parts.query))
                pattern = resolve_pattern(req, snap.corpus)
                doc = vp_document(snap.index, pattern, req.limit, req.offset)
            elif route.startswith("/lu/"):
                doc = self.lu(snap, route[len("/lu/"):])
            elif route.startswith("/annoset/"):
                doc = self.annoset(snap, route[len("/annoset/"):])
            else:
                raise HttpError(404, f"no route {route}")
        except HttpError as exc:
            return exc.status, dump(
                {"api_version": API_VERSION, "error": {"status": exc.status, "message": exc.message}}
            )
        return 200, dump(doc)

    @staticmethod
    def health(snap: _Snapshot) -> dict:
        stats = corpus_stats(snap.corpus)
        return {
            "api_version": API_VERSION,
            "status": "ok",
            "n_sentences": stats.n_sentences,
            "n_annosets": stats.n_annosets,
            "corpus_fingerprint": snap.corpus_fingerprint,
            "index_fingerprint": snap.index_fingerprint,
        }

    @staticmethod
    def _id(text: str) -> int:
        try:
            return int(text)
        except ValueError:
            raise HttpError(404, f"bad id {text!r}") from None

    def lu(self, snap: _Snapshot, key: str) -> dict:
        lu = snap.corpus.lexical_units.get(self._id(key))
        if lu is None:
            raise HttpError(404, f"no lexical unit {key}")
        return {
            "api_version": API_VERSION,
            "lu_id": lu.id,
            "lu": lu.name,
            "lemma": lu.lemma,
            "pos": lu.pos.value,
            "frame": snap.corpus.frames[lu.frame_id].name,
            "annosets": sorted(a.id for a in snap.corpus.annotation_sets.values() if a.lu_id == lu.id),
        }

    def annoset(self, snap: _Snapshot, key: str) -> dict:
        a = snap.corpus.annotation_sets.get(self._id(key))
        if a is None:
            raise HttpError(404, f"no annotation set {key}")
        pattern = snap.index.pattern_of(a.id)
        return {
            "api_version": API_VERSION,
            "annoset_id": a.id,
            "sentence_id": a.sentence_id,
            "text": snap.corpus.sentences[a.sentence_id].text,
            "lu_id": a.lu_id,
            "frame": snap.corpus.frames[a.frame_id].name,
            "targets": [list(t) for t in a.target_spans],
            "labels": [
                {k: v for k, v in (("fe", lab.fe_name), ("start", lab.start), ("end", lab.end),
                                   ("pt", lab.pt), ("gf", lab.gf),
                                   ("ni", lab.ni_kind.value if lab.ni_kind else None)) if v is not None}
                for lab in a.labels
            ],
            "pattern": str(pattern) if pattern is not None else None,
        }


def _handler_for(service: ValenceService):
    class Handler(BaseHTTPRequestHandler):
        server_version = "framekit"

        def do_GET(self):
            status, body = service.handle(self.path)
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, fmt, *args):
            logger.debug("%s " + fmt, self.address_string(), *args)

    return Handler


def make_server(service: ValenceService, host: str = "127.0.0.1", port: int = 8080) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), _handler_for(service))


def serve(corpus: Corpus, host: str = "127.0.0.1", port: int = 8080) -> None:
    server = make_server(ValenceService(corpus), host, port)
    logger.info("serving on http://%s:%d", host, server.server_address[1])
    try:
        server.serve_forever()
    finally:
        server.server_close()
