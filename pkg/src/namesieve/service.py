"""HTTP facade over one corpus and one selection session.

Handlers contain no selection logic: every response is assembled from the
cluster and session engines, so the web UI and the terminal dialog see the
same numbers by construction. The corpus is read-only; the session is the
only mutable resource. Mutating requests must echo the corpus hash and are
serialized by a lock; the session file is rewritten after every mutation.
"""

from __future__ import annotations

import math
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .cli import _format_distance, _ranked_members, _source_display
from .records import Corpus
from .session import (ACCEPTED, MODES, SESSION_SCHEMA_VERSION,
                      SelectionSession, auto_reject_beyond_cutoff,
                      count_beyond_cutoff, decide, decide_all_remaining,
                      distances_to_selected, export_selection, load_session,
                      presentation_order, save_session, selection_summary,
                      set_cutoff, set_mode)


class DecisionBody(BaseModel):
    verdict: str
    corpus_hash: str


class BulkDecisionBody(BaseModel):
    verdict: str
    corpus_hash: str


class ModeBody(BaseModel):
    mode: str
    corpus_hash: str


class CutoffBody(BaseModel):
    cutoff: float
    corpus_hash: str


class HashBody(BaseModel):
    corpus_hash: str


class SessionStore:
    """One session plus the lock that serializes access to it."""

    def __init__(self, session: SelectionSession, path=None):
        self.session = session
        self.path = Path(path) if path else None
        self.lock = threading.RLock()

    def save(self) -> None:
        if self.path is not None:
            save_session(self.session, self.path)

    @classmethod
    def open(cls, corpus: Corpus, clusters, path=None) -> "SessionStore":
        path = Path(path) if path else None
        if path is not None and path.exists():
            session = load_session(path, corpus_hash=corpus.content_hash())
        else:
            session = SelectionSession.fresh(corpus, clusters,
                                             name=corpus.query_name or "")
        return cls(session, path)


def _paper_view(record) -> dict:
    return {
        "id": record.id,
        "title": record.display.get("title", ""),
        "authors": list(record.display.get("authors", [])),
        "source": _source_display(record),
        "addresses": list(record.display.get("addresses", [])),
        "year": record.year_int(),
        "citations": record.citations,
    }


def create_app(corpus: Corpus, matrix, clusters, session_path=None,
               static_dir=None) -> FastAPI:
    app = FastAPI(title="namesieve", version="0.1.0")
    corpus_hash = corpus.content_hash()
    by_id = {c.id: c for c in clusters}
    store = SessionStore.open(corpus, clusters, session_path)

    def envelope(**extra) -> dict:
        body = {
            "schema_version": SESSION_SCHEMA_VERSION,
            "corpus_hash": corpus_hash,
            "presentation_mode": store.session.presentation_mode,
            "cutoff": store.session.cutoff,
        }
        body.update(extra)
        return body

    def check_hash(sent: str) -> None:
        if sent != corpus_hash:
            raise HTTPException(status_code=409,
                                detail="corpus hash mismatch: reload")

    def check_id(cluster_id: int):
        cluster = by_id.get(cluster_id)
        if cluster is None:
            raise HTTPException(status_code=404,
                                detail=f"no cluster {cluster_id}")
        return cluster

    def cluster_view(cluster, dist) -> dict:
        value = dist[cluster.id]
        return {
            "id": cluster.id,
            "paper_count": cluster.paper_count,
            "citations": cluster.total_citations,
            "period": cluster.period,
            "status": store.session.status(cluster.id),
            "distance_to_selected": None if math.isinf(value) else value,
            "distance_display": _format_distance(value),
            "representative_id": cluster.representative_id,
        }

    @app.get("/api/meta")
    def meta():
        with store.lock:
            return envelope(
                query_name=corpus.query_name,
                source_format=corpus.source_format,
                n_records=len(corpus),
                n_clusters=len(clusters),
                modes=list(MODES),
            )

    @app.get("/api/clusters")
    def list_clusters():
        with store.lock:
            order = presentation_order(store.session, clusters, matrix)
            dist = distances_to_selected(store.session, clusters, matrix)
            return envelope(
                clusters=[cluster_view(by_id[cid], dist) for cid in order])

    @app.get("/api/clusters/{cluster_id}")
    def cluster_detail(cluster_id: int):
        cluster = check_id(cluster_id)
        with store.lock:
            dist = distances_to_selected(store.session, clusters, matrix)
            members = [_paper_view(corpus.records[rec_id])
                       for rec_id in _ranked_members(cluster, corpus)]
            view = cluster_view(cluster, dist)
            view["members"] = members
            return envelope(cluster=view)

    @app.post("/api/clusters/{cluster_id}/decision")
    def post_decision(cluster_id: int, body: DecisionBody):
        check_id(cluster_id)
        with store.lock:
            check_hash(body.corpus_hash)
            try:
                decide(store.session, cluster_id, body.verdict)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            store.save()
            return envelope(cluster_id=cluster_id,
                            status=store.session.status(cluster_id))

    @app.post("/api/decide-all")
    def post_decide_all(body: BulkDecisionBody):
        with store.lock:
            check_hash(body.corpus_hash)
            try:
                count = decide_all_remaining(store.session, body.verdict)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            store.save()
            return envelope(count=count)

    @app.post("/api/mode")
    def post_mode(body: ModeBody):
        with store.lock:
            check_hash(body.corpus_hash)
            try:
                set_mode(store.session, body.mode)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            store.save()
            return envelope()

    @app.post("/api/cutoff")
    def post_cutoff(body: CutoffBody):
        with store.lock:
            check_hash(body.corpus_hash)
            try:
                set_cutoff(store.session, body.cutoff)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            store.save()
            return envelope()

    @app.get("/api/auto-reject/preview")
    def preview_auto_reject(cutoff: float = None):
        with store.lock:
            try:
                count = count_beyond_cutoff(store.session, clusters, matrix,
                                            cutoff=cutoff)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return envelope(count=count)

    @app.post("/api/auto-reject")
    def post_auto_reject(body: HashBody):
        with store.lock:
            check_hash(body.corpus_hash)
            try:
                count = auto_reject_beyond_cutoff(store.session, clusters,
                                                  matrix)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            store.save()
            return envelope(count=count)

    @app.get("/api/selection")
    def selection():
        with store.lock:
            accepted_ids = store.session.ids_with(ACCEPTED)
            record_ids = sorted(
                store.session.accepted_record_ids(clusters))
            records = [corpus.records[rec_id] for rec_id in record_ids]
            summary = selection_summary(records) if records else None
            return envelope(accepted_cluster_ids=accepted_ids,
                            summary=summary,
                            papers=[_paper_view(rec) for rec in records])

    @app.get("/api/export", response_class=PlainTextResponse)
    def export():
        with store.lock:
            try:
                _, _, text = export_selection(store.session, corpus, clusters)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return text

    @app.get("/api/session/log")
    def session_log():
        with store.lock:
            return envelope(log=list(store.session.log))

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="ui")

    return app
