"""HTTP query service over a completed analysis bundle.

All endpoints live under ``/api/v1``. Reads are pure functions of the
current revision; re-pruning at a new operating point is the single
mutating action, implemented as a copy-on-write revision swap so
in-flight readers keep the revision they started with. Every response
carries the revision hash in the ``X-Revision`` header.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from fastapi import APIRouter, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .bundle import AnalysisBundle
from .errors import (
    EmptyQueryError,
    InvalidSpecError,
    InvalidZetaError,
    NoVocabularyMatchError,
)
from .queries import corpus_stats, search_topics, trace, word_cloud
from .relatedness import MEASURES, TopicNode

API_PREFIX = "/api/v1"


class ApiError(Exception):
    """Error with a stable machine code from the documented closed set."""

    CODES = ("unknown_topic", "bad_param", "empty_query", "no_vocab_match")

    def __init__(self, status: int, code: str, message: str):
        assert code in self.CODES
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass(frozen=True)
class Revision:
    bundle: AnalysisBundle
    hash: str

    @classmethod
    def of(cls, bundle: AnalysisBundle) -> "Revision":
        return cls(bundle=bundle, hash=bundle.revision_hash)


class RevisionStore:
    """Single-writer, many-reader holder of the current revision."""

    def __init__(self, bundle: AnalysisBundle):
        self._current = Revision.of(bundle)
        self._write_lock = threading.Lock()

    @property
    def current(self) -> Revision:
        return self._current

    def reprune(self, measure: str, zeta: float) -> Revision:
        with self._write_lock:
            new_bundle = self._current.bundle.reprune(measure, zeta)
            revision = Revision.of(new_bundle)
            self._current = revision
            return revision


class RepruneRequest(BaseModel):
    measure: str
    zeta: float


def _topic_summary(bundle: AnalysisBundle, node: TopicNode, n_terms: int = 10) -> dict:
    topic = bundle.get_topic(node)
    terms = bundle.vocabulary.terms
    top = topic.top_terms(n_terms)
    events = bundle.events_for(node)
    return {
        "epoch": node.epoch,
        "id": node.topic_id,
        "mass": topic.mass,
        "token_count": topic.token_count,
        "top_terms": [{"term": terms[i], "weight": float(topic.term_dist[i])} for i in top],
        "labels": sorted(events.labels) if events else [],
    }


def create_app(bundle: AnalysisBundle | None) -> FastAPI:
    """Build the service; ``bundle=None`` yields an app for schema export only."""
    app = FastAPI(
        title="topicflow query service",
        version="1.0.0",
        description="Read-only exploration of a temporal topic analysis, "
        "plus re-pruning at a chosen CDF operating point.",
    )
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Revision"],
    )
    store = RevisionStore(bundle) if bundle is not None else None
    router = APIRouter(prefix=API_PREFIX)

    def current() -> Revision:
        assert store is not None, "service started without a bundle"
        return store.current

    def _node(rev: Revision, epoch: int, topic_id: int) -> TopicNode:
        node = TopicNode(epoch, topic_id)
        if not rev.bundle.has_node(node):
            raise ApiError(404, "unknown_topic", f"no topic ({epoch}, {topic_id})")
        return node

    def _stamp(response: Response, rev: Revision) -> None:
        response.headers["X-Revision"] = rev.hash

    @app.exception_handler(ApiError)
    async def _api_error_handler(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"status": 400, "code": "bad_param", "message": str(exc.errors()[:1])},
        )

    @router.get("/health")
    def health(response: Response):
        rev = current()
        _stamp(response, rev)
        return {"status": "ok", "bundle_hash": rev.bundle.content_hash}

    @router.get("/epochs")
    def epochs(response: Response):
        rev = current()
        _stamp(response, rev)
        return [
            {
                "index": s.index,
                "start": s.start.isoformat(),
                "end": s.end.isoformat(),
                "documents": s.document_count,
                "topics": len(m.topics),
            }
            for s, m in zip(rev.bundle.slices, rev.bundle.models)
        ]

    @router.get("/epochs/{epoch}/topics")
    def epoch_topics(epoch: int, response: Response):
        rev = current()
        if not (0 <= epoch < len(rev.bundle.models)):
            raise ApiError(404, "unknown_topic", f"no epoch {epoch}")
        _stamp(response, rev)
        model = rev.bundle.models[epoch]
        return [_topic_summary(rev.bundle, TopicNode(epoch, t.id)) for t in model.topics]

    @router.get("/topics/{epoch}/{topic_id}")
    def topic_detail(epoch: int, topic_id: int, response: Response):
        rev = current()
        node = _node(rev, epoch, topic_id)
        _stamp(response, rev)
        return _topic_summary(rev.bundle, node, n_terms=20)

    @router.get("/topics/{epoch}/{topic_id}/wordcloud")
    def wordcloud(epoch: int, topic_id: int, response: Response, n: int = 40):
        rev = current()
        node = _node(rev, epoch, topic_id)
        try:
            pairs = word_cloud(rev.bundle, node, n)
        except InvalidSpecError as exc:
            raise ApiError(400, "bad_param", str(exc)) from None
        _stamp(response, rev)
        return {
            "epoch": epoch,
            "id": topic_id,
            "terms": [{"term": t, "weight": w} for t, w in pairs],
        }

    @router.get("/topics/{epoch}/{topic_id}/trace")
    def trace_endpoint(
        epoch: int,
        topic_id: int,
        response: Response,
        direction: str = "backward",
        measure: str = "bhattacharyya",
        depth: int = 1_000_000,
    ):
        rev = current()
        node = _node(rev, epoch, topic_id)
        try:
            dag = trace(rev.bundle, node, direction=direction, measure=measure, max_depth=depth)
        except InvalidSpecError as exc:
            raise ApiError(400, "bad_param", str(exc)) from None
        _stamp(response, rev)
        return dag.to_jsonable()

    @router.get("/graph")
    def graph(response: Response, measure: str = "bhattacharyya", surviving: bool = False):
        rev = current()
        if measure not in MEASURES:
            raise ApiError(400, "bad_param", f"unknown measure {measure!r}")
        _stamp(response, rev)
        payload = rev.bundle.graphs[measure].to_jsonable()
        if surviving:
            payload["edges"] = [e for e in payload["edges"] if e["surviving"]]
        return payload

    @router.get("/events")
    def events(response: Response):
        rev = current()
        _stamp(response, rev)
        return [e.to_jsonable() for e in rev.bundle.events]

    @router.get("/stats")
    def stats(response: Response):
        rev = current()
        _stamp(response, rev)
        return corpus_stats(rev.bundle).to_jsonable()

    @router.get("/search")
    def search(response: Response, q: str = "", limit: int = 20):
        rev = current()
        if limit < 1:
            raise ApiError(400, "bad_param", "limit must be >= 1")
        try:
            hits = search_topics(rev.bundle, q, limit)
        except EmptyQueryError as exc:
            raise ApiError(400, "empty_query", str(exc)) from None
        except NoVocabularyMatchError as exc:
            raise ApiError(400, "no_vocab_match", str(exc)) from None
        _stamp(response, rev)
        return [h.to_jsonable() for h in hits]

    @router.post("/reprune")
    def reprune(body: RepruneRequest, response: Response):
        assert store is not None
        if body.measure not in MEASURES:
            raise ApiError(400, "bad_param", f"unknown measure {body.measure!r}")
        if not (0.0 <= body.zeta <= 1.0):
            raise ApiError(400, "bad_param", "zeta must be in [0, 1]")
        try:
            rev = store.reprune(body.measure, body.zeta)
        except InvalidZetaError as exc:
            raise ApiError(400, "bad_param", str(exc)) from None
        _stamp(response, rev)
        surviving = len(rev.bundle.graphs[body.measure].surviving_edges())
        return {"revision_hash": rev.hash, "surviving_edge_count": surviving}

    app.include_router(router)
    return app


def dump_openapi(path: str) -> None:
    """Write the service's OpenAPI description to a JSON file."""
    import json

    app = create_app(None)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(app.openapi(), fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    import sys

    dump_openapi(sys.argv[1] if len(sys.argv) > 1 else "openapi.json")
