"""HTTP API: node search, summarize jobs, paged cluster members.

The graph is loaded once and shared read-only across requests; summarize
jobs run in a small worker pool and results are cached per
(source, config). Endpoints answer 503 until the graph is ready.
"""
from __future__ import annotations

import hashlib
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from contextlib import asynccontextmanager

from fastapi import Body, FastAPI, HTTPException, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .document import build_summary_document, config_echo, to_json_bytes
from .errors import (
    DimensionError,
    FlowsumError,
    UnknownNodeError,
    ValidationError,
)
from .graph import InfluenceGraph, load_graph, maximal_influence_graph
from .labeling import field_labels, keyword_labels, merge_labels
from .pruning import mst_prune, rank_filter
from .similarity import AugmentParams
from .summarize import SummarizeConfig, summarize_pipeline

JOB_TIMEOUT = 120.0
MAX_SEARCH_HITS = 50
PAGE_LIMIT = 50
MAX_K = 40  # API-level cap; desk-scale summaries only

_ALLOWED_KEYS = {
    "source", "k", "l", "similarity", "augment", "augment_time",
    "prune", "seed", "max_iter", "rel_tol", "restarts",
}
_INT_KEYS = ("k", "l", "seed", "max_iter", "restarts")


class ServiceState:
    def __init__(self, max_workers=None):
        self.graph: InfluenceGraph | None = None
        self.load_error: str | None = None
        self.lock = threading.Lock()
        self.cache: dict[str, dict] = {}
        self.jobs: dict[str, dict[int, list[dict]]] = {}
        workers = max_workers or min(os.cpu_count() or 1, 8)
        self.executor = ThreadPoolExecutor(max_workers=workers)


def _bad(msg: str) -> HTTPException:
    return HTTPException(status_code=400, detail=msg)


def parse_summarize_payload(payload) -> tuple[str, SummarizeConfig]:
    """Validate a summarize request body; raises 400-level HTTPException."""
    if not isinstance(payload, dict):
        raise _bad("request body must be a JSON object")
    unknown = set(payload) - _ALLOWED_KEYS
    if unknown:
        raise _bad(f"unknown fields: {sorted(unknown)}")
    source = payload.get("source")
    if not isinstance(source, str) or not source:
        raise _bad("source is required and must be a node id string")
    for key in _INT_KEYS:
        v = payload.get(key)
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise _bad(f"{key} must be an integer")
    for key in ("similarity", "prune"):
        v = payload.get(key)
        if v is not None and not isinstance(v, str):
            raise _bad(f"{key} must be a string")
    rel_tol = payload.get("rel_tol")
    if rel_tol is not None and (
        isinstance(rel_tol, bool) or not isinstance(rel_tol, (int, float))
    ):
        raise _bad("rel_tol must be a number")
    augment = payload.get("augment")
    if augment is not None and not isinstance(augment, str):
        raise _bad("augment must be an attribute name string or null")
    augment_time = payload.get("augment_time", False)
    if not isinstance(augment_time, bool):
        raise _bad("augment_time must be a boolean")

    k = payload.get("k", 10)
    if not 2 <= k <= MAX_K:
        raise _bad(f"k must be in [2, {MAX_K}], got {k}")
    try:
        cfg = SummarizeConfig(
            k=k,
            l=payload.get("l"),
            similarity=payload.get("similarity", "bidirectional"),
            use_attribute=bool(augment),
            attribute=augment or "fields",
            use_time=augment_time,
            augment=AugmentParams(),
            seed=payload.get("seed", 42),
            max_iter=payload.get("max_iter", 300),
            rel_tol=float(rel_tol) if rel_tol is not None else 1e-4,
            prune=payload.get("prune", "rank"),
            restarts=payload.get("restarts", 1),
        )
    except ValidationError as exc:
        raise _bad(str(exc))
    return source, cfg


def _cache_key(source: str, cfg: SummarizeConfig) -> str:
    blob = to_json_bytes({"source": source, "config": config_echo(cfg)}, compact=True)
    return hashlib.sha256(blob).hexdigest()


def _member_rows(g: InfluenceGraph, asg) -> dict[int, list[dict]]:
    indeg = g.in_degrees()
    rows: dict[int, list[dict]] = {}
    for c in range(asg.effective_k):
        idxs = sorted(asg.members(c).tolist(), key=lambda i: (-indeg[i], i))
        out = []
        for i in idxs:
            row = {"id": g.node_ids[i], "in_degree": float(indeg[i])}
            if g.meta is not None:
                m = g.meta[i]
                row["title"] = m.title
                row["year"] = m.year
                row["venue"] = m.venue
            out.append(row)
        rows[c] = out
    return rows


def _run_job(g: InfluenceGraph, source: str, cfg: SummarizeConfig):
    sub = maximal_influence_graph(g, source)
    asg, fm, diag = summarize_pipeline(sub, sub.meta, cfg)
    l = min(cfg.resolved_l, asg.effective_k**2)
    if cfg.prune == "mst":
        summary = mst_prune(fm, asg)
    else:
        summary = rank_filter(fm, asg, l)
    if sub.meta is not None:
        labels = merge_labels(keyword_labels(sub.meta, asg), field_labels(sub.meta, asg))
    else:
        labels = []
    doc = build_summary_document(sub, summary, labels, cfg, diag, source_id=source)
    return doc, _member_rows(sub, asg)


def _json_response(doc: dict, status: int = 200) -> Response:
    return Response(
        content=to_json_bytes(doc), status_code=status, media_type="application/json"
    )


def create_app(
    edge_source=None,
    meta_source=None,
    *,
    graph: InfluenceGraph | None = None,
    sync_load: bool = False,
    max_workers=None,
) -> FastAPI:
    """Build the API app.

    Pass a pre-built ``graph``, or file paths that load on startup:
    in a background thread by default (requests see 503 meanwhile),
    inline with ``sync_load=True``.
    """
    state = ServiceState(max_workers=max_workers)
    if graph is not None:
        state.graph = graph

    def _load():
        try:
            state.graph = load_graph(edge_source, meta_source)
        except (FlowsumError, OSError) as exc:
            state.load_error = str(exc)

    @asynccontextmanager
    async def _lifespan(app: FastAPI):
        if state.graph is None and edge_source is not None:
            if sync_load:
                _load()
                if state.load_error:
                    raise RuntimeError(f"graph load failed: {state.load_error}")
            else:
                threading.Thread(target=_load, daemon=True).start()
        yield
        state.executor.shutdown(wait=False)

    app = FastAPI(title="flowsum", docs_url=None, redoc_url=None, lifespan=_lifespan)
    app.state.flowsum = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def _on_body_error(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def _require_graph() -> InfluenceGraph:
        g = state.graph
        if g is None:
            detail = (
                f"graph load failed: {state.load_error}"
                if state.load_error
                else "graph is loading"
            )
            raise HTTPException(status_code=503, detail=detail)
        return g

    @app.get("/api/meta")
    def api_meta():
        g = _require_graph()
        return {
            "nodes": g.node_count,
            "links": g.edge_count,
            "has_metadata": g.meta is not None,
            "defaults": config_echo(SummarizeConfig()),
            "max_k": MAX_K,
            "page_limit": PAGE_LIMIT,
        }

    @app.get("/api/nodes")
    def api_nodes(query: str = ""):
        g = _require_graph()
        needle = query.strip().lower()
        indeg = g.in_degrees()
        hits = []
        for i, node_id in enumerate(g.node_ids):
            if g.meta is not None:
                title = g.meta[i].title
                hay = title.lower()
            else:
                title = node_id
                hay = node_id.lower()
            if needle and needle not in hay:
                continue
            hits.append((float(indeg[i]), i, node_id, title))
        hits.sort(key=lambda t: (-t[0], t[2]))
        out = []
        for deg, i, node_id, title in hits[:MAX_SEARCH_HITS]:
            row = {"id": node_id, "title": title, "in_degree": deg}
            if g.meta is not None:
                row["year"] = g.meta[i].year
                row["venue"] = g.meta[i].venue
            out.append(row)
        return {"query": query, "total": len(hits), "hits": out}

    @app.post("/api/summarize")
    def api_summarize(payload: dict = Body(...)):
        g = _require_graph()
        source, cfg = parse_summarize_payload(payload)
        key = _cache_key(source, cfg)
        job_id = key[:12]
        with state.lock:
            hit = state.cache.get(key)
        if hit is not None:
            return _json_response({**hit, "cached": True})

        future = state.executor.submit(_run_job, g, source, cfg)
        try:
            doc, members = future.result(timeout=JOB_TIMEOUT)
        except FutureTimeout:
            future.cancel()
            raise HTTPException(status_code=503, detail="summarize timed out")
        except UnknownNodeError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (ValidationError, DimensionError) as exc:
            raise _bad(str(exc))
        except FlowsumError as exc:
            raise HTTPException(status_code=500, detail=str(exc))

        doc["job"] = job_id
        with state.lock:
            if key in state.cache:  # concurrent duplicate: first writer wins
                doc = state.cache[key]
            else:
                state.cache[key] = doc
                state.jobs[job_id] = members
        return _json_response({**doc, "cached": False})

    @app.get("/api/cluster/{job_id}/{cluster_id}/members")
    def api_members(
        job_id: str,
        cluster_id: int,
        sort: str = "indegree",
        limit: int = PAGE_LIMIT,
        offset: int = 0,
    ):
        _require_graph()
        if sort != "indegree":
            raise _bad(f"unsupported sort {sort!r}")
        if not 1 <= limit <= PAGE_LIMIT:
            raise _bad(f"limit must be in [1, {PAGE_LIMIT}]")
        if offset < 0:
            raise _bad("offset must be >= 0")
        with state.lock:
            job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        rows = job.get(cluster_id)
        if rows is None:
            raise HTTPException(
                status_code=404, detail=f"job has no cluster {cluster_id}"
            )
        page = rows[offset : offset + limit]
        return {
            "job": job_id,
            "cluster": cluster_id,
            "total": len(rows),
            "offset": offset,
            "limit": limit,
            "members": page,
            "has_more": offset + limit < len(rows),
        }

    return app
