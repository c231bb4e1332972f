"""Read-only HTTP service over a prepared artifact store.

Everything is loaded once at startup from verified artifacts; requests
never mutate the store, so repeated reads return identical payloads. The
explorer UI is a pure client of these endpoints.
"""

from __future__ import annotations

import math
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .closure import (
    proximity_closure,
    rank_semimetric_pairs,
    read_closure_tsv,
    top_direct_pairs,
)
from .corpus import Resolution, Timeline, load_corpus
from .lexicon import TagMatch, build_tagging_text, read_matches
from .netgraph import ProximityGraph, distance_from_proximity
from .pipeline import load_proximity, parse_class_filter
from .query import QueryError, QuerySpec, run_query
from .store import ArtifactStore, PipelineConfig, StoreError


class ServiceState:
    """Immutable in-memory view of one artifact store."""

    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.store = ArtifactStore(config.store_dir, config)
        built = [r for r in config.resolutions if self.store.has("cooccur", r)]
        if not built:
            raise StoreError("store contains no built resolution; run build first", stage="build")
        self.resolutions = built

        timelines, _ = load_corpus(self.store.get("corpus"))
        self.timelines: dict[str, Timeline] = {tl.user_id: tl for tl in timelines}
        self.matches: dict[str, list[TagMatch]] = (
            read_matches(self.store.get("matches")) if self.store.has("matches") else {}
        )
        self.posts_by_term: dict[str, list[str]] = {}
        self.post_user: dict[str, str] = {}
        self.post_by_id: dict[str, Any] = {}
        for tl in timelines:
            for post in tl.posts:
                self.post_user[post.post_id] = tl.user_id
                self.post_by_id[post.post_id] = post
        for post_id in sorted(self.matches):
            for m in self.matches[post_id]:
                self.posts_by_term.setdefault(m.term, []).append(post_id)

        self.direct: dict[Resolution, ProximityGraph] = {}
        self.closed: dict[Resolution, Any] = {}
        self.pca_reports: dict[Resolution, str] = {}
        for r in self.resolutions:
            self.direct[r] = load_proximity(self.store, config, r)
            if self.store.has("closure", r):
                self.closed[r] = proximity_closure(read_closure_tsv(self.store.get("closure", r)))
            if self.store.has("pca", r):
                self.pca_reports[r] = self.store.get("pca", r).read_text(encoding="utf-8")

        self.term_rows: list[dict] = []
        if self.store.has("term_counts"):
            for line in self.store.get("term_counts").read_text(encoding="utf-8").splitlines()[1:]:
                term, tc, count = line.split("\t")
                self.term_rows.append({"term": term, "class": tc, "count": int(count)})

    def resolve(self, raw: str) -> Resolution:
        try:
            resolution = Resolution.parse(raw)
        except Exception:
            raise ApiError(404, "unknown_resolution", f"unknown resolution {raw!r}")
        if resolution not in self.resolutions:
            raise ApiError(
                404,
                "unknown_resolution",
                f"resolution {resolution.value!r} is not built "
                f"(have: {', '.join(r.value for r in self.resolutions)})",
            )
        return resolution


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error_payload(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def _timeline_payload(state: ServiceState, tl: Timeline) -> dict:
    posts = []
    daily: dict[str, int] = {}
    for post in tl.posts:
        day = Resolution.DAY.period_id(post.timestamp)
        daily[day] = daily.get(day, 0) + 1
        posts.append(
            {
                "post_id": post.post_id,
                "timestamp": post.timestamp.isoformat().replace("+00:00", "Z"),
                "text": build_tagging_text(post.text, post.caption_tags),
                "tags": [
                    {"term": m.term, "class": m.term_class.value, "start": m.start, "end": m.end}
                    for m in state.matches.get(post.post_id, [])
                ],
            }
        )
    return {
        "user_id": tl.user_id,
        "posts": posts,
        "daily_counts": [{"date": d, "count": daily[d]} for d in sorted(daily)],
    }


def _network_payload(graph: ProximityGraph, min_weight: float, kind: str, resolution: Resolution) -> dict:
    nodes = [{"term": t, "class": tc.value} for t, tc in zip(graph.terms, graph.classes)]
    edges = []
    for (i, j) in sorted(graph.edges):
        p = graph.edges[(i, j)]
        if p >= min_weight:
            edges.append(
                {
                    "source": graph.terms[i],
                    "target": graph.terms[j],
                    "p": round(p, 9),
                    "d": round(1.0 / p - 1.0, 9),
                }
            )
    return {
        "resolution": resolution.value,
        "graph": kind,
        "min_weight": min_weight,
        "nodes": nodes,
        "edges": edges,
    }


def _closed_network_payload(closed, min_weight: float, resolution: Resolution) -> dict:
    terms = closed.terms
    nodes = [{"term": t, "class": tc.value} for t, tc in zip(terms, closed.classes)]
    edges = []
    n = len(terms)
    for i in range(n):
        for j in range(i + 1, n):
            p = float(closed.pmatrix[i, j])
            if p >= min_weight and p > 0.0:
                edges.append(
                    {
                        "source": terms[i],
                        "target": terms[j],
                        "p": round(p, 9),
                        "d": round(1.0 / p - 1.0, 9) if p > 0 else math.inf,
                    }
                )
    return {
        "resolution": resolution.value,
        "graph": "closed",
        "min_weight": min_weight,
        "nodes": nodes,
        "edges": edges,
    }


def create_app(config: PipelineConfig) -> FastAPI:
    state = ServiceState(config)
    app = FastAPI(title="termnet explorer service", version="0.1.0", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=_error_payload(exc.code, exc.message))

    @app.exception_handler(QueryError)
    async def handle_query_error(_request: Request, exc: QueryError):
        return JSONResponse(status_code=400, content=_error_payload("invalid_query", str(exc)))

    @app.get("/terms")
    def get_terms():
        return {"terms": state.term_rows}

    @app.get("/network/{resolution}")
    def get_network(resolution: str, min_weight: float = 0.0):
        res = state.resolve(resolution)
        return _network_payload(state.direct[res], min_weight, "direct", res)

    @app.get("/network/{resolution}/closed")
    def get_network_closed(resolution: str, min_weight: float = 0.05):
        res = state.resolve(resolution)
        closed = state.closed.get(res)
        if closed is None:
            raise ApiError(404, "missing_artifact", f"closure not built for {res.value}; run closure")
        return _closed_network_payload(closed, min_weight, res)

    @app.get("/pairs/direct")
    def get_pairs_direct(
        resolution: str | None = None,
        k: int = 25,
        classes_a: str | None = None,
        classes_b: str | None = None,
    ):
        res = state.resolve(resolution) if resolution else state.resolutions[0]
        class_filter = parse_class_filter(classes_a, classes_b)
        rows = top_direct_pairs(state.direct[res], class_filter, k=k)
        return {
            "resolution": res.value,
            "k": k,
            "rows": [
                {
                    "term_i": r.term_i,
                    "term_j": r.term_j,
                    "class_i": r.class_i.value,
                    "class_j": r.class_j.value,
                    "p": round(r.p, 9),
                }
                for r in rows
            ],
        }

    @app.get("/pairs/semimetric")
    def get_pairs_semimetric(
        resolution: str | None = None,
        k: int = 25,
        classes_a: str | None = None,
        classes_b: str | None = None,
    ):
        res = state.resolve(resolution) if resolution else state.resolutions[0]
        if res not in state.closed:
            raise ApiError(404, "missing_artifact", f"closure not built for {res.value}; run closure")
        class_filter = parse_class_filter(classes_a, classes_b)
        closed_dist = read_closure_tsv(state.store.get("closure", res))
        dist = distance_from_proximity(state.direct[res])
        rows = rank_semimetric_pairs(dist, closed_dist, class_filter, k=k)
        return {
            "resolution": res.value,
            "k": k,
            "rows": [
                {
                    "term_i": r.term_i,
                    "term_j": r.term_j,
                    "class_i": r.class_i.value,
                    "class_j": r.class_j.value,
                    "d_direct": None if r.d_direct is None else round(r.d_direct, 9),
                    "d_closed": round(r.d_closed, 9),
                    "ratio": None if r.ratio is None or math.isinf(r.ratio) else round(r.ratio, 9),
                    "indirect": r.indirect,
                    "p_closed": round(r.p_closed, 9),
                }
                for r in rows
            ],
        }

    @app.get("/pca/{resolution}")
    def get_pca(resolution: str):
        res = state.resolve(resolution)
        report = state.pca_reports.get(res)
        if report is None:
            raise ApiError(404, "missing_artifact", f"pca not built for {res.value}; run pca")
        import json as _json

        return {"resolution": res.value, **_json.loads(report)}

    @app.post("/query")
    async def post_query(request: Request):
        body = await request.json()
        if not isinstance(body, dict):
            raise QueryError("request body must be a JSON object")
        terms = body.get("terms")
        if not isinstance(terms, list) or not terms:
            raise QueryError("terms must be a non-empty list")
        raw_res = body.get("resolution")
        res = state.resolve(raw_res) if raw_res else state.resolutions[0]
        spec = QuerySpec.make(
            [str(t) for t in terms],
            phi=str(body.get("phi", "min")),
            alpha=float(body.get("alpha", state.config.alpha)),
            graph=str(body.get("graph", "direct")),
        )
        if spec.graph_choice.value == "closed":
            graph = state.closed.get(res)
            if graph is None:
                raise ApiError(404, "missing_artifact", f"closure not built for {res.value}; run closure")
        else:
            graph = state.direct[res]
        answers = run_query(graph, spec)
        direct = state.direct[res]
        class_of = {t: tc.value for t, tc in zip(direct.terms, direct.classes)}
        return {
            "answers": [
                {"term": t, "class": class_of.get(t, ""), "score": round(s, 9)}
                for t, s in answers.entries
            ],
            "graph_meta": {
                "resolution": res.value,
                "graph": spec.graph_choice.value,
                "phi": spec.phi.value,
                "alpha": spec.alpha,
                "terms": len(graph.terms),
                "sigma": state.config.sigma,
            },
        }

    @app.get("/users/{user_id}/timeline")
    def get_timeline(user_id: str):
        tl = state.timelines.get(user_id)
        if tl is None:
            raise ApiError(404, "unknown_user", f"no timeline for user {user_id!r}")
        return _timeline_payload(state, tl)

    @app.get("/posts/search")
    def search_posts(term: str, limit: int = 50):
        post_ids = state.posts_by_term.get(term)
        if post_ids is None:
            raise ApiError(404, "unknown_term", f"no posts mention {term!r}")
        posts = []
        for pid in post_ids[: max(0, limit)]:
            user_id = state.post_user[pid]
            post = state.post_by_id[pid]
            posts.append(
                {
                    "post_id": pid,
                    "user_id": user_id,
                    "timestamp": post.timestamp.isoformat().replace("+00:00", "Z"),
                    "text": build_tagging_text(post.text, post.caption_tags),
                    "tags": [
                        {"term": m.term, "class": m.term_class.value, "start": m.start, "end": m.end}
                        for m in state.matches.get(pid, [])
                    ],
                }
            )
        return {"term": term, "total": len(post_ids), "posts": posts}

    return app
