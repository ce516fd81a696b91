"""Stateless HTTP JSON API over one immutable corpus bundle.

One process serves one corpus; all selection, history, and favorites state
lives in the client. Every response is deterministic byte-for-byte given the
bundle and the request, and reproducible from module-level calls.
"""

from __future__ import annotations

from typing import Optional, Sequence

from fastapi import Body, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from . import __version__, reports
from .errors import (
    ConfigMismatchError,
    CorpexError,
    EmptyQueryError,
    EmptyRegionError,
    OutOfRangeError,
    UnknownDocumentError,
)
from .model import CorpusBundle
from .reports import Explorer, dumps

_STATUS_BY_ERROR: tuple[tuple[type, int], ...] = (
    (UnknownDocumentError, 404),
    (EmptyRegionError, 404),
    (OutOfRangeError, 404),
    (ConfigMismatchError, 400),
    (EmptyQueryError, 400),
    (CorpexError, 400),
)


def _error_response(code: str, message: str, field: Optional[str], status: int) -> Response:
    body = {"error": {"code": code, "message": message, "field": field}}
    return Response(content=dumps(body), status_code=status, media_type="application/json")


def _json(payload) -> Response:
    return Response(content=dumps(payload), media_type="application/json")


def create_app(
    source: CorpusBundle | Explorer, cors_origins: Sequence[str] = ("*",)
) -> FastAPI:
    explorer = source if isinstance(source, Explorer) else Explorer(source)
    app = FastAPI(title="corpex", version=__version__, docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(CorpexError)
    async def corpex_error_handler(_request: Request, exc: CorpexError):
        for klass, status in _STATUS_BY_ERROR:
            if isinstance(exc, klass):
                return _error_response(exc.code, str(exc), exc.field, status)
        return _error_response(exc.code, str(exc), exc.field, 400)

    @app.exception_handler(ValueError)
    async def value_error_handler(_request: Request, exc: ValueError):
        return _error_response("bad_request", str(exc), None, 400)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        field = ".".join(str(loc) for loc in first.get("loc", []) if loc != "query")
        return _error_response("bad_request", first.get("msg", "invalid request"), field or None, 400)

    @app.get("/corpus/meta")
    def corpus_meta():
        return _json(reports.corpus_meta(explorer))

    @app.get("/search")
    def search(
        q: str = "",
        mode: str = "any",
        sort: str = "relevance",
        anchor: Optional[str] = None,
        space: str = "tfidf",
        n: int = 50,
    ):
        return _json(reports.search_report(explorer, q, mode, sort, anchor, space, n))

    @app.post("/region")
    def region(payload: dict = Body(...)):
        provenance_obj = payload.get("provenance")
        if not isinstance(provenance_obj, dict):
            raise CorpexError("body must carry a provenance object", field="provenance")
        provenance = reports.provenance_from_obj(provenance_obj)
        kappa = payload.get("kappa", reports.DEFAULT_KAPPA)
        if not isinstance(kappa, (int, float)):
            raise CorpexError("kappa must be a number", field="kappa")
        return _json(
            reports.region_report(
                explorer,
                provenance,
                term_metric=payload.get("term_metric", "g2"),
                doc_metric=payload.get("doc_metric", "centrality"),
                kappa=float(kappa),
                space=payload.get("space", "tfidf"),
                anchor=payload.get("anchor"),
            )
        )

    @app.get("/neighbors")
    def neighbors(
        doc: str,
        doc2: Optional[str] = None,
        space: str = "tfidf",
        alt_space: Optional[str] = None,
        n: int = reports.DEFAULT_NEIGHBORS,
        term_metric: str = "g2",
    ):
        return _json(
            reports.neighborhood_report(explorer, doc, doc2, space, alt_space, n, term_metric)
        )

    @app.get("/pair")
    def pair(a: str, b: str):
        return _json(reports.pair_report(explorer, a, b))

    @app.get("/document")
    def document(
        id: str,
        region: Optional[str] = None,
        search_terms: Optional[str] = None,
        term_metric: str = "g2",
        n_salient: int = reports.DOCUMENT_TOP_TERMS,
    ):
        provenance = reports.provenance_from_string(region) if region else None
        return _json(
            reports.document_report(explorer, id, provenance, search_terms, term_metric, n_salient)
        )

    @app.get("/cell")
    def cell(i: int, j: int):
        return _json(reports.cell_info(explorer, i, j))

    @app.get("/layout")
    def layout():
        return _json(reports.layout_payload(explorer))

    return app
