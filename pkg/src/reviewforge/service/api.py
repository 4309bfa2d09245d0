"""HTTP/JSON API over the review pipeline.

Endpoints mirror the store's resources; every error body is
{"code", "message", "detail"} with conventional status mapping. When a static
directory is configured (the built web UI), it is served at the root path.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..errors import ReviewForgeError
from ..ingest.types import MalformedPdf, NoTextLayer
from .pipeline import (
    IndexOutOfRange,
    MissingIndex,
    PayloadTooLarge,
    ReviewService,
    UnknownJob,
    UnknownManuscript,
    UnknownReview,
    UnknownVenue,
)
from .records import page_image_from_dict

logger = logging.getLogger(__name__)

_STATUS_MAP = [
    (PayloadTooLarge, 413, "payload_too_large"),
    (MalformedPdf, 400, "malformed_pdf"),
    (NoTextLayer, 422, "no_text_layer"),
    (UnknownManuscript, 404, "unknown_manuscript"),
    (UnknownVenue, 404, "unknown_venue"),
    (UnknownJob, 404, "unknown_job"),
    (UnknownReview, 404, "unknown_review"),
    (IndexOutOfRange, 404, "todo_index_out_of_range"),
    (MissingIndex, 409, "missing_index"),
]


def _error_response(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


class GenerateRequest(BaseModel):
    venue: str
    mode: str = Field(default="multimodal")
    use_rag: bool = Field(default=True)


class TodoPatch(BaseModel):
    done: bool


def create_app(service: ReviewService, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="reviewforge", version="0.1.0")

    @app.exception_handler(ReviewForgeError)
    async def handle_domain_error(request: Request, exc: ReviewForgeError):
        for exc_type, status, code in _STATUS_MAP:
            if isinstance(exc, exc_type):
                return _error_response(status, code, str(exc))
        logger.exception("unhandled domain error")
        return _error_response(500, "internal_error", str(exc))

    @app.exception_handler(ValueError)
    async def handle_value_error(request: Request, exc: ValueError):
        return _error_response(400, "bad_request", str(exc))

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/api/manuscripts")
    async def submit_manuscript(request: Request):
        body = await request.body()
        manuscript_id = service.submit_manuscript(body)
        return {"id": manuscript_id}

    @app.get("/api/manuscripts/{manuscript_id}")
    async def get_manuscript(manuscript_id: str):
        manuscript, composite = service.get_manuscript(manuscript_id)
        return {
            "id": manuscript.id,
            "pages": manuscript.page_count,
            "sentences": len(manuscript.sentences),
            "sections": sorted(
                ".".join(str(p) for p in path) for path in manuscript.outline.section_paths()
            ),
            "figures": sorted(manuscript.outline.figures),
            "tables": sorted(manuscript.outline.tables),
            "composite_height": composite.height,
        }

    @app.get("/api/manuscripts/{manuscript_id}/pages/{page}")
    async def get_page_image(manuscript_id: str, page: int):
        payload = service.store.read("manuscript", manuscript_id)
        if payload is None:
            raise UnknownManuscript(f"manuscript {manuscript_id!r} not found")
        images = payload["manuscript"].get("page_images", [])
        match = next((im for im in images if im["page"] == page), None)
        if match is None:
            return _error_response(404, "unknown_page", f"no rendered page {page}")
        image = page_image_from_dict(match)
        return Response(content=image.data, media_type="image/png")

    @app.post("/api/manuscripts/{manuscript_id}/reviews")
    async def generate_review(manuscript_id: str, body: GenerateRequest):
        job_id = service.generate_review(
            manuscript_id, body.venue, mode=body.mode, use_rag=body.use_rag
        )
        return {"job_id": job_id}

    @app.get("/api/jobs/{job_id}")
    async def get_job(job_id: str):
        return service.get_job(job_id)

    @app.get("/api/reviews/{review_id}")
    async def get_review(review_id: str):
        return service.get_review(review_id)

    @app.patch("/api/reviews/{review_id}/todos/{index}")
    async def patch_todo(review_id: str, index: int, body: TodoPatch):
        return service.set_todo_done(review_id, index, body.done)

    @app.get("/api/venues")
    async def list_venues():
        return service.list_venues()

    @app.post("/api/venues/{venue}/corpus")
    async def load_corpus(venue: str, request: Request):
        body = await request.body()
        return service.load_corpus(body.decode("utf-8"), venue)

    static = static_dir or service.config.service.static_dir
    if static and Path(static).is_dir():
        app.mount("/", StaticFiles(directory=static, html=True), name="webapp")

    return app
