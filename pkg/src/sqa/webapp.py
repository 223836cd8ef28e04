"""HTTP front door: JSON endpoints consumed by the CLI tests and the
browser client.

POST /v1/answer            {"question": ..., "mode": "workflow"|"baseline"}
GET  /v1/runs/{id}/trace   full execution trace of a previous answer
GET  /v1/entities/resolve  ?q=<name>&type=<TYPE>&k=<n>
GET  /healthz
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .corpus import EntityType
from .errors import ProviderUnavailableError, ResolutionError
from .service import Pipeline

logger = logging.getLogger(__name__)


class AnswerBody(BaseModel):
    question: str = Field(..., description="natural-language question")
    mode: str = Field("workflow", description="workflow or baseline")


def create_app(pipeline: Pipeline) -> FastAPI:
    app = FastAPI(title="sqa", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.pipeline = pipeline

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "corpus": pipeline.corpus.stats.to_json()}

    @app.post("/v1/answer")
    def answer(body: AnswerBody):
        try:
            envelope = pipeline.answer(body.question, body.mode)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ProviderUnavailableError as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc
        return envelope.to_json()

    @app.get("/v1/runs/{run_id}/trace")
    def trace(run_id: str):
        found = pipeline.get_trace(run_id)
        if found is None:
            raise HTTPException(status_code=404, detail=f"no run {run_id!r}")
        return found.to_json()

    @app.get("/v1/entities/resolve")
    def resolve(
        q: str = Query(..., min_length=1),
        type: str = Query(...),
        k: int = Query(5, ge=1, le=50),
    ):
        try:
            etype = EntityType(type.upper())
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=f"unknown entity type {type!r}") from exc
        try:
            ranked = pipeline.resolver.resolve(q, etype, top_k=k)
        except ResolutionError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return ranked.to_json()

    return app
