"""FastAPI application exposing the three provider endpoints plus /healthz.

Wire contract:

    POST /v1/fill-mask  {"tokens": [...], "mask_indices": [...], "top_k": 1}
                        -> {"replacements": [...]}
    POST /v1/translate  {"text", "source", "target", "seed"?} -> {"text"}
    POST /v1/classify   {"text"} -> {"raw_scores": [11], "label_order": [11]}

Unconfigured roles answer 501; malformed payloads 4xx; engine failures 500
with an error body.  The X-Request-Id header is echoed for tracing.
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from .config import ServiceConfig
from .engines import RoleNotLoaded, build_engines

logger = logging.getLogger("emoaug_sidecar")


class FillMaskRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tokens: list[str] = Field(min_length=1)
    mask_indices: list[int] = Field(min_length=1)
    top_k: int = Field(default=1, ge=1)


class TranslateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    text: str = Field(min_length=1)
    source: str = Field(min_length=2)
    target: str = Field(min_length=2)
    seed: int | None = Field(default=None, ge=0)


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    text: str = Field(min_length=1)


def create_app(config: ServiceConfig) -> FastAPI:
    engines = build_engines(config)
    app = FastAPI(title="emoaug inference sidecar", version="0.1.0")

    @app.middleware("http")
    async def echo_request_id(request: Request, call_next):
        response = await call_next(request)
        request_id = request.headers.get("X-Request-Id")
        if request_id:
            response.headers["X-Request-Id"] = request_id
        return response

    def role_guard(role: str) -> JSONResponse | None:
        if role not in engines.roles:
            return JSONResponse(
                status_code=501,
                content={"error": f"role {role!r} is not loaded; configure a model for it"},
            )
        return None

    @app.exception_handler(Exception)
    async def engine_failure(request: Request, exc: Exception):
        logger.exception("request failed: %s", exc)
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "echo": config.echo,
            "deterministic": config.deterministic,
            "roles": {
                "fill_mask": "fill_mask" in engines.roles,
                "translate_en_fr": "translate_en_fr" in engines.roles,
                "translate_fr_en": "translate_fr_en" in engines.roles,
                "classify": "classify" in engines.roles,
            },
        }

    @app.post("/v1/fill-mask")
    def fill_mask(payload: FillMaskRequest):
        refused = role_guard("fill_mask")
        if refused:
            return refused
        bad = [i for i in payload.mask_indices if not 0 <= i < len(payload.tokens)]
        if bad:
            return JSONResponse(status_code=400, content={"error": f"mask indices out of range: {bad}"})
        try:
            replacements = engines.fill(payload.tokens, payload.mask_indices, payload.top_k)
        except RoleNotLoaded as exc:
            return JSONResponse(status_code=501, content={"error": str(exc)})
        return {"replacements": replacements}

    @app.post("/v1/translate")
    def translate(payload: TranslateRequest):
        role = f"translate_{payload.source}_{payload.target}"
        refused = role_guard(role)
        if refused:
            return refused
        try:
            text = engines.translate(payload.text, payload.source, payload.target, seed=payload.seed)
        except RoleNotLoaded as exc:
            return JSONResponse(status_code=501, content={"error": str(exc)})
        return {"text": text}

    @app.post("/v1/classify")
    def classify(payload: ClassifyRequest):
        refused = role_guard("classify")
        if refused:
            return refused
        raw_scores, label_order = engines.classify(payload.text)
        return {"raw_scores": raw_scores, "label_order": label_order}

    return app


def serve(config: ServiceConfig):
    """Load models (aborting on failure) and run the HTTP service."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host="0.0.0.0", port=config.port)
