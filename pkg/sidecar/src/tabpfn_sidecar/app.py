"""FastAPI application implementing the fit-and-predict HTTP contract.

POST /v1/fit_predict  JSON in/out, one stateless fit per request.
GET  /v1/health       {status, model_info}; "loading" until the model is up.

Errors: 400 malformed body, 413 over-capacity, 500 model failure; every
error body carries {code, message, request_id}.
"""

from __future__ import annotations

import logging
import math
import threading

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import ServiceConfig, from_env
from .model import load_model

logger = logging.getLogger("tabpfn_sidecar")


class FitPredictBody(BaseModel):
    request_id: str = ""
    x_train: list[list[float]]
    y_train: list[float]
    x_query: list[list[float]]
    want_distribution: bool = False

    model_config = {"extra": "forbid"}


def _error(status: int, code: str, message: str, request_id: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "request_id": request_id},
    )


def _validate(body: FitPredictBody, max_rows: int) -> str | None:
    if len(body.x_train) != len(body.y_train):
        return "x_train and y_train row counts differ"
    if not body.x_train or not body.x_query:
        return "x_train and x_query must be non-empty"
    width = len(body.x_train[0])
    if any(len(r) != width for r in body.x_train + body.x_query):
        return "inconsistent row widths"
    flat = [v for r in body.x_train + body.x_query for v in r] + body.y_train
    if not all(math.isfinite(v) for v in flat):
        return "values must be finite"
    return None


def _dist_payload(edges: np.ndarray, probs: np.ndarray) -> dict:
    # Server-side invariant check before sending: strictly increasing edges,
    # non-negative probabilities summing to one.
    assert np.all(np.diff(edges) > 0)
    assert np.all(probs >= 0) and abs(float(probs.sum()) - 1.0) <= 1e-9
    return {"bin_edges": [float(e) for e in edges], "probabilities": [float(p) for p in probs]}


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or from_env()
    app = FastAPI(title="tabpfn-sidecar")
    state = {"model": None}
    lock = threading.Lock()  # serialize lazy load; fit state itself is per-request

    def model():
        with lock:
            if state["model"] is None:
                state["model"] = load_model(config.device)
            return state["model"]

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", str(exc.errors()[:1]), "")

    @app.get("/v1/health")
    def health():
        if state["model"] is None:
            return {"status": "loading", "model_info": ""}
        return {"status": "ok", "model_info": state["model"].model_info}

    @app.post("/v1/fit_predict")
    def fit_predict(body: FitPredictBody):
        if len(body.x_train) > config.max_train_rows:
            return _error(
                413,
                "capacity",
                f"{len(body.x_train)} train rows exceed the {config.max_train_rows} cap",
                body.request_id,
            )
        problem = _validate(body, config.max_train_rows)
        if problem is not None:
            return _error(400, "bad_request", problem, body.request_id)
        m = model()
        try:
            means, dists = m.fit_predict(
                body.x_train, body.y_train, body.x_query, body.want_distribution
            )
        except Exception as exc:  # model failure must not leak a stack trace
            logger.exception("fit_predict failed request_id=%s", body.request_id)
            return _error(500, "internal", str(exc), body.request_id)
        logger.info(
            "fit_predict request_id=%s rows=%d queries=%d",
            body.request_id, len(body.x_train), len(body.x_query),
        )
        return {
            "request_id": body.request_id,
            "means": [float(v) for v in means],
            "distributions": None if dists is None else [_dist_payload(e, p) for e, p in dists],
            "model_info": m.model_info,
        }

    # Touch the model so health reports "ok" once the app has served anything;
    # tests that want the "loading" state construct the app and probe first.
    app.state.ensure_model = model
    return app
