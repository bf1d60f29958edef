"""HTTP client for the remote fit-and-predict regressor service.

The protocol is stateless: every generation step sends the full reference
pair plus the query block in one POST /v1/fit_predict round trip. Bodies are
plain JSON; numeric round-trip tolerance on the wire is 1e-12.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass

import numpy as np
import requests

from .errors import CapacityError, ProtocolError, TransportError, ValidationError
from .regressor import DEFAULT_CAPACITY, PredictDiagnostics, PredictedDistribution

FIT_PREDICT_PATH = "/v1/fit_predict"
HEALTH_PATH = "/v1/health"


@dataclass(frozen=True)
class FitPredictRequest:
    x_train: np.ndarray
    y_train: np.ndarray
    x_query: np.ndarray
    want_distribution: bool = False
    request_id: str = ""

    def __post_init__(self):
        xt = np.atleast_2d(np.asarray(self.x_train, dtype=float))
        yt = np.asarray(self.y_train, dtype=float)
        xq = np.atleast_2d(np.asarray(self.x_query, dtype=float))
        if yt.ndim != 1 or yt.shape[0] != xt.shape[0]:
            raise ValidationError("y_train must be row-aligned with x_train")
        if xq.shape[1] != xt.shape[1]:
            raise ValidationError("x_query width must match x_train")
        if xt.shape[0] > DEFAULT_CAPACITY:
            raise CapacityError(
                f"x_train has {xt.shape[0]} rows, exceeding the capacity of {DEFAULT_CAPACITY}"
            )
        for name, arr in (("x_train", xt), ("y_train", yt), ("x_query", xq)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValidationError(f"{name} contains non-finite values")
        object.__setattr__(self, "x_train", xt)
        object.__setattr__(self, "y_train", yt)
        object.__setattr__(self, "x_query", xq)
        if not self.request_id:
            object.__setattr__(self, "request_id", uuid.uuid4().hex)

    def to_json_dict(self) -> dict:
        return {
            "request_id": self.request_id,
            "x_train": self.x_train.tolist(),
            "y_train": self.y_train.tolist(),
            "x_query": self.x_query.tolist(),
            "want_distribution": self.want_distribution,
        }

    @classmethod
    def from_json_dict(cls, body: dict) -> "FitPredictRequest":
        try:
            return cls(
                x_train=np.array(body["x_train"], dtype=float),
                y_train=np.array(body["y_train"], dtype=float),
                x_query=np.array(body["x_query"], dtype=float),
                want_distribution=bool(body.get("want_distribution", False)),
                request_id=str(body.get("request_id", "")),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed fit_predict body: {exc}") from exc


@dataclass(frozen=True)
class FitPredictResponse:
    means: np.ndarray
    distributions: list[PredictedDistribution] | None
    model_info: str
    request_id: str

    def to_json_dict(self) -> dict:
        dists = None
        if self.distributions is not None:
            dists = [
                {"bin_edges": d.bin_edges.tolist(), "probabilities": d.probabilities.tolist()}
                for d in self.distributions
            ]
        return {
            "request_id": self.request_id,
            "means": np.asarray(self.means, dtype=float).tolist(),
            "distributions": dists,
            "model_info": self.model_info,
        }


def _parse_response(body: dict, request: FitPredictRequest) -> FitPredictResponse:
    try:
        means = np.array(body["means"], dtype=float)
        model_info = str(body.get("model_info", ""))
        request_id = str(body.get("request_id", ""))
        raw_dists = body.get("distributions")
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"malformed response body: {exc}") from exc
    if means.ndim != 1 or means.shape[0] != request.x_query.shape[0]:
        raise ProtocolError(
            f"means length {means.shape} does not match {request.x_query.shape[0]} query rows"
        )
    if not np.all(np.isfinite(means)):
        raise ProtocolError("response means contain non-finite values")
    dists = None
    if raw_dists is not None:
        if len(raw_dists) != request.x_query.shape[0]:
            raise ProtocolError("distribution count does not match query rows")
        try:
            dists = [
                PredictedDistribution(np.array(d["bin_edges"]), np.array(d["probabilities"]))
                for d in raw_dists
            ]
        except (ValidationError, KeyError, TypeError) as exc:
            raise ProtocolError(f"invalid distribution in response: {exc}") from exc
    return FitPredictResponse(means, dists, model_info, request_id)


def remote_fit_predict(
    endpoint: str,
    request: FitPredictRequest,
    timeout: float = 60.0,
    retries: int = 2,
) -> FitPredictResponse:
    """One validated round trip; transient transport failures are retried."""
    url = endpoint.rstrip("/") + FIT_PREDICT_PATH
    payload = request.to_json_dict()
    last_exc = None
    for _ in range(retries + 1):
        try:
            resp = requests.post(url, json=payload, timeout=timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            last_exc = exc
            continue
        if resp.status_code == 413:
            raise CapacityError(f"service rejected request as over capacity: {resp.text}")
        if resp.status_code >= 500:
            last_exc = TransportError(f"HTTP {resp.status_code}: {resp.text}")
            continue
        if resp.status_code != 200:
            raise ProtocolError(f"HTTP {resp.status_code}: {resp.text}")
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"non-JSON response: {exc}") from exc
        return _parse_response(body, request)
    raise TransportError(f"fit_predict failed after {retries + 1} attempts: {last_exc}")


def health(endpoint: str, timeout: float = 10.0) -> dict:
    url = endpoint.rstrip("/") + HEALTH_PATH
    try:
        resp = requests.get(url, timeout=timeout)
    except (requests.ConnectionError, requests.Timeout) as exc:
        raise TransportError(f"health check failed: {exc}") from exc
    if resp.status_code != 200:
        raise ProtocolError(f"health returned HTTP {resp.status_code}")
    return resp.json()


def remote_predict_means(spec, X_ref, y_ref, X_query):
    """Backend hook used by FittedRegressor for kind='remote'."""
    req = FitPredictRequest(X_ref, y_ref, X_query, want_distribution=False)
    resp = remote_fit_predict(spec.endpoint, req)
    return resp.means, PredictDiagnostics(np.zeros(X_query.shape[0], dtype=bool))


def remote_predict_distributions(spec, X_ref, y_ref, X_query):
    req = FitPredictRequest(X_ref, y_ref, X_query, want_distribution=True)
    resp = remote_fit_predict(spec.endpoint, req)
    if resp.distributions is None:
        raise ProtocolError("service omitted distributions despite want_distribution")
    return resp.distributions
