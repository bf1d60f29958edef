"""Loopback stub implementing the fit-and-predict HTTP contract with the
local kernel backend. Used as a test fixture for the remote client and as a
stand-in when no real inference service is deployed.

Run standalone with: python -m seqdesign.stub_server --port 8731
"""

from __future__ import annotations

import argparse
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .bridge import FIT_PREDICT_PATH, HEALTH_PATH, FitPredictRequest, FitPredictResponse
from .errors import CapacityError, ValidationError
from .regressor import RegressorSpec, fit

MODEL_INFO = "seqdesign-stub-kernel/0.1.0"


def _compute_response(request: FitPredictRequest) -> FitPredictResponse:
    model = fit(RegressorSpec(kind="kernel"), request.x_train, request.y_train)
    means = model.predict_mean(request.x_query)
    dists = model.predict_distribution(request.x_query) if request.want_distribution else None
    return FitPredictResponse(means, dists, MODEL_INFO, request.request_id)


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def _send_json(self, status: int, body: dict):
        data = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        if self.path == HEALTH_PATH:
            self._send_json(200, {"status": "ok", "model_info": MODEL_INFO})
        else:
            self._send_json(404, {"code": "not_found", "message": self.path, "request_id": ""})

    def do_POST(self):
        if self.path != FIT_PREDICT_PATH:
            self._send_json(404, {"code": "not_found", "message": self.path, "request_id": ""})
            return
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length)
        request_id = ""
        try:
            body = json.loads(raw)
            request_id = str(body.get("request_id", ""))
            request = FitPredictRequest.from_json_dict(body)
        except CapacityError as exc:
            self._send_json(413, {"code": "capacity", "message": str(exc), "request_id": request_id})
            return
        except (ValidationError, ValueError) as exc:
            self._send_json(400, {"code": "bad_request", "message": str(exc), "request_id": request_id})
            return
        try:
            response = _compute_response(request)
        except Exception as exc:  # surface model failures as 500, not a hang
            self._send_json(500, {"code": "internal", "message": str(exc), "request_id": request_id})
            return
        self._send_json(200, response.to_json_dict())


class StubServer:
    """In-process threaded stub; use as a context manager in tests."""

    def __init__(self, port: int = 0):
        self._httpd = ThreadingHTTPServer(("127.0.0.1", port), _Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def endpoint(self) -> str:
        return f"http://127.0.0.1:{self._httpd.server_address[1]}"

    def __enter__(self) -> "StubServer":
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)


def main(argv=None):
    parser = argparse.ArgumentParser(description="Run the loopback stub inference service")
    parser.add_argument("--port", type=int, default=8731)
    args = parser.parse_args(argv)
    with StubServer(args.port) as server:
        print(f"stub server listening on {server.endpoint}")
        threading.Event().wait()


if __name__ == "__main__":
    main()
