"""Stateless HTTP inference sidecar for in-context tabular regression.

Wraps a pretrained in-context regressor (TabPFN when installed, a
deterministic kernel fallback otherwise) behind a small fit-and-predict
HTTP contract: POST /v1/fit_predict and GET /v1/health.
"""

__version__ = "0.1.0"
