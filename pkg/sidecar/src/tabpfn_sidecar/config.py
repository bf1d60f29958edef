"""Service configuration sourced from environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass

# The in-context model's architectural limit on reference rows; the cap is a
# hard ceiling, operators can only lower it.
ABSOLUTE_MAX_TRAIN_ROWS = 10_000


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8151
    device: str = "cpu"
    max_train_rows: int = ABSOLUTE_MAX_TRAIN_ROWS
    model_pin: str = ""  # empty: accept whatever model version loads

    def __post_init__(self):
        if not 1 <= self.max_train_rows <= ABSOLUTE_MAX_TRAIN_ROWS:
            raise ValueError(
                f"max_train_rows must be in [1, {ABSOLUTE_MAX_TRAIN_ROWS}], "
                f"got {self.max_train_rows}"
            )
        if not 0 < self.port < 65_536:
            raise ValueError(f"port out of range: {self.port}")


def from_env(environ=os.environ) -> ServiceConfig:
    return ServiceConfig(
        host=environ.get("SIDECAR_HOST", "127.0.0.1"),
        port=int(environ.get("SIDECAR_PORT", "8151")),
        device=environ.get("SIDECAR_DEVICE", "cpu"),
        max_train_rows=int(environ.get("SIDECAR_MAX_ROWS", str(ABSOLUTE_MAX_TRAIN_ROWS))),
        model_pin=environ.get("SIDECAR_MODEL", ""),
    )
