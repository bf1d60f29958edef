"""Entry point: `python -m tabpfn_sidecar` or the `tabpfn-sidecar` script."""

import logging

import uvicorn

from .app import create_app
from .config import from_env


def main() -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    config = from_env()
    app = create_app(config)
    app.state.ensure_model()  # load weights before accepting traffic
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
