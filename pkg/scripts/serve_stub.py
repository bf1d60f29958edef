#!/usr/bin/env python3
"""Serve the bundled kernel-backend stub over the bridge HTTP contract.

Useful for exercising the remote backend without the inference sidecar:

    python3 scripts/serve_stub.py --port 8151
    seqdesign gen --config configs/gen_quadratic.ini \
        --backend remote --endpoint http://127.0.0.1:8151
"""

import sys

from seqdesign.stub_server import main

if __name__ == "__main__":
    sys.exit(main())
