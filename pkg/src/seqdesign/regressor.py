"""In-context conditional regression backends.

A regressor is "fitted" by binding one (X_ref, y_ref) pair; there is no
training. Prediction returns a piecewise-constant distribution over the
target (a histogram whose expected value is the regression output) or the
exact weighted mean directly.

Backends:
  kernel  Gaussian-kernel weighting w_i = exp(-||q - x_i||^2 / (2 h^2))
  knn     uniform weights on the k nearest reference rows
  remote  one fit-and-predict HTTP round trip per call (see bridge module)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ValidationError

DEFAULT_CAPACITY = 10_000
DEFAULT_NUM_BINS = 64


@dataclass(frozen=True)
class PredictedDistribution:
    """Histogram over a scalar target: B+1 increasing edges, B probabilities."""

    bin_edges: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        if edges.ndim != 1 or probs.ndim != 1 or edges.size != probs.size + 1:
            raise ValidationError("need B+1 edges for B probabilities")
        if np.any(np.diff(edges) <= 0):
            raise ValidationError("bin edges must be strictly increasing")
        if np.any(probs < 0):
            raise ValidationError("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValidationError(f"probabilities sum to {probs.sum()}, expected 1")
        edges, probs = edges.copy(), probs.copy()
        edges.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "probabilities", probs)

    @property
    def mean(self) -> float:
        mids = 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])
        return float(self.probabilities @ mids)


@dataclass(frozen=True)
class RegressorSpec:
    """Backend choice and parameters. bandwidth=None selects the median
    heuristic (median pairwise distance of X_ref, recomputed per fit)."""

    kind: str = "kernel"
    bandwidth: float | None = None
    k: int = 5
    endpoint: str | None = None
    capacity: int = DEFAULT_CAPACITY
    num_bins: int = DEFAULT_NUM_BINS

    def __post_init__(self):
        if self.kind not in ("kernel", "knn", "remote"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if self.bandwidth is not None and self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.num_bins < 1:
            raise ValueError("num_bins must be >= 1")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend requires an endpoint")


def median_heuristic_bandwidth(X: np.ndarray, max_rows: int = 512) -> float:
    """Median pairwise Euclidean distance; falls back to 1.0 when degenerate."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] > max_rows:
        idx = np.random.default_rng(0).choice(X.shape[0], max_rows, replace=False)
        X = X[np.sort(idx)]
    if X.shape[0] < 2:
        return 1.0
    d2 = np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=-1)
    dists = np.sqrt(d2[np.triu_indices(X.shape[0], k=1)])
    med = float(np.median(dists))
    return med if med > 0 else 1.0


@dataclass(frozen=True)
class PredictDiagnostics:
    """Per-query-row flags: True where all kernel weights underflowed and the
    uniform-weight fallback was used."""

    underflow: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def any_underflow(self) -> bool:
        return bool(self.underflow.any())


class FittedRegressor:
    """Immutable binding of one (X_ref, y_ref) pair under one RegressorSpec."""

    def __init__(self, spec: RegressorSpec, X_ref: np.ndarray, y_ref: np.ndarray):
        X_ref = np.asarray(X_ref, dtype=float)
        y_ref = np.asarray(y_ref, dtype=float)
        if X_ref.ndim != 2:
            raise ValueError("X_ref must be a 2-D matrix")
        if y_ref.ndim != 1 or y_ref.shape[0] != X_ref.shape[0]:
            raise ValueError("y_ref must be a vector row-aligned with X_ref")
        if X_ref.shape[0] < 1:
            raise ValueError("reference set must be non-empty")
        if X_ref.shape[0] > spec.capacity:
            raise CapacityError(
                f"reference has {X_ref.shape[0]} rows, exceeding the capacity of {spec.capacity}"
            )
        if not (np.all(np.isfinite(X_ref)) and np.all(np.isfinite(y_ref))):
            raise ValidationError("reference data contains non-finite values")
        self._spec = spec
        self._X = X_ref.copy()
        self._y = y_ref.copy()
        self._X.setflags(write=False)
        self._y.setflags(write=False)
        if spec.kind == "kernel":
            self._h = spec.bandwidth if spec.bandwidth is not None else median_heuristic_bandwidth(self._X)
        else:
            self._h = None

    @property
    def spec(self) -> RegressorSpec:
        return self._spec

    @property
    def bandwidth(self) -> float | None:
        return self._h

    @property
    def num_features(self) -> int:
        return self._X.shape[1]

    def _check_query(self, X_query) -> np.ndarray:
        Xq = np.asarray(X_query, dtype=float)
        if Xq.ndim != 2 or Xq.shape[1] != self._X.shape[1]:
            raise ValueError(
                f"query width {Xq.shape[1] if Xq.ndim == 2 else '?'} does not match "
                f"fitted width {self._X.shape[1]}"
            )
        return Xq

    def _weights(self, Xq: np.ndarray):
        """Normalized weight matrix (m, n_ref) plus per-row underflow flags."""
        d2 = np.sum((Xq[:, None, :] - self._X[None, :, :]) ** 2, axis=-1)
        if self._spec.kind == "kernel":
            w = np.exp(-d2 / (2.0 * self._h**2))
            totals = w.sum(axis=1, keepdims=True)
            # Every weight underflowed: fall back to uniform weights rather
            # than dividing by zero, and flag the row.
            underflow = totals[:, 0] <= 0
            if underflow.any():
                w[underflow] = 1.0
                totals = w.sum(axis=1, keepdims=True)
            return w / totals, underflow
        # knn: distance ties broken by lowest reference row index (stable sort).
        k = min(self._spec.k, self._X.shape[0])
        order = np.argsort(d2, axis=1, kind="stable")
        w = np.zeros_like(d2)
        np.put_along_axis(w, order[:, :k], 1.0 / k, axis=1)
        return w, np.zeros(Xq.shape[0], dtype=bool)

    def predict_mean(self, X_query) -> np.ndarray:
        """Exact weighted mean sum(w_i y_i); bin-resolution independent."""
        return self.predict_mean_ex(X_query)[0]

    def predict_mean_ex(self, X_query):
        if self._spec.kind == "remote":
            from .bridge import remote_predict_means

            return remote_predict_means(self._spec, self._X, self._y, self._check_query(X_query))
        Xq = self._check_query(X_query)
        w, underflow = self._weights(Xq)
        return w @ self._y, PredictDiagnostics(underflow)

    def predict_distribution(self, X_query) -> list[PredictedDistribution]:
        if self._spec.kind == "remote":
            from .bridge import remote_predict_distributions

            return remote_predict_distributions(self._spec, self._X, self._y, self._check_query(X_query))
        Xq = self._check_query(X_query)
        w, _ = self._weights(Xq)
        edges = self._bin_edges()
        bins = np.clip(np.searchsorted(edges, self._y, side="right") - 1, 0, edges.size - 2)
        out = []
        for row in w:
            probs = np.bincount(bins, weights=row, minlength=edges.size - 1)
            out.append(PredictedDistribution(edges, probs / probs.sum()))
        return out

    def sample(self, X_query, seed: int) -> np.ndarray:
        """One seeded draw per query row, uniform within the selected bin."""
        rng = np.random.default_rng(seed)
        dists = self.predict_distribution(X_query)
        draws = np.empty(len(dists))
        for i, dist in enumerate(dists):
            b = rng.choice(dist.probabilities.size, p=dist.probabilities)
            draws[i] = rng.uniform(dist.bin_edges[b], dist.bin_edges[b + 1])
        return draws

    def _bin_edges(self) -> np.ndarray:
        lo, hi = float(self._y.min()), float(self._y.max())
        span = hi - lo
        eps = 1e-9 * span if span > 0 else 1e-9 * max(1.0, abs(lo))
        return np.linspace(lo - eps, hi + eps, self._spec.num_bins + 1)


def fit(spec: RegressorSpec, X_ref, y_ref) -> FittedRegressor:
    """Bind a reference pair under a spec; see FittedRegressor."""
    return FittedRegressor(spec, X_ref, y_ref)
