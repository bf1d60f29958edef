"""Evaluation metrics: pointwise errors, PRD curves, and kernel MMD."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.cluster import KMeans

from .errors import UndefinedMetricError

MAPE_ZERO_TARGET_TOL = 1e-12


class MapeResult(NamedTuple):
    percent: float
    num_skipped: int  # targets with |t| < 1e-12 excluded from the ratio


def mape(targets, predictions) -> MapeResult:
    """Mean absolute percentage error, skipping near-zero targets."""
    t = np.asarray(targets, dtype=float)
    p = np.asarray(predictions, dtype=float)
    if t.shape != p.shape or t.ndim != 1 or t.size < 1:
        raise ValueError("targets and predictions must be equal-length vectors")
    keep = np.abs(t) >= MAPE_ZERO_TARGET_TOL
    if not keep.any():
        raise UndefinedMetricError("all targets are (near) zero; MAPE undefined")
    value = 100.0 * float(np.mean(np.abs(t[keep] - p[keep]) / np.abs(t[keep])))
    return MapeResult(value, int((~keep).sum()))


def mae(targets, predictions) -> float:
    t = np.asarray(targets, dtype=float)
    p = np.asarray(predictions, dtype=float)
    if t.shape != p.shape or t.ndim != 1 or t.size < 1:
        raise ValueError("targets and predictions must be equal-length vectors")
    return float(np.mean(np.abs(t - p)))


def r_squared(targets, predictions) -> float:
    """Coefficient of determination 1 - SS_res / SS_tot."""
    t = np.asarray(targets, dtype=float)
    p = np.asarray(predictions, dtype=float)
    if t.shape != p.shape or t.ndim != 1 or t.size < 2:
        raise ValueError("need >= 2 aligned target/prediction pairs")
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedMetricError("zero target variance; R^2 undefined")
    return 1.0 - float(np.sum((t - p) ** 2)) / ss_tot


@dataclass(frozen=True)
class HistogramPair:
    """Reference (P) and generated (Q) histograms over a shared finite state
    space of cluster centers."""

    P: np.ndarray
    Q: np.ndarray
    cluster_centers: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        Q = np.asarray(self.Q, dtype=float)
        if P.shape != Q.shape or P.ndim != 1:
            raise ValueError("P and Q must be equal-length vectors")
        if np.any(P < 0) or np.any(Q < 0):
            raise ValueError("histogram masses must be non-negative")
        for name, h in (("P", P), ("Q", Q)):
            if abs(h.sum() - 1.0) > 1e-9:
                raise ValueError(f"{name} sums to {h.sum()}, expected 1")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)


def _exact_unit_sum(h: np.ndarray) -> np.ndarray:
    """Nudge the largest mass so the histogram sums to exactly 1.0; keeps the
    analytically checkable lambda = 1 PRD point exact."""
    for _ in range(3):
        err = h.sum() - 1.0
        if err == 0.0:
            return h
        h = h.copy()
        h[np.argmax(h)] -= err
    return h


def build_state_space(reference_samples, generated_samples, num_clusters: int, seed: int) -> HistogramPair:
    """Pool both sample sets, k-means them into a finite state space, and
    histogram each set's cluster assignments."""
    ref = np.atleast_2d(np.asarray(reference_samples, dtype=float))
    gen = np.atleast_2d(np.asarray(generated_samples, dtype=float))
    if ref.size == 0 or gen.size == 0:
        raise ValueError("both sample sets must be non-empty")
    pooled = np.vstack([ref, gen])
    if num_clusters < 2:
        raise ValueError("num_clusters must be >= 2")
    if num_clusters > pooled.shape[0]:
        raise ValueError(
            f"num_clusters {num_clusters} exceeds pooled sample count {pooled.shape[0]}"
        )
    km = KMeans(n_clusters=num_clusters, random_state=seed, n_init=10, max_iter=300)
    labels = km.fit_predict(pooled)
    P = np.bincount(labels[: ref.shape[0]], minlength=num_clusters).astype(float)
    Q = np.bincount(labels[ref.shape[0] :], minlength=num_clusters).astype(float)
    return HistogramPair(_exact_unit_sum(P / P.sum()), _exact_unit_sum(Q / Q.sum()), km.cluster_centers_)


@dataclass(frozen=True)
class PrdCurve:
    """Precision/recall pairs over the equiangular lambda grid."""

    lambdas: np.ndarray
    points: np.ndarray  # (m, 2) of (alpha, beta), ordered by lambda

    @property
    def precisions(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def recalls(self) -> np.ndarray:
        return self.points[:, 1]


def equiangular_lambdas(m: int) -> np.ndarray:
    """tan(i / (m+1) * pi/2) for i = 1..m; the midpoint is snapped to exactly
    1.0 for odd m so the analytically checkable lambda = 1 point is on grid."""
    if m < 1:
        raise ValueError("angular resolution must be >= 1")
    i = np.arange(1, m + 1, dtype=float)
    lam = np.tan(i / (m + 1) * (math.pi / 2.0))
    if m % 2 == 1:
        lam[m // 2] = 1.0
    return lam


def prd_curve(hist: HistogramPair, m: int = 1001) -> PrdCurve:
    """Precision alpha(l) = sum min(l P, Q), recall beta(l) = sum min(P, Q/l)."""
    if m % 2 == 0:
        raise ValueError("angular resolution m must be odd so lambda = 1 is on the grid")
    lam = equiangular_lambdas(m)
    P, Q = hist.P[None, :], hist.Q[None, :]
    alpha = np.minimum(lam[:, None] * P, Q).sum(axis=1)
    beta = np.minimum(P, Q / lam[:, None]).sum(axis=1)
    return PrdCurve(lam, np.column_stack([alpha, beta]))


@dataclass(frozen=True)
class MmdConfig:
    """Gaussian kernel k(x, y) = exp(-||x-y||^2 / (2 sigma^2))."""

    sigma: float
    unbiased: bool = True

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


def median_pairwise_distance(X, Y=None) -> float:
    """Median heuristic bandwidth over pooled pairwise distances."""
    pooled = np.atleast_2d(np.asarray(X, dtype=float))
    if Y is not None:
        pooled = np.vstack([pooled, np.atleast_2d(np.asarray(Y, dtype=float))])
    d2 = _sqdist(pooled, pooled)
    vals = np.sqrt(d2[np.triu_indices(pooled.shape[0], k=1)])
    med = float(np.median(vals)) if vals.size else 1.0
    return med if med > 0 else 1.0


def _sqdist(A, B):
    return np.sum((A[:, None, :] - B[None, :, :]) ** 2, axis=-1)


def mmd_squared(X, Y, config: MmdConfig) -> float:
    """Kernel two-sample statistic; the unbiased estimator drops the diagonal
    self-similarity terms and may be negative."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    n, m = X.shape[0], Y.shape[0]
    if config.unbiased and (n < 2 or m < 2):
        raise ValueError("unbiased estimator needs >= 2 samples per set")
    g = 1.0 / (2.0 * config.sigma**2)
    Kxx = np.exp(-g * _sqdist(X, X))
    Kyy = np.exp(-g * _sqdist(Y, Y))
    Kxy = np.exp(-g * _sqdist(X, Y))
    if config.unbiased:
        xx = (Kxx.sum() - np.trace(Kxx)) / (n * (n - 1))
        yy = (Kyy.sum() - np.trace(Kyy)) / (m * (m - 1))
    else:
        xx = Kxx.sum() / (n * n)
        yy = Kyy.sum() / (m * m)
    return float(xx + yy - 2.0 * Kxy.sum() / (n * m))
