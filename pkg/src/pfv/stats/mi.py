"""Mutual-information estimators used to score features against a class label.

All estimates are in nats.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma as _psi

from ..errors import EstimatorError

DISCRETE_PLUGIN = "discrete_plugin"
KNN = "knn"


@dataclass(frozen=True)
class MIConfig:
    mode: str | None = None  # None: choose per feature by discrete_threshold
    k_neighbors: int = 3
    discrete_threshold: int = 16

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if self.mode not in (None, DISCRETE_PLUGIN, KNN):
            raise ValueError(f"unknown MI mode {self.mode!r}")


def mi_discrete(x, y) -> float:
    """Plug-in MI of two discrete vectors from their empirical joint."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValueError("x and y must be equal-length non-empty vectors")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    n = x.size
    joint = np.zeros((xi.max() + 1, yi.max() + 1))
    np.add.at(joint, (xi, yi), 1.0)
    joint /= n
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / (px @ py)[nz])))
    return max(mi, 0.0)


def mi_knn(x, y, k: int = 3) -> float:
    """k-NN MI between a continuous feature and a discrete label.

    For each point the distance to its k-th neighbour inside its own class
    sets a radius; the number of points of the whole sample strictly inside
    that radius enters the digamma average. Negative estimates clip to 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    n = x.size
    if x.ndim != 1 or y.shape != x.shape:
        raise ValueError("x and y must be equal-length vectors")
    if n <= k + 1:
        raise EstimatorError(f"need n > k + 1 samples, got n={n}, k={k}")
    labels, yi, counts = np.unique(y, return_inverse=True, return_counts=True)
    if labels.size < 2:
        raise EstimatorError("y must contain at least two classes")
    if counts.min() < k + 1:
        raise EstimatorError(f"every class needs at least k + 1 = {k + 1} samples")

    radius = np.empty(n)
    for c in range(labels.size):
        idx = np.flatnonzero(yi == c)
        radius[idx] = _kth_neighbor_distance(x[idx], k)
    # points strictly inside the radius (the point itself included)
    radius = np.nextafter(radius, 0.0)
    m_all = _count_within(np.sort(x), x, radius)
    mi = _psi(n) + _psi(k) - np.mean(_psi(counts[yi])) - np.mean(_psi(m_all))
    return max(float(mi), 0.0)


def _kth_neighbor_distance(v, k):
    """Distance from each value of ``v`` to its k-th nearest other value (1-D)."""
    order = np.argsort(v, kind="stable")
    s = v[order]
    n = s.size
    pos = np.arange(n)
    offsets = np.concatenate([np.arange(-k, 0), np.arange(1, k + 1)])
    cand = pos[:, None] + offsets[None, :]
    valid = (cand >= 0) & (cand < n)
    d = np.abs(s[np.clip(cand, 0, n - 1)] - s[:, None])
    d[~valid] = np.inf
    kth = np.partition(d, k - 1, axis=1)[:, k - 1]
    out = np.empty(n)
    out[order] = kth
    return out


def _count_within(xs, x, r):
    """Number of ``xs`` values with ``|xs - x| <= r``, elementwise over ``x``.

    ``x +/- r`` can round onto a neighbouring value, so the searchsorted
    bounds are corrected against the exact differences tie-block by tie-block.
    """
    n = xs.size
    hi = np.searchsorted(xs, x + r, side="right")
    lo = np.searchsorted(xs, x - r, side="left")
    for _ in range(4):
        changed = False
        last = xs[np.maximum(hi - 1, 0)]
        bad = (hi > 0) & (last - x > r)
        if bad.any():
            hi[bad] = np.searchsorted(xs, last[bad], side="left")
            changed = True
        nxt = xs[np.minimum(hi, n - 1)]
        good = (hi < n) & (nxt - x <= r)
        if good.any():
            hi[good] = np.searchsorted(xs, nxt[good], side="right")
            changed = True
        first = xs[np.minimum(lo, n - 1)]
        bad = (lo < n) & (x - first > r)
        if bad.any():
            lo[bad] = np.searchsorted(xs, first[bad], side="right")
            changed = True
        prev = xs[np.maximum(lo - 1, 0)]
        good = (lo > 0) & (x - prev <= r)
        if good.any():
            lo[good] = np.searchsorted(xs, prev[good], side="left")
            changed = True
        if not changed:
            break
    return hi - lo


def is_discrete(x, threshold: int) -> bool:
    return np.unique(x).size <= threshold


def score_features(X, y, config: MIConfig = MIConfig(), discrete_mask=None):
    """MI of every column of ``X`` against ``y``.

    ``discrete_mask`` fixes which columns use the plug-in estimator; when
    omitted it is derived from ``config``.
    """
    X = np.asarray(X, dtype=float)
    m = X.shape[1]
    if discrete_mask is None:
        discrete_mask = feature_kinds(X, config)
    out = np.empty(m)
    for j in range(m):
        if discrete_mask[j]:
            out[j] = mi_discrete(X[:, j], y)
        else:
            out[j] = mi_knn(X[:, j], y, config.k_neighbors)
    return out


def feature_kinds(X, config: MIConfig):
    X = np.asarray(X)
    m = X.shape[1]
    if config.mode == DISCRETE_PLUGIN:
        return np.ones(m, dtype=bool)
    if config.mode == KNN:
        return np.zeros(m, dtype=bool)
    return np.array([is_discrete(X[:, j], config.discrete_threshold) for j in range(m)])
