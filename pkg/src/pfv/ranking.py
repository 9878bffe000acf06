"""Feature ranking by mutual information averaged over re-balanced subsamples.

Every iteration pairs all minority rows with an equal-size random draw of
majority rows, scores each feature by MI against the label, and folds the
scores into a running mean. Iteration stops once the top-d features of
the running mean have stayed the same for ``patience`` consecutive
iterations, or after ``max_iters``.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateTaskError
from .seeding import derive_seed, rng_for
from .stats.mi import MIConfig, feature_kinds, score_features
from .strata import BinaryTask

STABILIZED = "STABILIZED"
MAX_ITERS = "MAX_ITERS"
SET = "set"
LIST = "list"


@dataclass(frozen=True)
class RankingParams:
    max_iters: int = 500
    top_d: int | None = None  # None: min(27, m)
    patience: int = 50
    master_seed: int = 0
    mi_config: MIConfig = field(default_factory=MIConfig)
    compare: str = SET
    n_jobs: int = 1

    def __post_init__(self):
        if self.max_iters < 1 or self.patience < 1:
            raise ConfigError("max_iters and patience must be >= 1")
        if self.top_d is not None and self.top_d < 1:
            raise ConfigError("top_d must be >= 1")
        if self.compare not in (SET, LIST):
            raise ConfigError(f"compare must be 'set' or 'list', got {self.compare!r}")

    def resolved_top_d(self, m):
        d = min(27, m) if self.top_d is None else self.top_d
        if d > m:
            raise ConfigError(f"top_d={d} exceeds the number of features ({m})")
        return d


@dataclass(frozen=True)
class FeatureRanking:
    mean_scores: np.ndarray
    order: np.ndarray
    iterations_run: int
    stop_reason: str
    history: list  # top-d per iteration (tuple, in rank order)
    scores: np.ndarray  # per-iteration MI, shape (iterations_run, m)
    feature_names: tuple = ()
    top_d: int = 0

    def ranked_names(self):
        return [self.feature_names[j] for j in self.order]


def undersample_majority(task: BinaryTask, seed: int) -> BinaryTask:
    """All minority rows plus an equal-size uniform draw (no replacement) of majority rows."""
    n1, n2 = task.n1, task.n2
    if n1 == 0 or n2 == 0:
        raise DegenerateTaskError(f"task {task.name} has an empty class ({n1}, {n2})")
    minority_label = 1 if n1 <= n2 else 0
    minority = np.flatnonzero(task.y == minority_label)
    majority = np.flatnonzero(task.y != minority_label)
    rng = rng_for(seed)
    drawn = np.sort(rng.choice(majority, size=minority.size, replace=False))
    return task.subset(np.concatenate([minority, drawn]))


def rank_order(mean_scores):
    """Descending by score; equal scores keep the lower column index first."""
    return np.argsort(-np.asarray(mean_scores), kind="stable")


def _iteration_scores(task, params, kinds, t):
    sub = undersample_majority(task, derive_seed(params.master_seed, t))
    return score_features(sub.X, sub.y, params.mi_config, kinds)


def rank_features(task: BinaryTask, params: RankingParams = RankingParams()) -> FeatureRanking:
    m = task.m
    if m < 1:
        raise ConfigError("task has no features")
    if task.n1 == 0 or task.n2 == 0:
        raise DegenerateTaskError(f"task {task.name} has an empty class ({task.n1}, {task.n2})")
    d = params.resolved_top_d(m)
    kinds = feature_kinds(task.X, params.mi_config)

    total = np.zeros(m)
    history, rows = [], []
    prev = None
    unchanged = 0
    reason = MAX_ITERS
    batch = max(1, params.n_jobs) * 4
    pool = ThreadPoolExecutor(params.n_jobs) if params.n_jobs > 1 else None
    try:
        t = 0
        while t < params.max_iters and reason != STABILIZED:
            ts = range(t, min(t + batch, params.max_iters))
            if pool is None:
                results = [_iteration_scores(task, params, kinds, i) for i in ts]
            else:
                results = list(pool.map(lambda i: _iteration_scores(task, params, kinds, i), ts))
            # stop rule applied strictly in iteration order
            for s in results:
                t += 1
                total += s
                rows.append(s)
                top = rank_order(total / t)[:d]
                key = frozenset(top.tolist()) if params.compare == SET else tuple(top.tolist())
                history.append(tuple(top.tolist()))
                if prev is not None and key == prev:
                    unchanged += 1
                else:
                    unchanged = 0
                prev = key
                if unchanged >= params.patience:
                    reason = STABILIZED
                    break
    finally:
        if pool is not None:
            pool.shutdown()

    mean = total / t
    return FeatureRanking(
        mean_scores=mean,
        order=rank_order(mean),
        iterations_run=t,
        stop_reason=reason,
        history=history,
        scores=np.array(rows),
        feature_names=tuple(task.feature_names),
        top_d=d,
    )
