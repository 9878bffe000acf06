"""Pick the rank-order prefix of features with the best held-out AUROC."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import ConfigError, DegenerateSplitError, UndefinedAUROCError
from .learners import LearnerSpec, fit, score
from .ranking import FeatureRanking
from .seeding import derive_seed, rng_for
from .strata import BinaryTask

MAX_SPLIT_RETRIES = 10


@dataclass(frozen=True)
class SelectionParams:
    test_fraction: float = 0.2
    eval_seeds: tuple = tuple(range(10))
    classifier: LearnerSpec = field(default_factory=LearnerSpec)
    max_subset_size: int | None = None
    balance_training: bool = False
    n_jobs: int = 1

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test_fraction must lie in (0, 1)")
        object.__setattr__(self, "eval_seeds", tuple(int(s) for s in self.eval_seeds))
        if not self.eval_seeds:
            raise ConfigError("at least one evaluation seed is required")
        if self.max_subset_size is not None and self.max_subset_size < 1:
            raise ConfigError("max_subset_size must be >= 1")


@dataclass(frozen=True)
class SelectionResult:
    curve_mean: np.ndarray  # index k-1 holds the mean AUROC of the top-k prefix
    curve_sd: np.ndarray
    best_k: int
    selected: list
    baseline_auroc: float
    per_seed: np.ndarray  # shape (max_subset_size, n_seeds)

    @property
    def best_auroc(self):
        return float(self.curve_mean[self.best_k - 1])


def auroc(scores, labels) -> float:
    """Mann-Whitney AUROC; tied positive/negative pairs count one half."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have the same shape")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAUROCError("AUROC needs at least one positive and one negative label")
    ranks = rankdata(scores)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def stratified_split(y, test_fraction, rng):
    """Per-class shuffled split; returns (train_idx, test_idx), both sorted."""
    y = np.asarray(y)
    train, test = [], []
    for c in (0, 1):
        idx = np.flatnonzero(y == c)
        idx = idx[rng.permutation(idx.size)]
        n_test = int(np.floor(test_fraction * idx.size + 0.5))
        test.append(idx[:n_test])
        train.append(idx[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def _balance(idx, y, rng):
    y_i = y[idx]
    pos, neg = idx[y_i == 1], idx[y_i == 0]
    small, big = (pos, neg) if pos.size <= neg.size else (neg, pos)
    return np.sort(np.concatenate([small, rng.choice(big, size=small.size, replace=False)]))


def _split_for(task, params, seed):
    for attempt in range(MAX_SPLIT_RETRIES):
        rng = rng_for(seed, attempt)
        train, test = stratified_split(task.y, params.test_fraction, rng)
        if params.balance_training:
            train = _balance(train, task.y, rng)
        if np.unique(task.y[test]).size == 2 and np.unique(task.y[train]).size == 2:
            return train, test, derive_seed(seed, attempt, 1)
    raise DegenerateSplitError(
        f"no split with both classes in train and test after {MAX_SPLIT_RETRIES} attempts "
        f"(n1={task.n1}, n2={task.n2}, test_fraction={params.test_fraction})"
    )


def evaluate_subset(task: BinaryTask, feature_idx, params: SelectionParams, seed: int) -> float:
    """Held-out AUROC of the classifier trained on the ``feature_idx`` columns."""
    feature_idx = np.asarray(feature_idx, dtype=int)
    if feature_idx.size == 0:
        raise ValueError("feature_idx must be non-empty")
    if feature_idx.min() < 0 or feature_idx.max() >= task.m:
        raise IndexError("feature index out of range")
    train, test, fit_seed = _split_for(task, params, seed)
    X = task.X[:, feature_idx]
    model = fit(params.classifier, X[train], task.y[train], fit_seed)
    return auroc(score(model, X[test]), task.y[test])


def best_prefix(curve_mean) -> int:
    """1-based argmax; the smallest k wins a tie."""
    return int(np.argmax(np.asarray(curve_mean))) + 1


def select_features(task: BinaryTask, ranking: FeatureRanking, params: SelectionParams = SelectionParams()) -> SelectionResult:
    m = task.m
    order = np.asarray(ranking.order)
    if order.size != m or sorted(order.tolist()) != list(range(m)):
        raise ValueError("ranking does not cover the task's features")
    kmax = m if params.max_subset_size is None else min(params.max_subset_size, m)
    ks = list(range(1, kmax + 1))
    jobs = [(k, s) for k in ks for s in params.eval_seeds]
    if kmax < m:
        jobs += [(m, s) for s in params.eval_seeds]

    def run(job):
        k, s = job
        return evaluate_subset(task, order[:k], params, s)

    if params.n_jobs > 1:
        with ThreadPoolExecutor(params.n_jobs) as pool:
            values = list(pool.map(run, jobs))
    else:
        values = [run(j) for j in jobs]
    table = dict(zip(jobs, values))

    n_seeds = len(params.eval_seeds)
    per_seed = np.array([[table[(k, s)] for s in params.eval_seeds] for k in ks])
    mean = per_seed.sum(axis=1) / n_seeds
    sd = per_seed.std(axis=1, ddof=1) if n_seeds > 1 else np.zeros(kmax)
    best = best_prefix(mean)
    baseline = np.array([table[(m, s)] for s in params.eval_seeds]).sum() / n_seeds
    names = task.feature_names or tuple(str(j) for j in range(m))
    return SelectionResult(
        curve_mean=mean,
        curve_sd=sd,
        best_k=best,
        selected=[names[j] for j in order[:best]],
        baseline_auroc=float(baseline),
        per_seed=per_seed,
    )
