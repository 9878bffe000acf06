"""Training/scoring front end for the three downstream classifiers."""
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigError, DegenerateFitError, ShapeError
from ..seeding import rng_for
from .extra_trees import grow_forest, tree_scores
from .lda import fit_lda, lda_scores
from .mlp import mlp_scores, train_mlp

EXTRA_TREES = "extra_trees"
LDA = "lda"
MLP = "mlp"
KINDS = (EXTRA_TREES, LDA, MLP)


@dataclass(frozen=True)
class ExtraTreesParams:
    n_trees: int = 100
    min_split: int = 2
    k_candidate_features: int | str = "sqrt"

    def __post_init__(self):
        if self.n_trees < 1:
            raise ConfigError("n_trees must be >= 1")
        if self.min_split < 2:
            raise ConfigError("min_split must be >= 2")
        k = self.k_candidate_features
        if k != "sqrt" and not (isinstance(k, int) and k >= 1):
            raise ConfigError("k_candidate_features must be 'sqrt' or a positive integer")

    def candidates(self, m):
        if self.k_candidate_features == "sqrt":
            return max(1, int(math.sqrt(m)))
        return min(int(self.k_candidate_features), m)


@dataclass(frozen=True)
class MLPParams:
    hidden_sizes: tuple = (16,)
    activation: str = "relu"
    epochs: int = 200
    learning_rate: float = 0.05
    l2: float = 1e-4
    batch_size: int | None = 32

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        if any(h < 1 for h in self.hidden_sizes):
            raise ConfigError("hidden layer sizes must be >= 1")
        if self.activation not in ("relu", "tanh"):
            raise ConfigError(f"unknown activation {self.activation!r}")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be > 0")
        if self.epochs < 1 or self.l2 < 0:
            raise ConfigError("epochs must be >= 1 and l2 >= 0")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")


@dataclass(frozen=True)
class LearnerSpec:
    kind: str = EXTRA_TREES
    extra_trees: ExtraTreesParams = field(default_factory=ExtraTreesParams)
    mlp: MLPParams = field(default_factory=MLPParams)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown learner kind {self.kind!r}")

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, str):
            return cls(d)
        d = dict(d)
        kind = d.pop("kind", EXTRA_TREES)
        et = ExtraTreesParams(**d.pop("extra_trees", {}))
        mlp = MLPParams(**d.pop("mlp", {}))
        if d:
            raise ConfigError(f"unknown learner option(s): {', '.join(d)}")
        return cls(kind, et, mlp)

    def with_trees(self, n_trees):
        return replace(self, extra_trees=replace(self.extra_trees, n_trees=n_trees))


@dataclass(frozen=True)
class FittedModel:
    kind: str
    params: dict
    seed: int
    n_features: int
    meta: dict = field(default_factory=dict)


def fit(spec: LearnerSpec, X, y, seed: int) -> FittedModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(np.int8)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ShapeError("X must be 2-D with one row per label")
    if X.shape[0] < 2 or np.unique(y).size < 2:
        raise DegenerateFitError("training data need both classes")
    if np.isnan(X).any():
        raise ValueError("training data contain missing values")
    rng = rng_for(seed)
    meta = {}
    if spec.kind == EXTRA_TREES:
        p = spec.extra_trees
        params = grow_forest(X, y, p.n_trees, p.candidates(X.shape[1]), p.min_split, rng)
    elif spec.kind == LDA:
        params = fit_lda(X, y)
    else:
        params, history = train_mlp(X, y, spec.mlp, rng)
        meta["loss_history"] = history
    return FittedModel(spec.kind, params, seed, X.shape[1], meta)


def score(model: FittedModel, X) -> np.ndarray:
    """Positive-class score per row (larger means more likely class 1)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ShapeError(f"expected {model.n_features} columns, got {X.shape[-1] if X.ndim else 0}")
    if model.kind == EXTRA_TREES:
        return tree_scores(model.params, X).mean(axis=0)
    if model.kind == LDA:
        return lda_scores(model.params, X)
    return mlp_scores(model.params, X)
