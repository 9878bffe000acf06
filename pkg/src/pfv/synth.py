"""Synthetic labeled cohorts with planted class differences."""
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cohort import Label, LabeledCohort
from .errors import ConfigError

MEAN_SHIFT = "mean_shift"
CATEGORY_TILT = "category_tilt"
CLASS_ORDER = (Label.LATE_AD, Label.LATE, Label.AD, Label.CONTROL)


@dataclass(frozen=True)
class Planted:
    feature: int
    kind: str
    effect: float
    pair: tuple = (Label.LATE, Label.AD)

    def __post_init__(self):
        if self.kind not in (MEAN_SHIFT, CATEGORY_TILT):
            raise ConfigError(f"unknown planted effect {self.kind!r}")
        object.__setattr__(self, "pair", (Label(self.pair[0]), Label(self.pair[1])))


@dataclass(frozen=True)
class SynthSpec:
    """``n_per_class`` follows CLASS_ORDER; ``noise`` is one family or one per feature.

    Families are ``"normal"`` or ``"categorical:K"`` (K equiprobable levels).
    """

    n_per_class: tuple = (0, 100, 0, 400)
    m: int = 30
    planted: tuple = ()
    noise: object = "normal"
    seed: int = 0
    feature_prefix: str = "f"

    def __post_init__(self):
        if len(self.n_per_class) != 4 or min(self.n_per_class) < 0:
            raise ConfigError("n_per_class needs four non-negative counts")
        if any(not 0 <= p.feature < self.m for p in self.planted):
            raise ConfigError("planted feature index out of range")
        fams = self.families()
        for p in self.planted:
            if p.kind == CATEGORY_TILT:
                k = _levels(fams[p.feature])
                if k is None:
                    raise ConfigError(f"category tilt on non-categorical feature {p.feature}")
                if not 0 <= p.effect <= (k - 1) / k:
                    raise ConfigError(f"tilt {p.effect} outside [0, {(k - 1) / k:.3g}]")

    def families(self):
        if isinstance(self.noise, str):
            return [self.noise] * self.m
        if len(self.noise) != self.m:
            raise ConfigError("need one noise family per feature")
        return list(self.noise)

    @property
    def feature_names(self):
        width = len(str(max(self.m - 1, 0)))
        return tuple(f"{self.feature_prefix}{j:0{width}d}" for j in range(self.m))


def _levels(family):
    if family == "normal":
        return None
    if family.startswith("categorical:"):
        return int(family.split(":", 1)[1])
    raise ConfigError(f"unknown noise family {family!r}")


def generate(spec: SynthSpec) -> LabeledCohort:
    rng = np.random.default_rng(spec.seed)
    labels = np.concatenate([np.full(n, lab.value) for lab, n in zip(CLASS_ORDER, spec.n_per_class)])
    n = labels.size
    perm = rng.permutation(n)
    labels = labels[perm]

    X = np.empty((n, spec.m))
    fams = spec.families()
    planted = {p.feature: p for p in spec.planted}
    for j, fam in enumerate(fams):
        k = _levels(fam)
        p = planted.get(j)
        if k is None:
            X[:, j] = rng.standard_normal(n)
            if p is not None and p.kind == MEAN_SHIFT:
                X[labels == p.pair[0].value, j] += p.effect
        else:
            u = rng.random(n)
            probs = np.full((n, k), 1.0 / k)
            if p is not None and p.kind == CATEGORY_TILT:
                hit = labels == p.pair[0].value
                probs[hit, :-1] -= p.effect / (k - 1)
                probs[hit, -1] += p.effect
            elif p is not None:
                X[:, j] = np.minimum((u * k).astype(int), k - 1)
                X[labels == p.pair[0].value, j] += p.effect
                continue
            X[:, j] = (u[:, None] > np.cumsum(probs, axis=1)[:, :-1]).sum(axis=1)

    sex = np.where(rng.random(n) < 0.5, "Male", "Female").astype(object)
    race = np.where(rng.random(n) < 0.85, "White", "Black").astype(object)
    age = np.round(rng.uniform(65.0, 100.0, n), 1)
    return LabeledCohort(
        features=X,
        feature_names=spec.feature_names,
        labels=labels,
        sex=sex,
        race=race,
        age=age,
        ids=np.arange(1, n + 1),
    )


def diagnostic_scores(labels, rng):
    """Braak / CERAD / TDP-43 values that the default label rule maps back to ``labels``."""
    n = len(labels)
    braak = np.empty(n, int)
    cerad = np.empty(n, int)
    tdp = np.empty(n, int)
    for i, lab in enumerate(labels):
        ad = lab in (Label.AD.value, Label.LATE_AD.value)
        late = lab in (Label.LATE.value, Label.LATE_AD.value)
        if ad:
            braak[i] = rng.integers(4, 7)
            cerad[i] = rng.integers(2, 5)
        else:
            braak[i] = rng.integers(0, 4)
            cerad[i] = rng.integers(1, 5)
        tdp[i] = rng.integers(1, 4) if late else 0
    return braak, cerad, tdp


def write_fixture(cohort: LabeledCohort, path, seed=0):
    """Write ``cohort`` as a raw CSV that the default label rule reproduces."""
    rng = np.random.default_rng(seed)
    braak, cerad, tdp = diagnostic_scores(cohort.labels, rng)
    ids = cohort.ids if cohort.ids is not None else np.arange(1, cohort.n + 1)
    header = ["id", "braak", "cerad", "tdp_stage", "sex", "race", "age", *cohort.feature_names]
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(cohort.n):
            w.writerow([
                int(ids[i]), int(braak[i]), int(cerad[i]), int(tdp[i]),
                cohort.sex[i], cohort.race[i], repr(float(cohort.age[i])),
                *(repr(float(v)) for v in cohort.features[i]),
            ])
    return path


def fixture_config(csv_name, output_dir="out", **overrides):
    """A run config matching a file written by :func:`write_fixture`."""
    cfg = {
        "input": {
            "path": str(csv_name),
            "id_column": "id",
            "schema": {"sex": "text", "race": "text"},
            "exclude": ["age"],
        },
        "label_rule": {
            "ad": {"all": [{"column": "braak", "op": ">=", "value": 4}, {"column": "cerad", "op": ">=", "value": 2}]},
            "late": {"column": "tdp_stage", "op": ">=", "value": 1},
        },
        "output_dir": str(output_dir),
    }
    cfg.update(overrides)
    return cfg
