"""Binary (class-pair x stratum) tasks and the sample-adequacy gate."""
import math
import re
from dataclasses import dataclass

import numpy as np

from .cohort import Label, LabeledCohort
from .errors import ConfigError

ALL = "ALL"
SEX = "SEX"
RACE = "RACE"
AGE_GT = "AGE_GT"
AGE_LE = "AGE_LE"


@dataclass(frozen=True)
class StratumSpec:
    kind: str = ALL
    value: object = None

    def __post_init__(self):
        if self.kind not in (ALL, SEX, RACE, AGE_GT, AGE_LE):
            raise ConfigError(f"unknown stratum kind {self.kind!r}")
        if self.kind in (AGE_GT, AGE_LE):
            v = float(self.value)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"age threshold must be a finite positive number, got {self.value!r}")
            object.__setattr__(self, "value", v)
        elif self.kind in (SEX, RACE) and self.value is None:
            raise ConfigError(f"{self.kind} stratum needs a value")

    @property
    def name(self):
        if self.kind == ALL:
            return "All"
        if self.kind in (SEX, RACE):
            return str(self.value)
        t = f"{self.value:g}"
        return f">{t}" if self.kind == AGE_GT else f"<={t}"

    @classmethod
    def parse(cls, text):
        """Parse ``all``, ``sex=Male``, ``race=White``, ``age>85`` or ``age<=85``."""
        if isinstance(text, StratumSpec):
            return text
        s = str(text).strip()
        if s.lower() == "all":
            return cls(ALL)
        m = re.fullmatch(r"(sex|race)\s*=\s*(.+)", s, flags=re.I)
        if m:
            return cls(m.group(1).upper(), m.group(2).strip())
        m = re.fullmatch(r"age\s*(>|<=)\s*([0-9.]+)", s, flags=re.I)
        if m:
            return cls(AGE_GT if m.group(1) == ">" else AGE_LE, float(m.group(2)))
        raise ConfigError(f"cannot parse stratum {text!r}")

    def mask(self, cohort: LabeledCohort):
        n = cohort.n
        if self.kind == ALL:
            return np.ones(n, dtype=bool)
        if self.kind == SEX:
            return np.array([v == str(self.value) for v in cohort.sex], dtype=bool)
        if self.kind == RACE:
            return np.array([v == str(self.value) for v in cohort.race], dtype=bool)
        age = cohort.age
        with np.errstate(invalid="ignore"):
            return age > self.value if self.kind == AGE_GT else age <= self.value


DEFAULT_STRATA = (
    StratumSpec(ALL),
    StratumSpec(SEX, "Male"),
    StratumSpec(SEX, "Female"),
    StratumSpec(RACE, "Black"),
    StratumSpec(RACE, "White"),
    StratumSpec(AGE_LE, 85),
    StratumSpec(AGE_GT, 85),
)

DEFAULT_PAIRS = (
    (Label.LATE, Label.AD),
    (Label.LATE_AD, Label.AD),
    (Label.LATE_AD, Label.LATE),
    (Label.LATE_AD, Label.CONTROL),
    (Label.LATE, Label.CONTROL),
    (Label.AD, Label.CONTROL),
)


@dataclass(frozen=True)
class BinaryTask:
    class1: Label
    class2: Label
    stratum: StratumSpec
    X: np.ndarray
    y: np.ndarray  # 1 = class1
    feature_names: tuple = ()
    rows: np.ndarray | None = None  # row indices into the source cohort

    @property
    def n1(self):
        return int(np.sum(self.y == 1))

    @property
    def n2(self):
        return int(np.sum(self.y == 0))

    @property
    def n(self):
        return int(self.y.size)

    @property
    def m(self):
        return self.X.shape[1]

    @property
    def name(self):
        return f"{self.class1.display} vs {self.class2.display} / {self.stratum.name}"

    @property
    def slug(self):
        s = re.sub(r"[^A-Za-z0-9]+", "_", self.stratum.name.replace("<=", "le").replace(">", "gt")).strip("_")
        return f"{self.class1.value}_vs_{self.class2.value}__{s}"

    def subset(self, rows):
        rows = np.asarray(rows)
        return BinaryTask(
            self.class1, self.class2, self.stratum, self.X[rows], self.y[rows], self.feature_names,
            None if self.rows is None else self.rows[rows],
        )


def make_task(cohort: LabeledCohort, class1, class2, stratum: StratumSpec = StratumSpec()) -> BinaryTask:
    class1, class2 = Label(class1), Label(class2)
    if class1 == class2:
        raise ValueError("class1 and class2 must differ")
    keep = np.isin(cohort.labels, [class1.value, class2.value]) & stratum.mask(cohort)
    rows = np.flatnonzero(keep)
    y = (cohort.labels[rows] == class1.value).astype(np.int8)
    return BinaryTask(class1, class2, stratum, cohort.features[rows], y, cohort.feature_names, rows)


@dataclass(frozen=True)
class AdequacyPolicy:
    min_minority: int = 10
    min_total: int = 48

    def __post_init__(self):
        if self.min_minority < 1 or self.min_total < 1:
            raise ConfigError("adequacy thresholds must be >= 1")


def counts_adequate(n1, n2, policy: AdequacyPolicy = AdequacyPolicy()) -> bool:
    return min(n1, n2) >= policy.min_minority and n1 + n2 >= policy.min_total


def is_adequate(task: BinaryTask, policy: AdequacyPolicy = AdequacyPolicy()) -> bool:
    return counts_adequate(task.n1, task.n2, policy)


def enumerate_tasks(cohort, pairs=DEFAULT_PAIRS, strata=DEFAULT_STRATA, policy=AdequacyPolicy()):
    """Every pair x stratum task with its adequacy verdict (pairs outer)."""
    out = []
    for c1, c2 in pairs:
        for s in strata:
            task = make_task(cohort, c1, c2, s)
            out.append((task, is_adequate(task, policy)))
    return out
