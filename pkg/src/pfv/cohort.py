"""Tabular ingest, completeness filtering, and four-way diagnostic labeling."""
import csv
import operator
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaError

DEFAULT_MISSING = ("", "NA", "NaN")

REAL = "real"
INTEGER = "integer"
TEXT = "text"


class Label(str, Enum):
    LATE_AD = "LATE_AD"
    LATE = "LATE"
    AD = "AD"
    CONTROL = "CONTROL"

    def __str__(self):
        return self.value

    @property
    def display(self):
        return {"LATE_AD": "LATE+AD", "CONTROL": "Control"}.get(self.value, self.value)


@dataclass(frozen=True)
class ColumnType:
    kind: str = REAL
    codes: dict | None = None  # categorical: raw text -> integer code

    @property
    def numeric(self):
        return self.kind != TEXT

    @classmethod
    def parse(cls, spec):
        if isinstance(spec, ColumnType):
            return spec
        if isinstance(spec, str):
            if spec not in (REAL, INTEGER, TEXT):
                raise SchemaError(f"unknown column type {spec!r}")
            return cls(spec)
        if isinstance(spec, dict) and "categorical" in spec:
            codes = {str(k): int(v) for k, v in spec["categorical"].items()}
            return cls("categorical", codes)
        raise SchemaError(f"cannot interpret column type {spec!r}")


@dataclass(frozen=True)
class RawTable:
    column_names: tuple
    columns: dict  # name -> ndarray (float for numeric kinds, object for text)
    missing: dict  # name -> bool ndarray
    types: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.column_names)) != len(self.column_names):
            raise SchemaError("duplicate column names")
        if any(not c for c in self.column_names):
            raise SchemaError("empty column name")
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise SchemaError("columns have unequal lengths")

    @property
    def n_rows(self):
        if not self.column_names:
            return 0
        return len(self.columns[self.column_names[0]])

    @property
    def missing_mask(self):
        return np.column_stack([self.missing[c] for c in self.column_names]) if self.column_names else np.zeros((0, 0), bool)

    def take(self, rows):
        return RawTable(
            self.column_names,
            {c: v[rows] for c, v in self.columns.items()},
            {c: v[rows] for c, v in self.missing.items()},
            self.types,
        )

    def require(self, names):
        unknown = [c for c in names if c not in self.columns]
        if unknown:
            raise SchemaError(f"unknown column(s): {', '.join(unknown)}")


def load_table(path, schema=None, delimiter=",", missing_values=DEFAULT_MISSING) -> RawTable:
    """Read a delimited text file with a header row.

    Columns not named in ``schema`` are read as real numbers.
    """
    schema = {k: ColumnType.parse(v) for k, v in (schema or {}).items()}
    missing_values = set(missing_values)
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError("file has no header row") from None
        rows = []
        for i, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, found {len(row)}", row=i)
            rows.append(row)
    unknown = set(schema) - set(header)
    if unknown:
        raise SchemaError(f"schema names column(s) absent from file: {', '.join(sorted(unknown))}")

    columns, missing, types = {}, {}, {}
    for j, name in enumerate(header):
        ctype = schema.get(name, ColumnType(REAL))
        raw = [r[j].strip() for r in rows]
        miss = np.array([v in missing_values for v in raw], dtype=bool)
        columns[name] = _convert(name, raw, miss, ctype)
        missing[name] = miss
        types[name] = ctype
    return RawTable(tuple(header), columns, missing, types)


def _convert(name, raw, miss, ctype):
    if ctype.kind == TEXT:
        return np.array([None if m else v for v, m in zip(raw, miss)], dtype=object)
    out = np.full(len(raw), np.nan)
    for i, (v, m) in enumerate(zip(raw, miss)):
        if m:
            continue
        if ctype.codes is not None:
            if v not in ctype.codes:
                raise ParseError(f"column {name!r}: unknown category {v!r}", row=i + 1)
            out[i] = ctype.codes[v]
            continue
        try:
            out[i] = float(v)
        except ValueError:
            raise ParseError(f"column {name!r}: cannot parse {v!r} as a number", row=i + 1) from None
        if ctype.kind == INTEGER and out[i] != int(out[i]):
            raise ParseError(f"column {name!r}: {v!r} is not an integer", row=i + 1)
    return out


def drop_incomplete(table: RawTable, scope=None) -> RawTable:
    """Keep rows with no missing value in any ``scope`` column (default: all)."""
    scope = list(table.column_names if scope is None else scope)
    table.require(scope)
    keep = np.ones(table.n_rows, dtype=bool)
    for c in scope:
        keep &= ~table.missing[c]
    return table.take(np.flatnonzero(keep))


_OPS = {
    ">=": operator.ge,
    ">": operator.gt,
    "<=": operator.le,
    "<": operator.lt,
    "==": operator.eq,
    "!=": operator.ne,
}


@dataclass(frozen=True)
class Compare:
    column: str
    op: str
    value: float

    def __post_init__(self):
        if self.op not in _OPS:
            raise SchemaError(f"unknown comparison operator {self.op!r}")

    def columns(self):
        return {self.column}

    def evaluate(self, table):
        return _OPS[self.op](table.columns[self.column], self.value)


@dataclass(frozen=True)
class AllOf:
    terms: tuple

    def columns(self):
        return set().union(*(t.columns() for t in self.terms))

    def evaluate(self, table):
        return np.logical_and.reduce([t.evaluate(table) for t in self.terms])


@dataclass(frozen=True)
class AnyOf:
    terms: tuple

    def columns(self):
        return set().union(*(t.columns() for t in self.terms))

    def evaluate(self, table):
        return np.logical_or.reduce([t.evaluate(table) for t in self.terms])


def parse_predicate(spec):
    """Build a predicate from ``{column, op, value}`` or ``{all|any: [...]}``."""
    if isinstance(spec, (Compare, AllOf, AnyOf)):
        return spec
    if not isinstance(spec, dict):
        raise SchemaError(f"cannot interpret predicate {spec!r}")
    if "all" in spec:
        return AllOf(tuple(parse_predicate(s) for s in spec["all"]))
    if "any" in spec:
        return AnyOf(tuple(parse_predicate(s) for s in spec["any"]))
    try:
        return Compare(str(spec["column"]), str(spec["op"]), float(spec["value"]))
    except KeyError as exc:
        raise SchemaError(f"predicate is missing key {exc}") from None


@dataclass(frozen=True)
class LabelRule:
    ad_predicate: object
    late_predicate: object

    @classmethod
    def from_dict(cls, d):
        return cls(parse_predicate(d["ad"]), parse_predicate(d["late"]))

    @classmethod
    def default(cls):
        # Placeholder thresholds; replace with the cohort's own diagnostic rule.
        return cls(
            AllOf((Compare("braak", ">=", 4), Compare("cerad", ">=", 2))),
            Compare("tdp_stage", ">=", 1),
        )

    def columns(self):
        return self.ad_predicate.columns() | self.late_predicate.columns()


@dataclass(frozen=True)
class StrataColumns:
    sex: str | None = "sex"
    race: str | None = "race"
    age: str | None = "age"


@dataclass(frozen=True)
class LabeledCohort:
    features: np.ndarray
    feature_names: tuple
    labels: np.ndarray  # str codes of Label
    sex: np.ndarray
    race: np.ndarray
    age: np.ndarray
    ids: np.ndarray | None = None

    def __post_init__(self):
        n = self.features.shape[0]
        if np.isnan(self.features).any():
            raise SchemaError("cohort features contain missing values")
        for arr in (self.labels, self.sex, self.race, self.age):
            if len(arr) != n:
                raise SchemaError("cohort attribute lengths differ from feature rows")
        self.features.setflags(write=False)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def m(self):
        return self.features.shape[1]

    def class_counts(self):
        return {lab: int(np.sum(self.labels == lab.value)) for lab in Label}

    def column(self, name):
        try:
            return self.features[:, self.feature_names.index(name)]
        except ValueError:
            raise SchemaError(f"unknown feature {name!r}") from None


def assign_labels(
    table: RawTable,
    rule: LabelRule,
    id_column=None,
    strata_columns: StrataColumns = StrataColumns(),
    features=None,
    exclude=(),
) -> LabeledCohort:
    """Label every row and split off the feature matrix.

    Label is LATE_AD when both predicates hold, LATE or AD when only one
    does, CONTROL otherwise. ID and diagnostic columns never become
    features; by default every other numeric column does.
    """
    diag = rule.columns()
    table.require(sorted(diag))
    for c in diag:
        if table.missing[c].any():
            raise SchemaError(f"diagnostic column {c!r} has missing values; drop incomplete rows first")
        if not table.types.get(c, ColumnType()).numeric:
            raise SchemaError(f"diagnostic column {c!r} must be numeric")
    ad = np.asarray(rule.ad_predicate.evaluate(table), dtype=bool)
    late = np.asarray(rule.late_predicate.evaluate(table), dtype=bool)
    labels = np.where(
        ad & late, Label.LATE_AD.value,
        np.where(late, Label.LATE.value, np.where(ad, Label.AD.value, Label.CONTROL.value)),
    )

    skip = set(diag) | set(exclude)
    if id_column is not None:
        table.require([id_column])
        skip.add(id_column)
    if features is None:
        features = [c for c in table.column_names if c not in skip and table.types.get(c, ColumnType()).numeric]
    else:
        table.require(features)
        bad = [c for c in features if c in skip or not table.types.get(c, ColumnType()).numeric]
        if bad:
            raise SchemaError(f"column(s) cannot be features: {', '.join(bad)}")
    n = table.n_rows
    X = np.column_stack([table.columns[c] for c in features]).astype(float) if features else np.zeros((n, 0))

    def attr(name, numeric):
        if name is None or name not in table.columns:
            return np.full(n, np.nan) if numeric else np.full(n, None, dtype=object)
        col = table.columns[name]
        if numeric:
            return np.asarray(col, dtype=float)
        return np.array([None if v is None else _as_text(v) for v in col], dtype=object)

    ids = None if id_column is None else np.asarray(table.columns[id_column])
    return LabeledCohort(
        features=X,
        feature_names=tuple(features),
        labels=labels,
        sex=attr(strata_columns.sex, False),
        race=attr(strata_columns.race, False),
        age=attr(strata_columns.age, True),
        ids=ids,
    )


def _as_text(v):
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def read_header(path, delimiter=","):
    with open(Path(path), newline="") as fh:
        row = next(csv.reader(fh, delimiter=delimiter), None)
    if row is None:
        raise ParseError("file has no header row")
    return [h.strip() for h in row]
