"""Byte-stable CSV/JSON writers for every artifact the pipeline emits."""
import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ranking import FeatureRanking
from .selection import SelectionResult
from .stats.logit import LogitFit
from .stats.significance import TestResult


def fmt(v):
    """Six significant digits, '.' decimal separator; blanks for None."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.6g}"
    return str(v)


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True, default=_json_default))
        fh.write("\n")
    return path


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if isinstance(o, Path):
        return str(o)
    return str(o)


@dataclass(frozen=True)
class StatRow:
    variable: str
    scenario: str
    stratum: str
    result: TestResult | None = None
    error: str | None = None


@dataclass(frozen=True)
class LogitRow:
    scenario: str
    stratum: str
    covariates: tuple
    n: int
    fit: LogitFit | None = None
    error: str | None = None


def factors_text(names):
    return " ".join(f"{i}.{n}" for i, n in enumerate(names, start=1))


def ranking_rows(r: FeatureRanking):
    for rank, j in enumerate(r.order, start=1):
        yield rank, r.feature_names[j] if r.feature_names else str(j), r.mean_scores[j]


def curve_rows(s: SelectionResult, ranked_names):
    for k in range(1, len(s.curve_mean) + 1):
        yield k, ranked_names[k - 1], s.curve_mean[k - 1], s.curve_sd[k - 1]


def stat_rows(rows):
    for r in rows:
        res = r.result
        if res is None:
            yield r.variable, r.scenario, r.stratum, None, None, None, None, "error", r.error
        else:
            dof = " ".join(fmt(d) for d in res.dof)
            status = "degenerate" if res.degenerate else "ok"
            yield r.variable, r.scenario, r.stratum, res.kind, res.statistic, dof, res.p_value, status, ""


def logit_rows(rows):
    for r in rows:
        names = ("intercept", *r.covariates)
        if r.fit is None:
            for name in names[1:]:
                yield (r.scenario, r.stratum, name, r.n, "/", "/", "/", "/", "/", "/", "/", None, 1.0, "error", r.error)
            continue
        f = r.fit
        for i, name in enumerate(names):
            yield (
                r.scenario, r.stratum, name, r.n, f.coefficients[i], f.standard_errors[i], f.odds_ratios[i],
                f.ci_low[i], f.ci_high[i], f.wald_p[i], f.llr_stat, len(r.covariates), f.llr_p, "ok" if f.converged else "not_converged", "",
            )


STAT_HEADER = ["variable", "scenario", "stratum", "kind", "statistic", "dof", "p_value", "status", "message"]
LOGIT_HEADER = [
    "scenario", "stratum", "covariate", "n", "coef", "se", "odds_ratio", "ci_low", "ci_high", "wald_p",
    "llr_stat", "llr_dof", "llr_p", "status", "message",
]


def emit_report(result, path, format="csv", ranked_names=None):
    """Write one result object (or a list of stats rows) to ``path``."""
    if format == "json":
        return write_json(path, _as_jsonable(result))
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    if isinstance(result, FeatureRanking):
        return write_csv(path, ["rank", "feature", "mean_score"], ranking_rows(result))
    if isinstance(result, SelectionResult):
        if ranked_names is None:
            ranked_names = list(result.selected) + [""] * (len(result.curve_mean) - result.best_k)
        return write_csv(path, ["k", "feature", "mean_auroc", "sd"], curve_rows(result, ranked_names))
    rows = list(result)
    if rows and isinstance(rows[0], LogitRow):
        return write_csv(path, LOGIT_HEADER, logit_rows(rows))
    if all(isinstance(r, StatRow) for r in rows):
        return write_csv(path, STAT_HEADER, stat_rows(rows))
    raise TypeError(f"cannot report {type(result).__name__}")


def _as_jsonable(obj):
    if isinstance(obj, FeatureRanking):
        return {
            "mean_scores": obj.mean_scores, "order": obj.order, "iterations_run": obj.iterations_run,
            "stop_reason": obj.stop_reason, "feature_names": obj.feature_names, "top_d": obj.top_d,
        }
    if isinstance(obj, SelectionResult):
        return {
            "curve_mean": obj.curve_mean, "curve_sd": obj.curve_sd, "best_k": obj.best_k,
            "selected": obj.selected, "baseline_auroc": obj.baseline_auroc,
        }
    return obj


def pivot_pvalues(rows, scenarios):
    """Wide variable x scenario p-value table (one stratum)."""
    table = {}
    for r in rows:
        table.setdefault(r.variable, {})[r.scenario] = None if r.result is None else r.result.p_value
    return [[var, *(cells.get(s) for s in scenarios)] for var, cells in table.items()]
