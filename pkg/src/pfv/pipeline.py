"""End-to-end run: preprocess, rank + select per task, validate, test, report."""
import logging
import shutil
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .cohort import assign_labels, drop_incomplete, load_table, read_header
from .config import RunConfig, check_columns
from .errors import ConfigError
from .ranking import rank_features
from .report import (
    LogitRow, StatRow, emit_report, factors_text, pivot_pvalues, write_csv, write_json,
)
from .selection import select_features
from .stats import add_intercept, anova_oneway, chi2_independence, crosstab, logit_fit
from .strata import enumerate_tasks, make_task

log = logging.getLogger(__name__)

SKIPPED_INADEQUATE = "skipped_inadequate"
SKIPPED_EXCLUDED = "skipped_excluded"
COMPLETED = "completed"
ERROR = "error"

SUMMARY_HEADER = [
    "classes", "stratum", "learner", "best_k", "factors", "auroc_fs", "auroc_nofs",
    "improvement_abs", "improvement_rel",
]


def load_cohort(config: RunConfig):
    """Read, filter to complete rows, and label the configured input."""
    inp = config.input
    header = read_header(inp.path, inp.delimiter)
    schema = dict(inp.schema)
    for col in (inp.strata_columns.sex, inp.strata_columns.race):
        if col in header:
            schema.setdefault(col, "text")
    table = load_table(inp.path, schema, inp.delimiter, inp.missing_values)
    if inp.features is not None:
        feats = list(inp.features)
    else:
        skip = set(config.label_rule.columns()) | set(inp.exclude) | {inp.id_column}
        feats = [c for c in table.column_names if c not in skip and table.types[c].numeric]
    scope = set(feats) | set(config.label_rule.columns())
    sc = inp.strata_columns
    scope |= {c for c in (sc.sex, sc.race, sc.age) if c in table.columns}
    st = config.statistics
    scope |= set(st.anova) | set(st.chi2) | {c for pair in st.chi2_association for c in pair}
    scope |= {c for lg in st.logit for c in lg.covariates}
    if inp.id_column:
        scope.add(inp.id_column)
    complete = drop_incomplete(table, [c for c in table.column_names if c in scope])
    cohort = assign_labels(complete, config.label_rule, inp.id_column, sc, feats)
    return complete, cohort


def inventory_rows(entries, statuses=None):
    for i, (task, adequate) in enumerate(entries):
        row = [task.class1.display, task.class2.display, task.stratum.name, task.n1, task.n2, adequate]
        if statuses is not None:
            row.append(statuses[i])
        yield row


INVENTORY_HEADER = ["class1", "class2", "stratum", "n1", "n2", "adequate"]


def pvalue_curve(task, ranking):
    rows = []
    for rank, j in enumerate(ranking.order, start=1):
        x = task.X[:, j]
        try:
            res = anova_oneway([x[task.y == 1], x[task.y == 0]])
            rows.append((rank, task.feature_names[j], res.statistic, res.p_value))
        except ValueError:
            rows.append((rank, task.feature_names[j], None, None))
    return rows


def _run_task(task, config: RunConfig, out: Path):
    tdir = out / "tasks" / task.slug
    ranking = rank_features(task, config.ranking)
    emit_report(ranking, tdir / "ranking.csv")
    ranked = ranking.ranked_names()
    learners = [config.selection.classifier, *config.validation]
    results = []
    for spec in learners:
        params = replace(config.selection, classifier=spec)
        sel = select_features(task, ranking, params)
        emit_report(sel, tdir / f"curve_{spec.kind}.csv", ranked_names=ranked)
        results.append((spec.kind, sel))
    write_csv(tdir / "pvalues.csv", ["rank", "feature", "f_statistic", "p_value"], pvalue_curve(task, ranking))
    info = {
        "iterations_run": ranking.iterations_run,
        "stop_reason": ranking.stop_reason,
        "top_d": ranking.top_d,
        "best_k": {kind: sel.best_k for kind, sel in results},
    }
    return info, results


def _summary_rows(task, results):
    for kind, sel in results:
        fs, nofs = sel.best_auroc, sel.baseline_auroc
        rel = (fs - nofs) / nofs if nofs > 0 else None
        yield [
            f"{task.class1.display} vs. {task.class2.display}", task.stratum.name, kind, sel.best_k,
            factors_text(sel.selected), fs, nofs, fs - nofs, rel,
        ]


def run_statistics(config: RunConfig, table, cohort, out: Path):
    st = config.statistics
    if st.empty:
        return []
    written = []
    scen = [(c1, c2, f"{c1.display} vs. {c2.display}") for c1, c2 in config.pairs]
    anova, chi2, assoc, logit = [], [], [], []
    for stratum in st.strata:
        for c1, c2, label in scen:
            task = make_task(cohort, c1, c2, stratum)
            y = task.y

            def col(name):
                return table.columns[name][task.rows]

            for var in st.anova:
                x = col(var)
                anova.append(_stat(var, label, stratum.name, lambda: anova_oneway([x[y == 1], x[y == 0]])))
            for var in st.chi2:
                x = col(var)
                chi2.append(_stat(var, label, stratum.name, lambda: chi2_independence(crosstab(x, y))))
            for a, b in st.chi2_association:
                xa, xb = col(a), col(b)
                assoc.append(_stat(f"{a}~{b}", label, stratum.name, lambda: chi2_independence(crosstab(xa, xb))))
            for spec in st.logit:
                X = add_intercept(np.column_stack([col(c) for c in spec.covariates]))
                try:
                    logit.append(LogitRow(label, stratum.name, spec.covariates, task.n, fit=logit_fit(X, y)))
                except Exception as exc:  # noqa: BLE001 - reported in the table
                    logit.append(LogitRow(label, stratum.name, spec.covariates, task.n, error=f"{type(exc).__name__}: {exc}"))
    sdir = out / "stats"
    labels = [s[2] for s in scen]
    if st.anova:
        written.append(emit_report(anova, sdir / "anova.csv"))
        written.append(write_csv(sdir / "anova_wide.csv", ["variable", *labels],
                                 pivot_pvalues([r for r in anova if r.stratum == st.strata[0].name], labels)))
    if st.chi2:
        written.append(emit_report(chi2, sdir / "chi2.csv"))
        written.append(write_csv(sdir / "chi2_wide.csv", ["variable", *labels],
                                 pivot_pvalues([r for r in chi2 if r.stratum == st.strata[0].name], labels)))
    if st.chi2_association:
        written.append(emit_report(assoc, sdir / "chi2_association.csv"))
    if st.logit:
        written.append(emit_report(logit, sdir / "logit.csv"))
    return written


def _stat(var, scenario, stratum, fn):
    try:
        return StatRow(var, scenario, stratum, result=fn())
    except Exception as exc:  # noqa: BLE001 - reported in the table
        return StatRow(var, scenario, stratum, error=f"{type(exc).__name__}: {exc}")


def run_pipeline(config: RunConfig, overwrite: bool = False) -> dict:
    """Run every configured task and write all artifacts plus ``manifest.json``."""
    check_columns(config)
    out = Path(config.output_dir)
    if out.exists() and any(out.iterdir()):
        if not overwrite:
            raise ConfigError(f"output directory {out} is not empty")
        shutil.rmtree(out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()

    table, cohort = load_cohort(config)
    entries = enumerate_tasks(cohort, config.pairs, config.strata, config.adequacy)

    def work(entry):
        task, adequate = entry
        if (
            (task.class1, task.class2), task.stratum
        ) in config.exclude_tasks:
            return SKIPPED_EXCLUDED, None, [], 0.0
        if not adequate:
            return SKIPPED_INADEQUATE, None, [], 0.0
        start = time.perf_counter()
        try:
            info, results = _run_task(task, config, out)
        except Exception as exc:  # noqa: BLE001 - captured per task
            log.warning("task %s failed: %s", task.name, exc)
            return ERROR, {"error": f"{type(exc).__name__}: {exc}"}, [], time.perf_counter() - start
        return COMPLETED, info, results, time.perf_counter() - start

    if config.n_jobs > 1:
        with ThreadPoolExecutor(config.n_jobs) as pool:
            outcomes = list(pool.map(work, entries))
    else:
        outcomes = [work(e) for e in entries]

    statuses = [o[0] for o in outcomes]
    write_csv(out / "inventory.csv", [*INVENTORY_HEADER, "status"], inventory_rows(entries, statuses))
    summary = []
    for (task, _), (status, _, results, _) in zip(entries, outcomes):
        if status == COMPLETED:
            summary.extend(_summary_rows(task, results))
    write_csv(out / "selection_summary.csv", SUMMARY_HEADER, summary)
    run_statistics(config, table, cohort, out)

    tasks = []
    for (task, adequate), (status, info, _, secs) in zip(entries, outcomes):
        entry = {
            "task": task.name, "slug": task.slug, "n1": task.n1, "n2": task.n2,
            "adequate": adequate, "status": status,
        }
        entry.update(info or {})
        if config.manifest_timing:
            entry["seconds"] = round(secs, 3)
        tasks.append(entry)

    manifest = {
        "software": f"pfv {__version__}",
        "config": config.echo(),
        "cohort": {"n": cohort.n, "m": cohort.m, "class_counts": {k.value: v for k, v in cohort.class_counts().items()}},
        "seeds": {"master_seed": config.ranking.master_seed, "eval_seeds": list(config.selection.eval_seeds)},
        "tasks": tasks,
    }
    if config.manifest_timing:
        manifest["timing"] = {"total_seconds": round(time.perf_counter() - t0, 3)}
    files = sorted(p.relative_to(out).as_posix() for p in out.rglob("*") if p.is_file())
    manifest["artifacts"] = sorted({*files, "manifest.json"})
    write_json(out / "manifest.json", manifest)
    return manifest


def any_errors(manifest) -> bool:
    return any(t["status"] == ERROR for t in manifest["tasks"])
