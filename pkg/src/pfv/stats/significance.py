"""One-way ANOVA and chi-square independence test."""
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateTableError
from .special import chi2_sf, f_sf

ANOVA_F = "anova_f"
CHI2 = "chi2"


@dataclass(frozen=True)
class TestResult:
    statistic: float
    dof: tuple
    p_value: float
    kind: str
    degenerate: bool = False

    __test__ = False



def anova_oneway(groups) -> TestResult:
    groups = [np.asarray(g, dtype=float).ravel() for g in groups]
    g = len(groups)
    if g < 2:
        raise ValueError("ANOVA needs at least two groups")
    if any(a.size == 0 for a in groups):
        raise ValueError("every ANOVA group needs at least one value")
    n = sum(a.size for a in groups)
    if n <= g:
        raise ValueError("ANOVA needs more observations than groups")
    grand = np.concatenate(groups).mean()
    ss_between = float(sum(a.size * (a.mean() - grand) ** 2 for a in groups))
    ss_within = float(sum(((a - a.mean()) ** 2).sum() for a in groups))
    dfn, dfd = g - 1, n - g
    dof = (float(dfn), float(dfd))
    if ss_within == 0.0:
        if ss_between == 0.0:
            return TestResult(0.0, dof, 1.0, ANOVA_F)
        return TestResult(float("inf"), dof, 0.0, ANOVA_F, degenerate=True)
    f = (ss_between / dfn) / (ss_within / dfd)
    return TestResult(f, dof, f_sf(f, dfn, dfd), ANOVA_F)


def chi2_independence(table) -> TestResult:
    obs = np.asarray(table, dtype=float)
    if obs.ndim != 2:
        raise DegenerateTableError("contingency table must be 2-D")
    if (obs < 0).any():
        raise DegenerateTableError("negative counts")
    r, c = obs.shape
    if r < 2 or c < 2:
        raise DegenerateTableError(f"{r}x{c} table has zero degrees of freedom")
    rows, cols = obs.sum(axis=1), obs.sum(axis=0)
    if (rows == 0).any() or (cols == 0).any():
        raise DegenerateTableError("zero row or column margin")
    expected = np.outer(rows, cols) / obs.sum()
    stat = float(((obs - expected) ** 2 / expected).sum())
    dof = (r - 1) * (c - 1)
    return TestResult(stat, (float(dof),), chi2_sf(stat, dof), CHI2)


def crosstab(a, b):
    """Count matrix of two discrete vectors (levels in sorted order)."""
    la, ia = np.unique(np.asarray(a), return_inverse=True)
    lb, ib = np.unique(np.asarray(b), return_inverse=True)
    out = np.zeros((la.size, lb.size), dtype=np.int64)
    np.add.at(out, (ia, ib), 1)
    return out
