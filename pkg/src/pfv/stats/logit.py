"""Logistic regression by iteratively reweighted least squares."""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import CollinearityError, DegenerateFitError, SeparationError
from .special import chi2_sf, normal_two_sided

Z975 = 1.959964
SEPARATION_BOUND = 30.0


@dataclass(frozen=True)
class LogitFit:
    coefficients: np.ndarray
    standard_errors: np.ndarray
    odds_ratios: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    wald_p: np.ndarray
    llf: float
    llr_stat: float
    llr_p: float
    converged: bool
    n_iter: int


def add_intercept(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return np.column_stack([np.ones(X.shape[0]), X])


def _loglik(eta, y):
    # log(1 + e^eta) computed stably
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def logit_fit(X, y, max_iter: int = 100, grad_tol: float = 1e-8, ll_tol: float = 1e-10) -> LogitFit:
    """Fit ``P(y=1) = sigmoid(X @ beta)``; column 0 of ``X`` must be the intercept."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n, p = X.shape
    if y.size != n:
        raise ValueError("X and y row counts differ")
    if n <= p:
        raise DegenerateFitError(f"need n > number of covariates ({n} <= {p})")
    if not ((y == 0) | (y == 1)).all():
        raise ValueError("y must be binary 0/1")
    n_pos = y.sum()
    if n_pos == 0 or n_pos == n:
        raise DegenerateFitError("y has a single class")
    if np.linalg.matrix_rank(X) < p:
        raise CollinearityError("design matrix is rank deficient")

    beta = np.zeros(p)
    eta = X @ beta
    ll = _loglik(eta, y)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        mu = 1.0 / (1.0 + np.exp(-eta))
        grad = X.T @ (y - mu)
        w = mu * (1.0 - mu)
        info = X.T @ (X * w[:, None])
        try:
            step = np.linalg.solve(info, grad)
        except np.linalg.LinAlgError as exc:
            raise CollinearityError("singular information matrix") from exc
        beta = beta + step
        if np.abs(beta).max() > SEPARATION_BOUND:
            raise SeparationError("coefficients diverge; data look perfectly separated")
        eta = X @ beta
        ll_new = _loglik(eta, y)
        mu = 1.0 / (1.0 + np.exp(-eta))
        grad = X.T @ (y - mu)
        if np.abs(grad).max() < grad_tol or abs(ll_new - ll) < ll_tol:
            ll = ll_new
            converged = True
            break
        ll = ll_new

    mu = 1.0 / (1.0 + np.exp(-eta))
    info = X.T @ (X * (mu * (1.0 - mu))[:, None])
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError as exc:
        raise CollinearityError("singular information matrix") from exc
    se = np.sqrt(np.diag(cov))
    z = beta / se
    wald = np.array([normal_two_sided(v) for v in z])

    pbar = n_pos / n
    ll0 = n * (pbar * math.log(pbar) + (1 - pbar) * math.log(1 - pbar))
    llr = max(2.0 * (ll - ll0), 0.0)
    llr_p = chi2_sf(llr, p - 1) if p > 1 else 1.0
    return LogitFit(
        coefficients=beta,
        standard_errors=se,
        odds_ratios=np.exp(beta),
        ci_low=beta - Z975 * se,
        ci_high=beta + Z975 * se,
        wald_p=wald,
        llf=ll,
        llr_stat=llr,
        llr_p=llr_p,
        converged=converged,
        n_iter=it,
    )
