import numpy as np

from ..errors import SingularError


def fit_lda(X, y):
    """Two-class linear discriminant with a pooled covariance."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    X1, X0 = X[y == 1], X[y == 0]
    mu1, mu0 = X1.mean(axis=0), X0.mean(axis=0)
    c1, c0 = X1 - mu1, X0 - mu0
    S = (c1.T @ c1 + c0.T @ c0) / max(X.shape[0] - 2, 1)
    w = _solve_ridged(S, mu1 - mu0)
    return {"coef": w, "intercept": -float(w @ (mu1 + mu0)) / 2.0, "scale": float(np.linalg.norm(w)) or 1.0}


def _solve_ridged(S, rhs):
    p = S.shape[0]
    scale = np.trace(S) / p
    if not scale > 0:
        raise SingularError("all features have zero variance")
    for jitter in (0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2):
        A = S + jitter * scale * np.eye(p)
        if np.linalg.cond(A) < 1e12:
            return np.linalg.solve(A, rhs)
    raise SingularError("pooled covariance stays singular after ridge jitter")


def lda_scores(params, X):
    return (np.asarray(X, dtype=float) @ params["coef"] + params["intercept"]) / params["scale"]
