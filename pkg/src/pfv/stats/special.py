"""Special functions behind the p-value and entropy machinery.

Thin, domain-checked wrappers over :mod:`scipy.special`.
"""
import math

from scipy import special as _sp

from ..errors import DomainError


def _check_finite(name, *vals):
    for v in vals:
        if not math.isfinite(v):
            raise DomainError(f"{name}: non-finite argument {v!r}")


def log_gamma(x: float) -> float:
    x = float(x)
    _check_finite("log_gamma", x)
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(_sp.gammaln(x))


def digamma(x: float) -> float:
    x = float(x)
    _check_finite("digamma", x)
    if x <= 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(_sp.digamma(x))


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    a, b, x = float(a), float(b), float(x)
    _check_finite("reg_inc_beta", a, b, x)
    if a <= 0 or b <= 0:
        raise DomainError(f"reg_inc_beta requires a, b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires x in [0, 1], got {x}")
    return float(_sp.betainc(a, b, x))


def reg_inc_gamma(s: float, x: float, upper: bool = False) -> float:
    """Regularized incomplete gamma; lower P(s, x) by default, Q(s, x) if ``upper``."""
    s, x = float(s), float(x)
    if s <= 0 or math.isnan(s) or math.isinf(s):
        raise DomainError(f"reg_inc_gamma requires finite s > 0, got {s}")
    if math.isnan(x) or x < 0:
        raise DomainError(f"reg_inc_gamma requires x >= 0, got {x}")
    if math.isinf(x):
        return 0.0 if upper else 1.0
    return float(_sp.gammaincc(s, x) if upper else _sp.gammainc(s, x))


def chi2_sf(stat: float, dof: float) -> float:
    """Upper tail of the chi-square distribution."""
    if dof <= 0:
        raise DomainError(f"chi-square needs dof > 0, got {dof}")
    if stat <= 0:
        return 1.0
    return reg_inc_gamma(dof / 2.0, stat / 2.0, upper=True)


def f_sf(stat: float, dfn: float, dfd: float) -> float:
    """Upper tail of the F(dfn, dfd) distribution."""
    if dfn <= 0 or dfd <= 0:
        raise DomainError(f"F distribution needs positive dof, got ({dfn}, {dfd})")
    if stat <= 0:
        return 1.0
    if math.isinf(stat):
        return 0.0
    return reg_inc_beta(dfd / 2.0, dfn / 2.0, dfd / (dfd + dfn * stat))


def normal_two_sided(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))
