"""Special functions and the CDFs that turn test statistics into p-values.

The regularized incomplete beta function is evaluated with the modified
Lentz algorithm for its continued fraction, switching to the symmetric
relation ``I_x(a, b) = 1 - I_{1-x}(b, a)`` past ``x = (a + 1) / (a + b + 2)``.
The Student t and Fisher F distributions are both expressed through it.
"""

import math
from statistics import NormalDist

from ..errors import DomainError

_EPS = 1e-16
_TINY = 1e-300
_STANDARD_NORMAL = NormalDist()


def _check_positive(name, value):
    if not (value > 0) or math.isinf(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


def ln_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for ``x > 0``."""
    _check_positive("x", x)
    return math.lgamma(x)


def ln_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _continued_fraction(a, b, x):
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    max_iter = 500 + int(20.0 * math.sqrt(max(a, b)))
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def _ibeta(a, b, x, y):
    """I_x(a, b) with the complement ``y = 1 - x`` supplied separately.

    Passing ``y`` explicitly keeps precision when it comes from a formula
    such as ``t**2 / (df + t**2)`` rather than from ``1 - x``.
    """
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log(y) - ln_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _continued_fraction(a, b, x) / a
    return 1.0 - math.exp(log_front) * _continued_fraction(b, a, y) / b


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``.

    Raises:
        DomainError: if ``a`` or ``b`` is not positive or ``x`` is outside [0, 1].
    """
    _check_positive("a", a)
    _check_positive("b", b)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    value = _ibeta(a, b, x, 1.0 - x)
    return min(1.0, max(0.0, value))


def normal_cdf(z: float) -> float:
    """Standard normal CDF."""
    if math.isnan(z):
        raise DomainError("z is NaN")
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    """Inverse of :func:`normal_cdf` for ``p`` in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly inside (0, 1), got {p!r}")
    return _STANDARD_NORMAL.inv_cdf(p)


def _t_tail(t, df):
    # P(T > |t|), computed without cancellation.
    t2 = t * t
    return 0.5 * _ibeta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2))


def student_t_cdf(t: float, df: float) -> float:
    """CDF of Student's t distribution with ``df`` degrees of freedom."""
    _check_positive("df", df)
    if math.isnan(t):
        raise DomainError("t is NaN")
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = _t_tail(t, df)
    return 1.0 - tail if t > 0 else tail


def student_t_two_sided_p(t: float, df: float) -> float:
    """Two-sided p-value ``P(|T| >= |t|)``."""
    _check_positive("df", df)
    if math.isnan(t):
        raise DomainError("t is NaN")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return min(1.0, 2.0 * _t_tail(t, df))


def _check_f_args(f, df1, df2):
    _check_positive("df1", df1)
    _check_positive("df2", df2)
    if math.isnan(f) or f < 0:
        raise DomainError(f"F must be non-negative, got {f!r}")


def f_cdf(f: float, df1: float, df2: float) -> float:
    """CDF of the Fisher F distribution."""
    _check_f_args(f, df1, df2)
    if math.isinf(f):
        return 1.0
    denom = df1 * f + df2
    return _ibeta(0.5 * df1, 0.5 * df2, df1 * f / denom, df2 / denom)


def f_sf(f: float, df1: float, df2: float) -> float:
    """Upper tail ``1 - f_cdf(f, df1, df2)``, accurate for small p-values."""
    _check_f_args(f, df1, df2)
    if math.isinf(f):
        return 0.0
    denom = df1 * f + df2
    return _ibeta(0.5 * df2, 0.5 * df1, df2 / denom, df1 * f / denom)
