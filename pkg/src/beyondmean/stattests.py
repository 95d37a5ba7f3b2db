"""Hypothesis tests used by the analysis pipeline.

All p-values are two-sided. Zero-variance inputs raise
:class:`~beyondmean.errors.DegenerateDataError` instead of producing
infinite or NaN statistics.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .descriptives import GroupSample
from .errors import (
    DegenerateDataError,
    InsufficientDataError,
    UnsupportedSizeError,
    UsageError,
)
from .specfun.special import f_sf, normal_cdf, normal_quantile, student_t_two_sided_p


@dataclass(frozen=True)
class TestResult:
    """Outcome of one test.

    ``df`` holds as many degrees of freedom as the reference distribution
    needs: none for Shapiro-Wilk, one for t, two for F. ``estimate`` is the
    signed mean difference (treatment minus control) for t-tests.
    """

    __test__ = False  # not a pytest class

    test_name: str
    statistic: float
    df: tuple[float, ...]
    p_value: float
    estimate: Optional[float] = None


def _values(g) -> np.ndarray:
    scores = g.scores if isinstance(g, GroupSample) else g
    return np.asarray(scores, dtype=np.float64)


def _is_constant(a: np.ndarray) -> bool:
    return bool(a.max() == a.min())


# Royston (1995) AS R94 polynomial coefficients, ascending powers.
_SW_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_SW_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_SW_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_SW_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_SW_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_SW_C6 = (-0.4803, -0.082676, 0.0030302)
_SW_G = (-2.273, 0.459)


def _poly(coeffs, x):
    result = 0.0
    for c in reversed(coeffs):
        result = result * x + c
    return result


def _shapiro_coefficients(n: int) -> np.ndarray:
    """Weights for the upper half of the order statistics, largest first."""
    half = n // 2
    if n == 3:
        return np.array([math.sqrt(0.5)])
    m = np.array([-normal_quantile((i - 0.375) / (n + 0.25)) for i in range(1, half + 1)])
    summ2 = 2.0 * float(np.sum(m * m))
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a = np.empty(half)
    a[0] = _poly(_SW_C1, rsn) + m[0] / ssumm2
    if n > 5:
        a[1] = _poly(_SW_C2, rsn) + m[1] / ssumm2
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
                        / (1.0 - 2.0 * a[0] ** 2 - 2.0 * a[1] ** 2))
        first_scaled = 2
    else:
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a[0] ** 2))
        first_scaled = 1
    a[first_scaled:] = m[first_scaled:] / fac
    return a


def shapiro_wilk(x: Sequence[float] | GroupSample) -> TestResult:
    """Shapiro-Wilk normality test with Royston's AS R94 p-value approximation.

    Valid for 3 <= n <= 5000. The W statistic is computed as the squared
    correlation between the ordered sample and the coefficient vector.

    Raises:
        UnsupportedSizeError: n outside [3, 5000].
        DegenerateDataError: all values equal.
    """
    values = np.sort(_values(x))
    n = len(values)
    if not 3 <= n <= 5000:
        raise UnsupportedSizeError(f"Shapiro-Wilk needs 3 <= n <= 5000, got n={n}")
    spread = values[-1] - values[0]
    if not spread > 0:
        raise DegenerateDataError("Shapiro-Wilk is undefined for a constant sample")

    half = _shapiro_coefficients(n)
    a = np.zeros(n)
    a[n - len(half):] = half[::-1]
    a[: len(half)] = -half

    xs = values / spread
    asa = a - a.mean()
    xsx = xs - xs.mean()
    ssa = float(asa @ asa)
    ssx = float(xsx @ xsx)
    sax = float(asa @ xsx)
    root = math.sqrt(ssa * ssx)
    w1 = (root - sax) * (root + sax) / (ssa * ssx)
    w = 1.0 - w1

    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(min(w, 1.0))) - math.pi / 3.0)
        return TestResult("Shapiro-Wilk", w, (), min(1.0, max(0.0, p)))

    y = math.log(w1) if w1 > 0 else -math.inf
    if n <= 11:
        gamma = _poly(_SW_G, n)
        if y >= gamma:
            return TestResult("Shapiro-Wilk", w, (), 1e-99)
        y = -math.log(gamma - y)
        mu = _poly(_SW_C3, n)
        sigma = math.exp(_poly(_SW_C4, n))
    else:
        ln_n = math.log(n)
        mu = _poly(_SW_C5, ln_n)
        sigma = math.exp(_poly(_SW_C6, ln_n))
    p = normal_cdf(-(y - mu) / sigma)
    return TestResult("Shapiro-Wilk", w, (), p)


def one_way_anova(groups: Sequence) -> TestResult:
    """One-way ANOVA F test across ``k >= 2`` groups.

    Raises:
        UsageError: fewer than two groups.
        InsufficientDataError: a group with fewer than two scores.
        DegenerateDataError: no variation within or between groups.
    """
    arrays = [_values(g) for g in groups]
    k = len(arrays)
    if k < 2:
        raise UsageError(f"one-way ANOVA needs at least 2 groups, got {k}")
    for a in arrays:
        if len(a) < 2:
            raise InsufficientDataError("every ANOVA group needs at least 2 scores")
    sizes = np.array([len(a) for a in arrays], dtype=np.float64)
    total = int(sizes.sum())
    df_between = k - 1
    df_within = total - k

    means = np.array([a.mean() for a in arrays])
    grand = float(np.concatenate(arrays).mean())
    ss_between = float(np.sum(sizes * (means - grand) ** 2))
    ss_within = sum(0.0 if _is_constant(a) else float(np.sum((a - m) ** 2))
                    for a, m in zip(arrays, means))

    if ss_within == 0.0:
        if means.max() == means.min():
            raise DegenerateDataError("ANOVA undefined: no variation within or between groups")
        return TestResult("One-way ANOVA", math.inf, (df_between, df_within), 0.0)
    if means.max() == means.min():
        ss_between = 0.0
    f = (ss_between / df_between) / (ss_within / df_within)
    return TestResult("One-way ANOVA", f, (df_between, df_within), f_sf(f, df_between, df_within))


def brown_forsythe(groups: Sequence, center: str = "median") -> TestResult:
    """Homogeneity-of-variance test: ANOVA on absolute deviations from each group's center.

    ``center="median"`` gives the Brown-Forsythe test, ``center="mean"``
    the classic Levene test.
    """
    if center not in ("median", "mean"):
        raise UsageError(f"center must be 'median' or 'mean', got {center!r}")
    arrays = [_values(g) for g in groups]
    locate = np.median if center == "median" else np.mean
    deviations = [np.abs(a - locate(a)) for a in arrays]
    anova = one_way_anova(deviations)
    name = "Brown-Forsythe" if center == "median" else "Levene"
    return TestResult(name, anova.statistic, anova.df, anova.p_value)


def levene(groups: Sequence) -> TestResult:
    return brown_forsythe(groups, center="mean")


def independent_t_test(control, treatment) -> TestResult:
    """Pooled-variance (Student) t-test; estimate is mean(treatment) - mean(control)."""
    c = _values(control)
    t = _values(treatment)
    if len(c) < 2 or len(t) < 2:
        raise InsufficientDataError("independent t-test needs at least 2 scores per arm")
    df = len(c) + len(t) - 2
    estimate = float(t.mean() - c.mean())
    if _is_constant(c) and _is_constant(t):
        raise DegenerateDataError("independent t-test undefined: both arms have zero variance")
    pooled = float((len(c) - 1) * c.var(ddof=1) + (len(t) - 1) * t.var(ddof=1)) / df
    se = math.sqrt(pooled * (1.0 / len(c) + 1.0 / len(t)))
    stat = estimate / se
    return TestResult("Independent t-test", stat, (float(df),),
                      student_t_two_sided_p(stat, df), estimate)


def dependent_t_test(pairs: Sequence[tuple[float, float]]) -> TestResult:
    """Paired t-test on per-subject differences ``treatment - control``."""
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise UsageError("pairs must be a sequence of (control, treatment) tuples")
    n = len(arr)
    if n < 2:
        raise InsufficientDataError("dependent t-test needs at least 2 pairs")
    d = arr[:, 1] - arr[:, 0]
    if _is_constant(d):
        raise DegenerateDataError("dependent t-test undefined: all paired differences are equal")
    estimate = float(d.mean())
    stat = estimate / float(d.std(ddof=1) / math.sqrt(n))
    return TestResult("Dependent t-test", stat, (float(n - 1),),
                      student_t_two_sided_p(stat, n - 1), estimate)
