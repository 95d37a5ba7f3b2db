"""Effect sizes for mean differences (Cohen's d, Hedges' g) and for
relative variability (lnCVR).

Every function accepts either :class:`ArmSummary` objects (so published
summary tables can be checked without raw data) or raw
:class:`~beyondmean.descriptives.GroupSample` arms, which are summarized
with :func:`~beyondmean.descriptives.describe` first. Signs follow
"treatment minus control" throughout.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .descriptives import DescriptiveStats, GroupSample, describe
from .errors import CVUndefinedError, DegenerateDataError, InsufficientDataError, UsageError

LN_CVR = "lnCVR"


@dataclass(frozen=True)
class ArmSummary:
    n: int
    mean: float
    sd: float

    def __post_init__(self):
        if self.n < 2:
            raise InsufficientDataError(f"an arm summary needs n >= 2, got {self.n}")
        if self.sd < 0:
            raise UsageError(f"sd must be non-negative, got {self.sd}")


@dataclass(frozen=True)
class EffectSize:
    """A named effect size; for lnCVR ``auxiliary`` is ``exp(value)``."""

    name: str
    value: float
    auxiliary: Optional[float] = None


def _summary(arm) -> ArmSummary:
    if isinstance(arm, ArmSummary):
        return arm
    if isinstance(arm, DescriptiveStats):
        return ArmSummary(arm.n, arm.mean, arm.sd)
    if isinstance(arm, GroupSample):
        s = describe(arm)
        return ArmSummary(s.n, s.mean, s.sd)
    raise UsageError(f"expected ArmSummary, DescriptiveStats or GroupSample, got {type(arm).__name__}")


def pooled_sd(control, treatment) -> float:
    c, t = _summary(control), _summary(treatment)
    df = c.n + t.n - 2
    return math.sqrt(((c.n - 1) * c.sd ** 2 + (t.n - 1) * t.sd ** 2) / df)


def hedges_correction(df: int) -> float:
    """Small-sample bias correction J = 1 - 3 / (4 df - 1)."""
    return 1.0 - 3.0 / (4.0 * df - 1.0)


def cohens_d(control, treatment) -> EffectSize:
    c, t = _summary(control), _summary(treatment)
    sp = pooled_sd(c, t)
    if sp == 0:
        raise DegenerateDataError("Cohen's d undefined: pooled standard deviation is zero")
    return EffectSize("Cohen's d", (t.mean - c.mean) / sp)


def hedges_g(control, treatment) -> EffectSize:
    c, t = _summary(control), _summary(treatment)
    d = cohens_d(c, t).value
    return EffectSize("Hedges' g", d * hedges_correction(c.n + t.n - 2))


def ln_cvr(control, treatment) -> EffectSize:
    """Log ratio of coefficients of variation, treatment over control.

    Uses ``ln(CV_t / CV_c) + 1/(2(n_t - 1)) - 1/(2(n_c - 1))``; the
    small-sample terms cancel when the arms have equal size. Negative
    values mean the treatment arm is relatively less variable.
    """
    c, t = _summary(control), _summary(treatment)
    for arm, role in ((c, "control"), (t, "treatment")):
        if not arm.mean > 0:
            raise CVUndefinedError(f"lnCVR undefined: {role} mean {arm.mean} is not positive")
        if not arm.sd > 0:
            raise CVUndefinedError(f"lnCVR undefined: {role} sd is zero")
    value = (
        math.log((t.sd / t.mean) / (c.sd / c.mean))
        + 1.0 / (2.0 * (t.n - 1))
        - 1.0 / (2.0 * (c.n - 1))
    )
    return EffectSize(LN_CVR, value, math.exp(value))


def _require_ln_cvr(e: EffectSize):
    if e.name != LN_CVR:
        raise UsageError(f"expected an lnCVR effect size, got {e.name!r}")


def variability_change_percent(e: EffectSize) -> float:
    """Signed percent change in CV of treatment relative to control.

    ``100 * (exp(lnCVR) - 1)``: -22.9 means the treatment CV is 22.9 %
    lower than the control CV.
    """
    _require_ln_cvr(e)
    return 100.0 * math.expm1(e.value)


def reciprocal_variability_change_percent(e: EffectSize) -> float:
    """Same comparison read the other way: control CV relative to treatment."""
    _require_ln_cvr(e)
    return 100.0 * math.expm1(-e.value)
