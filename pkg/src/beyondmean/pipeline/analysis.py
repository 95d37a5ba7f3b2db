"""End-to-end analysis of a two-arm experiment.

Steps: descriptives, normality (per arm for between-subjects designs, on
the paired differences for within-subjects designs), Brown-Forsythe,
the design-matched t-test, Hedges' g and lnCVR. Assumption checks are
reported as flags; they never stop the analysis.
"""

from dataclasses import dataclass
from typing import Optional

from ..descriptives import DescriptiveStats, describe
from ..effect_sizes import EffectSize, hedges_g, ln_cvr
from ..errors import CVUndefinedError, DegenerateDataError, DomainError, UnsupportedSizeError
from ..stattests import (
    TestResult,
    brown_forsythe,
    dependent_t_test,
    independent_t_test,
    shapiro_wilk,
)
from .dataset import WITHIN, ExperimentDataset

CV_UNDEFINED = "undefined: non-positive mean"
DIFFERENCE_TARGET = "difference"


@dataclass(frozen=True)
class NormalityCheck:
    """Shapiro-Wilk on one arm or on the paired differences.

    ``result`` is None when the test could not run; ``note`` says why.
    """

    target: str
    result: Optional[TestResult]
    note: Optional[str] = None


@dataclass(frozen=True)
class AnalysisReport:
    design: str
    alpha: float
    control_label: str
    treatment_label: str
    control: DescriptiveStats
    treatment: DescriptiveStats
    cv_control: Optional[float]
    cv_treatment: Optional[float]
    normality: tuple[NormalityCheck, ...]
    variance_test: TestResult
    mean_test: TestResult
    hedges_g: EffectSize
    ln_cvr: Optional[EffectSize]
    ln_cvr_note: Optional[str]

    @property
    def flags(self) -> dict[str, Optional[bool]]:
        """Verdicts derived from p-values and ``alpha``.

        ``normality_met`` is None when no normality test could be run.
        """
        normal = [c.result.p_value >= self.alpha for c in self.normality if c.result is not None]
        return {
            "normality_met": all(normal) if normal else None,
            "equal_variances_met": self.variance_test.p_value >= self.alpha,
            "variance_difference_significant": self.variance_test.p_value < self.alpha,
            "mean_difference_significant": self.mean_test.p_value < self.alpha,
        }


def _normality(target, values) -> NormalityCheck:
    try:
        return NormalityCheck(target, shapiro_wilk(values))
    except UnsupportedSizeError:
        return NormalityCheck(target, None, f"not computed: Shapiro-Wilk needs 3 <= n <= 5000, n={len(values)}")
    except DegenerateDataError:
        return NormalityCheck(target, None, "not computed: all values are equal")


def _cv(s: DescriptiveStats) -> Optional[float]:
    return s.sd / s.mean if s.mean > 0 else None


def analyze(d: ExperimentDataset, alpha: float = 0.05, control_label: Optional[str] = None) -> AnalysisReport:
    """Run the full two-arm analysis; estimates are signed treatment minus control.

    Raises:
        DomainError: alpha outside (0, 1).
        UsageError: ``control_label`` is not one of the dataset's labels.
        DegenerateDataError: the variance or mean test is undefined.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie strictly inside (0, 1), got {alpha!r}")
    if control_label is not None:
        d = d.with_control(control_label)
    control, treatment = d.control, d.treatment
    c_stats, t_stats = describe(control), describe(treatment)

    if d.design == WITHIN:
        differences = [t - c for c, t in d.pairs()]
        normality = (_normality(DIFFERENCE_TARGET, differences),)
    else:
        normality = (_normality(control.label, control.scores), _normality(treatment.label, treatment.scores))

    try:
        variance_test = brown_forsythe([control, treatment])
    except DegenerateDataError as exc:
        raise DegenerateDataError(f"Brown-Forsythe test: {exc}") from exc
    try:
        if d.design == WITHIN:
            mean_test = dependent_t_test(d.pairs())
        else:
            mean_test = independent_t_test(control, treatment)
    except DegenerateDataError as exc:
        raise DegenerateDataError(f"t-test: {exc}") from exc

    g = hedges_g(c_stats, t_stats)
    try:
        cvr, cvr_note = ln_cvr(c_stats, t_stats), None
    except CVUndefinedError:
        cvr = None
        cvr_note = CV_UNDEFINED if min(c_stats.mean, t_stats.mean) <= 0 else "undefined: zero standard deviation"

    return AnalysisReport(
        design=d.design,
        alpha=alpha,
        control_label=control.label,
        treatment_label=treatment.label,
        control=c_stats,
        treatment=t_stats,
        cv_control=_cv(c_stats),
        cv_treatment=_cv(t_stats),
        normality=normality,
        variance_test=variance_test,
        mean_test=mean_test,
        hedges_g=g,
        ln_cvr=cvr,
        ln_cvr_note=cvr_note,
    )
