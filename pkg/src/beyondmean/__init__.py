"""Analyze two-arm experiments beyond the mean.

Alongside the usual t-tests and Hedges' g, the package reports whether the
arms differ in spread (Brown-Forsythe test, lnCVR effect size) and ships a
seeded Monte Carlo engine to study how often such differences are detected
at a given sample size.
"""

from .descriptives import DescriptiveStats, GroupSample, coefficient_of_variation, describe
from .effect_sizes import (
    ArmSummary,
    EffectSize,
    cohens_d,
    hedges_g,
    ln_cvr,
    reciprocal_variability_change_percent,
    variability_change_percent,
)
from .pipeline import AnalysisReport, ExperimentDataset, analyze, parse_dataset, render_report
from .simulation import PowerReport, SimulationScenario, pdf_curve, run_power_study, simulate_experiment
from .specfun import BetaParams, RngState, beta_from_moments, beta_mean_sd
from .stattests import (
    TestResult,
    brown_forsythe,
    dependent_t_test,
    independent_t_test,
    levene,
    one_way_anova,
    shapiro_wilk,
)

__version__ = "0.1.0"
