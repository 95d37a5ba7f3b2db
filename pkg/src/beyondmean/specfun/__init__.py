"""Special functions, distributions and seeded Beta sampling."""

from .beta import (
    BetaParams,
    beta_from_moments,
    beta_mean_sd,
    beta_pdf,
    beta_variates,
    sample_beta,
)
from .rng import RngState, derive_seed
from .special import (
    f_cdf,
    f_sf,
    ln_gamma,
    normal_cdf,
    normal_quantile,
    reg_inc_beta,
    student_t_cdf,
    student_t_two_sided_p,
)

__all__ = [
    "BetaParams",
    "RngState",
    "beta_from_moments",
    "beta_mean_sd",
    "beta_pdf",
    "beta_variates",
    "derive_seed",
    "f_cdf",
    "f_sf",
    "ln_gamma",
    "normal_cdf",
    "normal_quantile",
    "reg_inc_beta",
    "sample_beta",
    "student_t_cdf",
    "student_t_two_sided_p",
]
