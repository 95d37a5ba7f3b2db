"""Beta populations: moment mappings, density and sampling.

Sampling draws two gamma variates on the same stream, the first with the
alpha shape and the second with the beta shape, and returns
``G_a / (G_a + G_b)``. Gamma variates use the Marsaglia-Tsang squeeze
method; shapes below 1 are boosted with ``G(k) = G(k + 1) * U**(1/k)``.

Each Marsaglia-Tsang attempt consumes exactly two uniforms (one turned into
a normal deviate by inversion, one for the accept test), and a boost
consumes one more. The ratio is formed in the log domain so that boosted
variates underflowing to zero cannot produce 0/0.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, InfeasibleMomentsError
from .rng import (
    RngState,
    portable_exp,
    portable_log,
    portable_normal_quantile,
    stream_uniforms,
)
from .special import ln_beta

_SMALLEST_INTERIOR = float(np.nextafter(0.0, 1.0))
_LARGEST_INTERIOR = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (value > 0) or math.isinf(value):
                raise DomainError(f"Beta shape {name} must be positive and finite, got {value!r}")


def beta_mean_sd(p: BetaParams) -> tuple[float, float]:
    """Mean and standard deviation of a Beta(alpha, beta) population."""
    total = p.alpha + p.beta
    mean = p.alpha / total
    variance = p.alpha * p.beta / (total * total * (total + 1.0))
    return mean, math.sqrt(variance)


def beta_from_moments(mean: float, sd: float) -> BetaParams:
    """Shapes of the Beta population with the given mean and standard deviation.

    Raises:
        DomainError: if ``mean`` is outside (0, 1) or ``sd`` is not positive.
        InfeasibleMomentsError: if ``sd**2 >= mean * (1 - mean)``.
    """
    if not 0.0 < mean < 1.0:
        raise DomainError(f"Beta mean must lie strictly inside (0, 1), got {mean!r}")
    if not (sd > 0) or math.isinf(sd):
        raise DomainError(f"Beta sd must be positive and finite, got {sd!r}")
    spread = mean * (1.0 - mean)
    if sd * sd >= spread:
        raise InfeasibleMomentsError(
            f"infeasible moments: no Beta distribution has mean {mean} and sd {sd}: "
            f"sd^2 = {sd * sd:.6g} must be below mean*(1-mean) = {spread:.6g}"
        )
    concentration = spread / (sd * sd) - 1.0
    return BetaParams(mean * concentration, (1.0 - mean) * concentration)


def beta_pdf(p: BetaParams, x: float) -> float:
    """Density of Beta(alpha, beta) at ``x`` in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    a, b = p.alpha, p.beta
    if x == 0.0 or x == 1.0:
        shape = a if x == 0.0 else b
        if shape < 1.0:
            return math.inf
        if shape > 1.0:
            return 0.0
        # shape == 1: the edge factor is 1, the other factor is 0**0 or 1**k
        return math.exp(-ln_beta(a, b))
    return math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - ln_beta(a, b))


def _log_gamma_variates(shape, keys, counters):
    """Log of one Gamma(shape, 1) variate per stream; returns (values, new counters)."""
    boosted = shape < 1.0
    k = shape + 1.0 if boosted else shape
    d = k - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)

    counters = counters.copy()
    out = np.empty(len(keys), dtype=np.float64)
    pending = np.arange(len(keys))
    while pending.size:
        pk = keys[pending]
        pc = counters[pending]
        u_normal = stream_uniforms(pk, pc)
        u_accept = stream_uniforms(pk, pc + np.uint64(1))
        counters[pending] = pc + np.uint64(2)

        x = portable_normal_quantile(u_normal)
        v = 1.0 + c * x
        positive = v > 0.0
        v3 = np.where(positive, v * v * v, 1.0)
        x2 = x * x
        squeeze = u_accept < 1.0 - 0.0331 * x2 * x2
        log_test = portable_log(u_accept) < 0.5 * x2 + d * (1.0 - v3 + portable_log(v3))
        accepted = positive & (squeeze | log_test)

        out[pending[accepted]] = portable_log(d * v3[accepted])
        pending = pending[~accepted]

    if boosted:
        u = stream_uniforms(keys, counters)
        counters = counters + np.uint64(1)
        out = out + portable_log(u) / shape
    return out, counters


def _beta_from_streams(p, keys, counters):
    log_a, counters = _log_gamma_variates(p.alpha, keys, counters)
    log_b, counters = _log_gamma_variates(p.beta, keys, counters)
    x = 1.0 / (1.0 + portable_exp(log_b - log_a))
    x = np.where(x <= 0.0, _SMALLEST_INTERIOR, x)
    x = np.where(x >= 1.0, _LARGEST_INTERIOR, x)
    return x, counters


def beta_variates(p: BetaParams, keys) -> np.ndarray:
    """One Beta draw from the start of each stream key in ``keys``.

    Element ``i`` equals ``sample_beta(p, RngState(keys[i]))``.
    """
    keys = np.atleast_1d(np.asarray(keys, dtype=np.uint64))
    values, _ = _beta_from_streams(p, keys, np.zeros(len(keys), dtype=np.uint64))
    return values


def sample_beta(p: BetaParams, rng: RngState) -> float:
    """Draw one Beta variate strictly inside (0, 1), advancing ``rng``."""
    keys = np.array([rng.seed], dtype=np.uint64)
    counters = np.array([rng.counter], dtype=np.uint64)
    value, counters = _beta_from_streams(p, keys, counters)
    rng.counter = int(counters[0])
    return float(value[0])
