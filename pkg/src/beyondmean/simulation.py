"""Seeded Monte Carlo engine for synthetic between-subjects experiments.

Seed tree (see :mod:`beyondmean.specfun.rng` for ``child``)::

    experiment key R
      arm A:  child(R, 0) -> draw i uses stream child(child(R, 0), i)
      arm B:  child(R, 1) -> draw i uses stream child(child(R, 1), i)

:func:`simulate_experiment` uses ``R = master_seed``. In a power study,
replication ``r`` at sample size ``n`` uses ``R = child(child(master_seed, n), r)``,
so replication ``r`` is exactly ``simulate_experiment`` with that seed and
no result depends on chunking, ordering or the number of worker processes.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .descriptives import GroupSample
from .errors import DegenerateDataError, DomainError, UsageError
from .pipeline.dataset import BETWEEN, ExperimentDataset
from .specfun.beta import BetaParams, beta_mean_sd, beta_pdf, beta_variates
from .specfun.rng import child_keys, derive_seed
from .stattests import brown_forsythe, independent_t_test

log = logging.getLogger(__name__)

_MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class SimulationScenario:
    population_a: BetaParams
    population_b: BetaParams
    n_per_group: int
    master_seed: int
    label_a: str = "A"
    label_b: str = "B"

    def __post_init__(self):
        if self.n_per_group < 2:
            raise UsageError(f"n_per_group must be at least 2, got {self.n_per_group}")
        if not 0 <= self.master_seed <= _MAX_SEED:
            raise UsageError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")


def _draw_arms(population_a, population_b, n, experiment_keys):
    """Arm matrices of shape (len(experiment_keys), n)."""
    m = len(experiment_keys)
    draws = []
    for arm, population in ((0, population_a), (1, population_b)):
        arm_keys = child_keys(experiment_keys, arm)
        slot_keys = child_keys(np.repeat(arm_keys, n), np.tile(np.arange(n, dtype=np.uint64), m))
        draws.append(beta_variates(population, slot_keys).reshape(m, n))
    return draws


def simulate_experiment(s: SimulationScenario) -> ExperimentDataset:
    """Draw ``n_per_group`` scores from each Beta population."""
    n = s.n_per_group
    a, b = _draw_arms(s.population_a, s.population_b, n,
                      np.array([s.master_seed], dtype=np.uint64))
    return ExperimentDataset(
        BETWEEN,
        GroupSample(s.label_a, tuple(float(v) for v in a[0])),
        GroupSample(s.label_b, tuple(float(v) for v in b[0])),
        tuple(f"s{i + 1}" for i in range(n)),
        tuple(f"s{n + i + 1}" for i in range(n)),
    )


def replication_seed(master_seed: int, n: int, replication: int) -> int:
    return derive_seed(master_seed, n, replication)


@dataclass(frozen=True)
class PowerEntry:
    n: int
    replications: int
    rejection_rate_bf: float
    rejection_rate_t: float
    alpha: float
    degenerate_bf: int = 0
    degenerate_t: int = 0

    @property
    def mc_se_bf(self) -> float:
        """Monte Carlo standard error of the Brown-Forsythe rejection rate."""
        p = self.rejection_rate_bf
        return math.sqrt(p * (1.0 - p) / self.replications)

    @property
    def mc_se_t(self) -> float:
        p = self.rejection_rate_t
        return math.sqrt(p * (1.0 - p) / self.replications)


@dataclass(frozen=True)
class PowerReport:
    population_a: BetaParams
    population_b: BetaParams
    alpha: float
    master_seed: int
    entries: tuple[PowerEntry, ...] = field(default_factory=tuple)

    def entry(self, n: int) -> PowerEntry:
        for e in self.entries:
            if e.n == n:
                return e
        raise KeyError(n)


def _count_rejections(task):
    """Worker: rejection counts for replications ``lo..hi-1`` at one sample size."""
    population_a, population_b, n, master_seed, lo, hi, alpha = task
    size_key = child_keys(np.array([master_seed], dtype=np.uint64), n)
    rep_keys = child_keys(np.repeat(size_key, hi - lo), np.arange(lo, hi, dtype=np.uint64))
    arm_a, arm_b = _draw_arms(population_a, population_b, n, rep_keys)
    bf = t = bad_bf = bad_t = 0
    for a, b in zip(arm_a, arm_b):
        try:
            bf += brown_forsythe([a, b]).p_value < alpha
        except DegenerateDataError:
            bad_bf += 1
        try:
            t += independent_t_test(a, b).p_value < alpha
        except DegenerateDataError:
            bad_t += 1
    return int(bf), int(t), bad_bf, bad_t


def run_power_study(
    population_a: BetaParams,
    population_b: BetaParams,
    n_grid: Sequence[int],
    replications: int,
    alpha: float = 0.05,
    master_seed: int = 0,
    workers: int = 1,
    chunk_size: int = 1000,
) -> PowerReport:
    """Rejection rates of Brown-Forsythe and the independent t-test per sample size.

    Degenerate replications (zero variance of the deviations or scores)
    count as non-rejections and are tallied in ``degenerate_bf`` /
    ``degenerate_t``.

    Args:
        workers: number of processes; results do not depend on it.
        chunk_size: replications evaluated per vectorized batch.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie strictly inside (0, 1), got {alpha!r}")
    if not n_grid:
        raise UsageError("n_grid must not be empty")
    if replications < 1:
        raise UsageError(f"replications must be positive, got {replications}")
    if len(set(n_grid)) != len(n_grid):
        raise UsageError(f"n_grid contains duplicates: {list(n_grid)}")
    if any(n < 2 for n in n_grid):
        raise UsageError("every sample size in n_grid must be at least 2")
    if not 0 <= master_seed <= _MAX_SEED:
        raise UsageError(f"master_seed must be an unsigned 64-bit integer, got {master_seed}")
    if replications < 1000:
        log.warning("only %d replications; rejection rates will be noisy", replications)

    tasks = [
        (population_a, population_b, int(n), master_seed, lo, min(lo + chunk_size, replications), alpha)
        for n in n_grid
        for lo in range(0, replications, chunk_size)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_count_rejections, tasks))
    else:
        counts = [_count_rejections(task) for task in tasks]

    totals: dict[int, list[int]] = {}
    for task, c in zip(tasks, counts):
        acc = totals.setdefault(task[2], [0, 0, 0, 0])
        for i in range(4):
            acc[i] += c[i]
    entries = tuple(
        PowerEntry(
            n=int(n),
            replications=replications,
            rejection_rate_bf=totals[int(n)][0] / replications,
            rejection_rate_t=totals[int(n)][1] / replications,
            alpha=alpha,
            degenerate_bf=totals[int(n)][2],
            degenerate_t=totals[int(n)][3],
        )
        for n in n_grid
    )
    return PowerReport(population_a, population_b, alpha, master_seed, entries)


def pdf_curve(p: BetaParams, grid_points: int) -> list[tuple[float, float]]:
    """Evenly spaced ``(x, density)`` pairs over [0, 1] for plotting."""
    if grid_points < 2:
        raise UsageError(f"grid_points must be at least 2, got {grid_points}")
    step = grid_points - 1
    return [(i / step, beta_pdf(p, i / step)) for i in range(grid_points)]


def describe_population(p: BetaParams) -> dict:
    mean, sd = beta_mean_sd(p)
    return {"alpha": p.alpha, "beta": p.beta, "mean": mean, "sd": sd}
