"""Per-arm summary statistics: N, mean, SD (n - 1 denominator) and median."""

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from .errors import CVUndefinedError, DataError, InsufficientDataError


@dataclass(frozen=True)
class GroupSample:
    """Scores of one experimental arm, in recorded order."""

    label: str
    scores: tuple[float, ...]

    def __post_init__(self):
        scores = tuple(float(s) for s in self.scores)
        if not scores:
            raise InsufficientDataError(f"group {self.label!r} has no scores")
        if not all(math.isfinite(s) for s in scores):
            raise DataError(f"group {self.label!r} contains non-finite scores")
        object.__setattr__(self, "scores", scores)

    def __len__(self):
        return len(self.scores)


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    sd: float
    median: float


def describe(g: GroupSample | Sequence[float]) -> DescriptiveStats:
    """Summarize one arm.

    Exact rational arithmetic (via :mod:`statistics`) is used so that a
    constant sample has an SD of exactly zero.

    Raises:
        InsufficientDataError: if fewer than two scores are given.
    """
    scores = g.scores if isinstance(g, GroupSample) else tuple(float(s) for s in g)
    if len(scores) < 2:
        raise InsufficientDataError(f"need at least 2 scores to describe a group, got {len(scores)}")
    return DescriptiveStats(
        n=len(scores),
        mean=statistics.mean(scores),
        sd=statistics.stdev(scores),
        median=statistics.median(scores),
    )


def coefficient_of_variation(s: DescriptiveStats) -> float:
    """sd / mean; only meaningful for positive means."""
    if not s.mean > 0:
        raise CVUndefinedError(f"coefficient of variation undefined for non-positive mean {s.mean}")
    return s.sd / s.mean
