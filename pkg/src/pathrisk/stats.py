"""Summary statistics and histogram data for simulated samples."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .risk import EmpiricalDistribution

__all__ = ["SummaryStats", "summarize", "empirical_cdf", "histogram", "Histogram"]


@dataclass(frozen=True)
class SummaryStats:
    """Moments use 1/n normalisation.  ``degenerate`` marks zero variance,
    in which case skewness and kurtosis are NaN."""

    skewness: float
    excess_kurtosis: float
    median: float
    mean: float
    sd: float
    n: int
    degenerate: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def summarize(sample) -> SummaryStats:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise ValueError("need at least two observations")
    mean = float(np.mean(x))
    c = x - mean
    m2 = float(np.mean(c**2))
    if np.ptp(x) == 0.0 or m2 == 0.0:
        return SummaryStats(math.nan, math.nan, float(np.median(x)), mean, 0.0, x.size, True)
    m3 = float(np.mean(c**3))
    m4 = float(np.mean(c**4))
    return SummaryStats(
        skewness=m3 / m2**1.5,
        excess_kurtosis=m4 / m2**2 - 3.0,
        median=float(np.median(x)),
        mean=mean,
        sd=math.sqrt(m2),
        n=x.size,
    )


def empirical_cdf(sample) -> EmpiricalDistribution:
    """Equal-weight empirical law; evaluate with ``.cdf(y)`` (right-continuous)."""
    return EmpiricalDistribution.from_sample(sample)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    density: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    def as_dict(self) -> dict:
        return {"edges": self.edges.tolist(), "density": self.density.tolist()}


def histogram(sample, n_bins: int) -> Histogram:
    """Equal-width bins over ``[min, max]`` normalised to a density."""
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    density, edges = np.histogram(np.asarray(sample, dtype=float), bins=n_bins, density=True)
    return Histogram(edges, density)
