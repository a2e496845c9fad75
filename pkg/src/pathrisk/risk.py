"""One-period risk functionals on discrete distributions, and their
composition with path transforms.

Sign convention: risk is a loss number, so ``var`` and ``avar`` of a
distribution concentrated on positive outcomes are negative.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import paths as _paths
from .paths import PathEnsemble

__all__ = [
    "EmpiricalDistribution",
    "Distortion",
    "InsufficientTailSample",
    "var",
    "avar",
    "avar_order_stat",
    "distorted_expectation",
    "weighted_var",
    "process_risk",
    "PATH_TRANSFORMS",
]


class InsufficientTailSample(ValueError):
    """``floor(n * gamma)`` is zero, so there is no tail to average."""


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Finitely supported law; atoms sorted ascending, tied outcomes merged."""

    outcomes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.outcomes, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if x.shape != w.shape or x.size == 0:
            raise ValueError("need one positive weight per outcome")
        if not np.all(np.isfinite(x)):
            raise ValueError("outcomes must be finite")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        order = np.argsort(x, kind="stable")
        x, w = x[order], w[order]
        # merge ties so the quantile function is well defined
        support, inverse = np.unique(x, return_inverse=True)
        merged = np.zeros(support.size)
        np.add.at(merged, inverse, w)
        support.setflags(write=False)
        merged.setflags(write=False)
        object.__setattr__(self, "outcomes", support)
        object.__setattr__(self, "weights", merged)

    @classmethod
    def from_sample(cls, sample) -> "EmpiricalDistribution":
        sample = np.asarray(sample, dtype=float).ravel()
        return cls(sample, np.full(sample.size, 1.0 / sample.size))

    @property
    def cumulative(self) -> np.ndarray:
        c = np.cumsum(self.weights)
        c[-1] = 1.0
        return c

    def cdf(self, x):
        """Right-continuous distribution function ``P(Y <= x)``."""
        idx = np.searchsorted(self.outcomes, x, side="right")
        c = np.concatenate(([0.0], self.cumulative))
        return c[idx]

    def mean(self) -> float:
        return float(np.dot(self.outcomes, self.weights))

    def scale(self, lam: float) -> "EmpiricalDistribution":
        return EmpiricalDistribution(lam * self.outcomes, self.weights)

    def shift(self, m: float) -> "EmpiricalDistribution":
        return EmpiricalDistribution(self.outcomes + m, self.weights)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["outcome", "weight"])
            for x, p in zip(self.outcomes, self.weights):
                w.writerow([format(x, ".17g"), format(p, ".17g")])

    @classmethod
    def from_csv(cls, path) -> "EmpiricalDistribution":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1])


@dataclass(frozen=True)
class Distortion:
    """Concave distortion ``u -> min(u / gamma, 1)``."""

    gamma_param: float

    def __post_init__(self):
        if not self.gamma_param > 0:
            raise ValueError("gamma_param must be positive")

    def __call__(self, u):
        return np.minimum(np.asarray(u, dtype=float) / self.gamma_param, 1.0)


def _as_distribution(d) -> EmpiricalDistribution:
    if isinstance(d, EmpiricalDistribution):
        return d
    return EmpiricalDistribution.from_sample(d)


def _check_level(s: float, name: str) -> None:
    if not 0.0 < s <= 1.0:
        raise ValueError(f"{name} must lie in (0, 1], got {s!r}")


def var(d, s: float) -> float:
    """Value-at-Risk: minus the lower ``s``-quantile."""
    _check_level(s, "s")
    d = _as_distribution(d)
    k = np.searchsorted(d.cumulative, s, side="left")
    return -float(d.outcomes[min(k, d.outcomes.size - 1)])


def avar(d, gamma: float) -> float:
    """Average Value-at-Risk ``(1/gamma) * int_0^gamma VaR_s ds``.

    Exact for discrete laws: the atom straddling level ``gamma`` contributes
    only the part of its mass that lies below ``gamma``.
    """
    _check_level(gamma, "gamma")
    d = _as_distribution(d)
    c = d.cumulative
    k = int(np.searchsorted(c, gamma, side="left"))
    k = min(k, c.size - 1)
    below = c[k - 1] if k > 0 else 0.0
    full = np.dot(d.outcomes[:k], d.weights[:k])
    return -float(full + (gamma - below) * d.outcomes[k]) / gamma


def avar_order_stat(sample, gamma: float) -> float:
    """Order-statistic estimator ``-(1/k) * sum of the k smallest``, ``k = floor(n gamma)``."""
    _check_level(gamma, "gamma")
    x = np.asarray(sample, dtype=float).ravel()
    # guard n * gamma landing a hair below an integer, e.g. 100 * 0.29
    k = int(np.floor(x.size * gamma * (1.0 + 1e-12)))
    if k < 1:
        raise InsufficientTailSample(
            f"floor(n * gamma) = 0 for n={x.size}, gamma={gamma}"
        )
    tail = np.partition(x, k - 1)[:k]
    return -float(np.sort(tail).sum()) / k


def distorted_expectation(d, psi: Callable) -> float:
    """``-sum_i y_i * [psi(F(y_i)) - psi(F(y_{i-1}))]`` over the sorted atoms."""
    d = _as_distribution(d)
    levels = psi(np.concatenate(([0.0], d.cumulative)))
    return -float(np.dot(d.outcomes, np.diff(levels)))


def weighted_var(d, atoms, masses=None) -> float:
    """Spectral risk ``sum_j mass_j * avar(d, gamma_j)`` for a discrete mixing measure.

    ``atoms`` may also be a mapping ``{gamma: mass}``.
    """
    if masses is None:
        atoms, masses = zip(*dict(atoms).items())
    atoms = np.atleast_1d(np.asarray(atoms, dtype=float))
    masses = np.atleast_1d(np.asarray(masses, dtype=float))
    if atoms.shape != masses.shape:
        raise ValueError("one mass per atom")
    if np.any((atoms <= 0) | (atoms > 1)):
        raise ValueError("mixing atoms must lie in (0, 1]")
    if np.any(masses < 0) or abs(masses.sum() - 1.0) > 1e-12:
        raise ValueError("mixing masses must be a probability vector")
    d = _as_distribution(d)
    return float(sum(m * avar(d, g) for g, m in zip(atoms, masses)))


PATH_TRANSFORMS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "running_min": lambda v: np.min(v, axis=-1),
    "max_drawdown": lambda v: _paths.max_drawdown(v),
    "terminal": lambda v: v[..., -1],
}


def _transform(e: PathEnsemble, theta) -> np.ndarray:
    if theta == "time_average":
        return np.atleast_1d(_paths.time_average(e.values, e.grid.t))
    if isinstance(theta, str):
        try:
            theta = PATH_TRANSFORMS[theta]
        except KeyError:
            raise ValueError(f"unknown path transform {theta!r}") from None
    return np.atleast_1d(np.asarray(theta(e.values), dtype=float))


def transformed_distribution(e: PathEnsemble, theta) -> EmpiricalDistribution:
    """Law of ``theta(X)`` under the scenario probabilities."""
    return EmpiricalDistribution(_transform(e, theta), e.probs)


def process_risk(e: PathEnsemble, theta, rho_static: Callable) -> float:
    """``rho_static(law of theta(X))``: a path transform followed by a static risk measure.

    ``theta`` is one of ``"running_min"``, ``"max_drawdown"``,
    ``"time_average"``, ``"terminal"`` or a callable mapping the
    ``(n_paths, n_points)`` value array to one number per path.
    """
    return float(rho_static(transformed_distribution(e, theta)))
