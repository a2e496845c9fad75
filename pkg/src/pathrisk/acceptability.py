"""Acceptability indices for path ensembles.

The generic index is ``alpha(X) = sup{x >= 0 : rho_x(X) <= 0}`` for a family
of risk functionals ``rho_x`` that grows with ``x``.  The concrete indices
(RAROC on the running minimum, Calmar, Sharpe variants) are closed-form ratios
with explicit conventions for degenerate denominators; ``conventions`` lists
which ones fired so that reports can say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import paths as _paths
from .paths import PathEnsemble
from .risk import EmpiricalDistribution, avar, avar_order_stat, transformed_distribution

__all__ = [
    "NonMonotoneFamily",
    "IndexFamily",
    "UtilityFunction",
    "IndexValue",
    "alpha_sup",
    "raroc_family",
    "raroc",
    "raroc_value",
    "calmar",
    "calmar_value",
    "sharpe_variants",
    "estimators_from_samples",
    "integrated_cdf",
    "ssd_check",
    "expected_utility",
]

DEFAULT_X_MAX = 1e6
DEFAULT_TOL = 1e-9


class NonMonotoneFamily(ValueError):
    """The risk family is not nondecreasing in the level ``x``."""


@dataclass(frozen=True)
class IndexValue:
    """An index value plus the conventions used to obtain it."""

    index_name: str
    value: float
    gamma: float | None = None
    conventions_triggered: tuple[str, ...] = ()

    def __float__(self) -> float:
        return self.value

    def as_record(self) -> dict:
        return {
            "index_name": self.index_name,
            "gamma": self.gamma,
            "value": self.value,
            "conventions_triggered": list(self.conventions_triggered),
        }


@dataclass(frozen=True)
class IndexFamily:
    """Levelled risk functionals ``rho(x, ensemble)``, nondecreasing in ``x``.

    If ``probes`` are given, monotonicity in ``x`` is spot-checked on them at
    construction.
    """

    rho: Callable[[float, PathEnsemble], float]
    x_max: float = DEFAULT_X_MAX
    probes: Sequence[PathEnsemble] = field(default=(), repr=False, compare=False)
    probe_levels: Sequence[float] = field(
        default=(0.0, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0), repr=False, compare=False
    )

    def __post_init__(self):
        if not self.x_max > 0:
            raise ValueError("x_max must be positive")
        levels = sorted(x for x in self.probe_levels if x <= self.x_max)
        for e in self.probes:
            r = [self.rho(x, e) for x in levels]
            if any(b < a for a, b in zip(r, r[1:])):
                raise NonMonotoneFamily("family not x-increasing on a probe ensemble")

    def __call__(self, x: float, e: PathEnsemble) -> float:
        return self.rho(x, e)


def alpha_sup(family: IndexFamily, e: PathEnsemble, tol: float = DEFAULT_TOL,
              full_output: bool = False):
    """Bisect for ``sup{x in [0, x_max] : rho_x(e) <= 0}``.

    Returns 0 when no level is acceptable and ``inf`` when even ``x_max`` is.
    With ``full_output=True`` a second value ``info`` dict is returned with the
    keys ``capped`` (``x_max`` was acceptable), ``empty`` and ``evaluations``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.0, float(family.x_max)
    seen: list[tuple[float, float]] = []

    def rho(x):
        r = float(family(x, e))
        seen.append((x, r))
        return r

    r_lo, r_hi = rho(lo), rho(hi)
    info = {"capped": False, "empty": False}
    if r_lo > 0:
        if r_hi <= 0:
            raise NonMonotoneFamily("family not x-increasing: rho_0 > 0 >= rho_x_max")
        info["empty"] = True
        value = 0.0
    elif r_hi <= 0:
        info["capped"] = True
        value = math.inf
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if rho(mid) <= 0:
                lo = mid
            else:
                hi = mid
        seen.sort()
        # slack absorbs round-off in rho near its root
        if any(b[1] < a[1] - 1e-12 * max(1.0, abs(a[1])) for a, b in zip(seen, seen[1:])):
            raise NonMonotoneFamily("family not x-increasing along the bisection")
        value = 0.5 * (lo + hi)
    if full_output:
        info["evaluations"] = len(seen)
        return value, info
    return value


def _ratio(numerator: float, denominator: float, name: str, gamma=None) -> IndexValue:
    # alpha lives in [0, inf]: a non-positive risk makes every level acceptable,
    # a non-positive reward with positive risk makes none acceptable
    if denominator <= 0:
        return IndexValue(name, math.inf, gamma, ("nonpositive_risk",))
    if numerator <= 0:
        return IndexValue(name, 0.0, gamma, ("nonpositive_reward",))
    return IndexValue(name, numerator / denominator, gamma)


def running_min_avar(e: PathEnsemble, gamma: float) -> float:
    """``AVaR_gamma`` of the running minimum at the horizon."""
    return avar(transformed_distribution(e, "running_min"), gamma)


def raroc_family(gamma: float, rho: Callable[[PathEnsemble], float] | None = None,
                 x_max: float = DEFAULT_X_MAX) -> IndexFamily:
    """``rho_x(X) = x/(1+x) * rho(X) - 1/(1+x) * E[X_T]``.

    ``rho`` defaults to AVaR of the running minimum at level ``gamma``.
    """
    if rho is None:
        def rho(e):
            return running_min_avar(e, gamma)

    def rho_x(x, e):
        return (x * rho(e) - e.expectation(_paths.terminal(e.values))) / (1.0 + x)

    return IndexFamily(rho_x, x_max=x_max)


def raroc_value(e: PathEnsemble, gamma: float) -> IndexValue:
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    reward = e.expectation(_paths.terminal(e.values))
    return _ratio(reward, running_min_avar(e, gamma), "raroc", gamma)


def raroc(e: PathEnsemble, gamma: float) -> float:
    """``E[X_T] / AVaR_gamma(min_t X_t)`` in ``[0, inf]``."""
    return raroc_value(e, gamma).value


def calmar_value(e: PathEnsemble) -> IndexValue:
    reward = e.expectation(_paths.terminal(e.values))
    if reward <= 0:
        return IndexValue("calmar", 0.0, None, ("nonpositive_reward",))
    risk = e.expectation(_paths.max_drawdown(e.values))
    if risk <= 0:
        return IndexValue("calmar", math.inf, None, ("zero_drawdown",))
    return IndexValue("calmar", reward / risk)


def calmar(e: PathEnsemble) -> float:
    """``E[X_T] / E[max drawdown]``; zero whenever ``E[X_T] <= 0``."""
    return calmar_value(e).value


def _sd_ratio(numerator: float, sample: np.ndarray, weights=None) -> float:
    if np.ptp(sample) == 0.0:
        sd = 0.0
    else:
        m1 = np.average(sample, weights=weights)
        sd = float(np.sqrt(np.average((sample - m1) ** 2, weights=weights)))
    if sd == 0.0:
        return math.inf if numerator > 0 else 0.0
    return numerator / sd


def sharpe_variants(e) -> tuple[float, float]:
    """Mean final value over the (1/n) standard deviation of the running
    minimum and of the maximum drawdown respectively.

    Accepts an ensemble (moments under its scenario probabilities) or an
    ``(n_paths, n_points)`` array of equally likely paths.
    """
    if isinstance(e, PathEnsemble):
        v, w = e.values, e.probs
    else:
        v, w = np.asarray(e, dtype=float), None
    if v.shape[0] < 2:
        raise ValueError("need at least two paths")
    finals, mins, mdds = v[:, -1], v.min(axis=1), _paths.max_drawdown(v)
    reward = float(np.average(finals, weights=w))
    return _sd_ratio(reward, mins, w), _sd_ratio(reward, mdds, w)


@dataclass(frozen=True)
class Estimates:
    CR_n: float
    alpha_n_gamma: float
    SR_B: float
    SR_J: float
    gamma: float
    conventions_triggered: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "CR_n": self.CR_n,
            "alpha_n_gamma": self.alpha_n_gamma,
            "SR_B": self.SR_B,
            "SR_J": self.SR_J,
            "gamma": self.gamma,
            "conventions_triggered": list(self.conventions_triggered),
        }


def estimators_from_samples(finals, mins, mdds, gamma: float) -> Estimates:
    """Sample estimators of the Calmar ratio, the running-minimum RAROC and
    the two Sharpe variants from per-path final values, running minima and
    maximum drawdowns.

    The RAROC denominator averages the ``k = floor(n * gamma)`` smallest
    running minima (negated); see ``avar_order_stat``.
    """
    finals, mins, mdds = (np.asarray(a, dtype=float).ravel() for a in (finals, mins, mdds))
    if not finals.size == mins.size == mdds.size:
        raise ValueError("samples must have equal length")
    if finals.size < 2:
        raise ValueError("need at least two paths")
    reward = float(np.mean(finals))
    conventions = []

    if reward <= 0:
        cr = 0.0
        conventions.append("calmar:nonpositive_reward")
    elif np.mean(mdds) <= 0:
        cr = math.inf
        conventions.append("calmar:zero_drawdown")
    else:
        cr = reward / float(np.mean(mdds))

    a = _ratio(reward, avar_order_stat(mins, gamma), "alpha", gamma)
    conventions.extend(f"alpha:{c}" for c in a.conventions_triggered)

    return Estimates(
        CR_n=cr,
        alpha_n_gamma=a.value,
        SR_B=_sd_ratio(reward, mins),
        SR_J=_sd_ratio(reward, mdds),
        gamma=gamma,
        conventions_triggered=tuple(conventions),
    )


# --- second-order dominance and expected utility on X* = max_t |X_t| -------


def integrated_cdf(values, probs, z):
    """``G(z) = int_0^z F(s) ds = sum_i p_i (z - x_i)^+`` for nonnegative atoms."""
    values = np.asarray(values, dtype=float)
    z = np.asarray(z, dtype=float)
    return np.sum(np.asarray(probs) * np.maximum(z[..., None] - values, 0.0), axis=-1)


def ssd_check(e1: PathEnsemble, e2: PathEnsemble, z_grid=None, atol: float = 1e-12):
    """Compare ``int_0^z F_{X*}`` and ``int_0^z F_{Y*}`` for every ``z > 0``.

    Returns ``"dominates"`` (first ensemble's integrated CDF is everywhere
    below), ``"dominated"``, ``"equivalent"`` or ``"incomparable"``.  The
    integrated CDFs are piecewise linear with kinks at the atoms, so comparing
    at the atoms is exact.  If ``z_grid`` is given the function returns
    ``(verdict, G1(z_grid), G2(z_grid))`` for reporting.
    """
    x1, x2 = _paths.sup_norm_star(e1.values), _paths.sup_norm_star(e2.values)
    kinks = np.unique(np.concatenate([x1, x2, [0.0]]))
    diff = integrated_cdf(x1, e1.probs, kinks) - integrated_cdf(x2, e2.probs, kinks)
    below = np.all(diff <= atol)
    above = np.all(diff >= -atol)
    if below and above:
        verdict = "equivalent"
    elif below:
        verdict = "dominates"
    elif above:
        verdict = "dominated"
    else:
        verdict = "incomparable"
    if z_grid is None:
        return verdict
    z_grid = np.asarray(z_grid, dtype=float)
    if np.any(z_grid <= 0) or np.any(np.diff(z_grid) <= 0):
        raise ValueError("z_grid must be positive and increasing")
    return (verdict, integrated_cdf(x1, e1.probs, z_grid),
            integrated_cdf(x2, e2.probs, z_grid))


@dataclass(frozen=True)
class UtilityFunction:
    """Nondecreasing concave utility, checked on a probe grid at construction."""

    u: Callable
    probe: Iterable[float] = field(
        default=tuple(np.linspace(0.0, 10.0, 101)), repr=False, compare=False
    )

    def __post_init__(self):
        z = np.asarray(tuple(self.probe), dtype=float)
        uz = np.array([self.u(v) for v in z], dtype=float)
        if np.any(np.diff(uz) < -1e-12):
            raise ValueError("utility is not nondecreasing on the probe grid")
        mid = np.array([self.u(v) for v in 0.5 * (z[1:] + z[:-1])], dtype=float)
        if np.any(mid < 0.5 * (uz[1:] + uz[:-1]) - 1e-12):
            raise ValueError("utility fails midpoint concavity on the probe grid")

    def __call__(self, w):
        return self.u(w)


def expected_utility(e: PathEnsemble, u) -> float:
    """``E[U(X*)]`` with ``X* = max_t |X_t|`` per scenario."""
    xs = _paths.sup_norm_star(e.values)
    return e.expectation([u(v) for v in xs])
