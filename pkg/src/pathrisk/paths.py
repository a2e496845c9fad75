"""Discretised cadlag paths on a finite time grid.

A path is stored as its values on the grid points; between grid points it is
read as piecewise constant (right-continuous).  Every transform below acts on
the grid values only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TimeGrid",
    "Path",
    "PathEnsemble",
    "running_min",
    "running_max",
    "drawdown_process",
    "max_drawdown",
    "sup_norm_star",
    "terminal",
    "time_average",
    "lattice_sup",
    "lattice_inf",
    "r_inf_norm",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing instants ``0 = t[0] < ... < t[-1] = T`` (years)."""

    t: np.ndarray

    def __post_init__(self):
        t = _frozen(self.t)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("time grid needs at least two points")
        if t[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be finite and strictly increasing")
        object.__setattr__(self, "t", t)

    @classmethod
    def uniform(cls, T: float, n_steps: int) -> "TimeGrid":
        if T <= 0 or n_steps < 1:
            raise ValueError("need T > 0 and n_steps >= 1")
        return cls(np.linspace(0.0, T, n_steps + 1))

    @property
    def T(self) -> float:
        return float(self.t[-1])

    @property
    def n_steps(self) -> int:
        return self.t.size - 1

    def __len__(self) -> int:
        return self.t.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return self.t.shape == other.t.shape and bool(np.all(self.t == other.t))

    def __hash__(self):
        return hash(self.t.tobytes())


@dataclass(frozen=True, eq=False)
class Path:
    """Cumulative returns ``X_{t_i}`` of a single scenario."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (len(self.grid),):
            raise ValueError(
                f"path has {v.size} values but the grid has {len(self.grid)} points"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values, t=None) -> "Path":
        """Build a path on ``t`` (default: the integer grid 0, 1, ..., n-1)."""
        values = np.asarray(values, dtype=float)
        if t is None:
            t = np.arange(values.size, dtype=float)
        return cls(TimeGrid(t), values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """Finitely many scenarios sharing one grid.

    ``values`` has shape ``(n_paths, len(grid))``; ``probs`` are the scenario
    probabilities (all positive, summing to one).
    """

    grid: TimeGrid
    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.ndim == 1:
            v = _frozen(v[None, :])
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] != len(self.grid):
            raise ValueError(
                f"values of shape {v.shape} do not match {len(self.grid)} grid points"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        p = _frozen(self.probs)
        if p.shape != (v.shape[0],):
            raise ValueError("one probability per path is required")
        if np.any(p <= 0):
            raise ValueError("scenario probabilities must be positive")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"scenario probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_arrays(cls, values, t=None, probs=None) -> "PathEnsemble":
        """Convenience constructor; equal probabilities and an integer grid by default."""
        values = np.atleast_2d(np.asarray(values, dtype=float))
        n, m = values.shape
        if t is None:
            t = np.arange(m, dtype=float)
        if probs is None:
            probs = np.full(n, 1.0 / n)
        return cls(TimeGrid(t), values, probs)

    @classmethod
    def from_paths(cls, paths, probs=None) -> "PathEnsemble":
        paths = list(paths)
        grid = paths[0].grid
        if any(p.grid != grid for p in paths):
            raise ValueError("paths must share one time grid")
        if probs is None:
            probs = np.full(len(paths), 1.0 / len(paths))
        return cls(grid, np.stack([p.values for p in paths]), probs)

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    @property
    def paths(self) -> list[Path]:
        return [Path(self.grid, row) for row in self.values]

    def __len__(self) -> int:
        return self.n_paths

    def with_values(self, values) -> "PathEnsemble":
        """Same grid and probabilities, new path values."""
        return PathEnsemble(self.grid, values, self.probs)

    def expectation(self, per_path) -> float:
        """Probability-weighted mean of one number per scenario."""
        return float(np.dot(self.probs, np.asarray(per_path, dtype=float)))

    def __mul__(self, lam: float) -> "PathEnsemble":
        return self.with_values(lam * self.values)

    __rmul__ = __mul__

    def __add__(self, other) -> "PathEnsemble":
        if isinstance(other, PathEnsemble):
            _check_same_space(self, other)
            return self.with_values(self.values + other.values)
        return self.with_values(self.values + other)

    def __le__(self, other: "PathEnsemble") -> bool:
        _check_same_space(self, other)
        return bool(np.all(self.values <= other.values))


def _check_same_space(a: PathEnsemble, b: PathEnsemble) -> None:
    if a.grid != b.grid:
        raise ValueError("ensembles live on different time grids")
    if a.probs.shape != b.probs.shape or np.any(a.probs != b.probs):
        raise ValueError("ensembles carry different scenario probabilities")


def _values(p):
    # Path -> 1-d values; ensemble or raw array -> last axis is time
    if isinstance(p, (Path, PathEnsemble)):
        return p.values
    return np.asarray(p, dtype=float)


def _like(p, values):
    if isinstance(p, Path):
        return Path(p.grid, values)
    if isinstance(p, PathEnsemble):
        return p.with_values(values)
    return values


def running_min(p):
    """``min(X_0, ..., X_i)`` at each grid point."""
    return _like(p, np.minimum.accumulate(_values(p), axis=-1))


def running_max(p):
    return _like(p, np.maximum.accumulate(_values(p), axis=-1))


def drawdown_process(p):
    """Drop below the running maximum, ``D_i = max_{j<=i} X_j - X_i``."""
    v = _values(p)
    return _like(p, np.maximum.accumulate(v, axis=-1) - v)


def max_drawdown(p):
    """Largest drawdown over the horizon (one number per path for ensembles)."""
    out = np.max(_values(drawdown_process(_values(p))), axis=-1)
    return float(out) if out.ndim == 0 else out


def sup_norm_star(p):
    """``X* = max_i |X_i|``."""
    out = np.max(np.abs(_values(p)), axis=-1)
    return float(out) if out.ndim == 0 else out


def terminal(p):
    out = _values(p)[..., -1]
    return float(out) if np.ndim(out) == 0 else np.array(out)


def time_average(p, t=None):
    """Trapezoidal mean ``(1/T) * integral X_t dt`` over the grid.

    ``t`` is only needed when ``p`` is a raw array.
    """
    if t is None:
        t = p.grid.t
    t = np.asarray(t, dtype=float)
    v = _values(p)
    dt = np.diff(t)
    area = np.sum(0.5 * (v[..., 1:] + v[..., :-1]) * dt, axis=-1)
    out = area / (t[-1] - t[0])
    return float(out) if np.ndim(out) == 0 else out


def _binary(p, q, op):
    if isinstance(p, Path) and isinstance(q, Path):
        if p.grid != q.grid:
            raise ValueError("paths live on different time grids")
    elif isinstance(p, PathEnsemble) and isinstance(q, PathEnsemble):
        _check_same_space(p, q)
    elif np.shape(_values(p)) != np.shape(_values(q)):
        raise ValueError("shape mismatch")
    return _like(p, op(_values(p), _values(q)))


def lattice_sup(p, q):
    """Pointwise maximum ``p v q``."""
    return _binary(p, q, np.maximum)


def lattice_inf(p, q):
    return _binary(p, q, np.minimum)


def r_inf_norm(p) -> float:
    """Norm of the bounded-path space: ``ess sup X*``.

    For an ensemble every scenario has positive probability, so the essential
    supremum is the plain maximum over scenarios.
    """
    return float(np.max(sup_norm_star(p)))
