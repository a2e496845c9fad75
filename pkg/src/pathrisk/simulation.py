"""Seeded Euler simulation of cumulative-return paths.

Two models: arithmetic Brownian motion with drift, and the Kou
jump-diffusion (same diffusion plus compound Poisson jumps with asymmetric
double-exponential sizes).  Paths start at 0 and live in log-return units.

Reproducibility: every path draws from its own counter-based Philox streams,
keyed by ``derive_substream_seed(seed, path_index, tag)``.  A path's values
therefore do not depend on how many threads generate the ensemble or in which
order chunks finish.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import special, stats

from .paths import PathEnsemble, TimeGrid

__all__ = [
    "BrownianParams",
    "KouParams",
    "SimConfig",
    "derive_substream_seed",
    "substream",
    "uniforms",
    "standard_normals",
    "sample_double_exponential",
    "simulate_bm",
    "simulate_kou",
    "simulate",
    "simulate_functionals",
    "resolve_threads",
]

_MASK = (1 << 64) - 1
DIFFUSION, JUMP_COUNTS, JUMP_SIZES = "diffusion", "jump-counts", "jump-sizes"


@dataclass(frozen=True)
class BrownianParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValueError("mu and sigma must be finite")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class KouParams:
    """Diffusion plus jumps at rate ``lam``; up-jumps ``Exp(eta1)`` with
    probability ``p``, down-jumps ``-Exp(eta2)`` otherwise."""

    diffusion: BrownianParams
    lam: float
    eta1: float
    eta2: float
    p: float = 0.5

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("jump intensity must be nonnegative")
        if not (self.eta1 > 0 and self.eta2 > 0):
            raise ValueError("eta1 and eta2 must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @classmethod
    def from_mean_sizes(cls, mu, sigma, lam, up_mean, down_mean, p=0.5) -> "KouParams":
        """Parameters from the mean up/down jump magnitudes ``1/eta1``, ``1/eta2``."""
        return cls(BrownianParams(mu, sigma), lam, 1.0 / up_mean, 1.0 / down_mean, p)

    @property
    def mean_jump(self) -> float:
        return self.p / self.eta1 - (1.0 - self.p) / self.eta2

    @property
    def mean_abs_jump(self) -> float:
        return self.p / self.eta1 + (1.0 - self.p) / self.eta2

    @property
    def jump_rms(self) -> float:
        """``sqrt(E[J^2])``."""
        return math.sqrt(2.0 * self.p / self.eta1**2 + 2.0 * (1.0 - self.p) / self.eta2**2)


@dataclass(frozen=True)
class SimConfig:
    T: float = 1.0
    n_steps: int = 1000
    n_paths: int = 1000
    seed: int = 0
    ito_correction: bool = False
    chunk_size: int = field(default=2048, compare=False)

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.n_steps < 1 or self.n_paths < 1:
            raise ValueError("n_steps and n_paths must be at least 1")
        if not 0 <= self.seed <= _MASK:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.uniform(self.T, self.n_steps)

    @property
    def dt(self) -> float:
        return self.T / self.n_steps


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _tag_code(tag: str) -> int:
    return int.from_bytes(hashlib.blake2b(tag.encode(), digest_size=8).digest(), "little")


def derive_substream_seed(master_seed: int, path_index: int, stream_tag: str) -> int:
    """64-bit seed for one (path, stream) pair, via chained splitmix64 finalisers."""
    z = _splitmix64(master_seed & _MASK)
    z = _splitmix64(z ^ (path_index & _MASK))
    return _splitmix64(z ^ _tag_code(stream_tag))


def substream(master_seed: int, path_index: int, stream_tag: str) -> np.random.Generator:
    """Philox generator keyed by the derived seed."""
    key = derive_substream_seed(master_seed, path_index, stream_tag)
    return np.random.Generator(np.random.Philox(key=key))


def uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` uniforms strictly inside (0, 1), built from the top 53 raw bits."""
    raw = rng.bit_generator.random_raw(n)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    """Inverse-CDF normals."""
    return special.ndtri(uniforms(rng, n))


def sample_double_exponential(eta1: float, eta2: float, p: float,
                              rng: np.random.Generator, size=None):
    """Asymmetric Laplace jump sizes: ``+Exp(eta1)`` w.p. ``p``, else ``-Exp(eta2)``.

    Two uniforms per draw: one picks the side, one the magnitude.
    """
    n = 1 if size is None else int(np.prod(size))
    u = uniforms(rng, 2 * n)
    up = u[:n] < p
    mag = -np.log(u[n:])
    out = np.where(up, mag / eta1, -mag / eta2)
    if size is None:
        return float(out[0])
    return out.reshape(size)


@lru_cache(maxsize=32)
def _poisson_cdf_table(rate: float) -> np.ndarray:
    kmax = int(rate + 20.0 * math.sqrt(rate) + 25.0)
    cdf = stats.poisson.cdf(np.arange(kmax + 1), rate)
    cdf[-1] = 1.0
    cdf.setflags(write=False)
    return cdf


def _poisson_counts(rate: float, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF Poisson draws from uniforms."""
    if rate == 0:
        return np.zeros(u.shape, dtype=np.int64)
    return np.searchsorted(_poisson_cdf_table(rate), u, side="left").astype(np.int64)


def _drift(diff: BrownianParams, cfg: SimConfig) -> float:
    return diff.mu - 0.5 * diff.sigma**2 if cfg.ito_correction else diff.mu


def _increments(params, cfg: SimConfig, start: int, stop: int, jump_counts_out=None) -> np.ndarray:
    """Euler increments for paths ``start..stop-1``; shape ``(stop - start, n_steps)``."""
    diff = params.diffusion if isinstance(params, KouParams) else params
    n, dt = cfg.n_steps, cfg.dt
    mu = _drift(diff, cfg)
    u = np.empty((stop - start, n))
    for row, i in enumerate(range(start, stop)):
        u[row] = uniforms(substream(cfg.seed, i, DIFFUSION), n)
    inc = mu * dt + diff.sigma * math.sqrt(dt) * special.ndtri(u)
    if isinstance(params, KouParams) and params.lam > 0:
        for row, i in enumerate(range(start, stop)):
            counts = _poisson_counts(params.lam * dt, uniforms(substream(cfg.seed, i, JUMP_COUNTS), n))
            total = int(counts.sum())
            if jump_counts_out is not None:
                jump_counts_out[i] = total
            if total == 0:
                continue
            sizes = sample_double_exponential(
                params.eta1, params.eta2, params.p, substream(cfg.seed, i, JUMP_SIZES), size=total
            )
            steps = np.repeat(np.arange(n), counts)
            inc[row] += np.bincount(steps, weights=sizes, minlength=n)
    return inc


def resolve_threads(threads: int | None = None) -> int:
    """Explicit value, else ``PATHRISK_THREADS``, else 1."""
    if threads is None:
        threads = int(os.environ.get("PATHRISK_THREADS", "1") or 1)
    return max(1, int(threads))


def _chunks(cfg: SimConfig):
    return [(s, min(s + cfg.chunk_size, cfg.n_paths)) for s in range(0, cfg.n_paths, cfg.chunk_size)]


def _run_chunks(work, cfg: SimConfig, threads):
    chunks = _chunks(cfg)
    threads = resolve_threads(threads)
    if threads == 1 or len(chunks) == 1:
        return [work(s, e) for s, e in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: work(*c), chunks))


def _paths_from_increments(inc: np.ndarray) -> np.ndarray:
    out = np.zeros((inc.shape[0], inc.shape[1] + 1))
    np.cumsum(inc, axis=1, out=out[:, 1:])
    return out


def simulate(params, cfg: SimConfig, threads: int | None = None,
             jump_counts: np.ndarray | None = None) -> PathEnsemble:
    """Full ensemble for a ``BrownianParams`` or ``KouParams`` model.

    If ``jump_counts`` (length ``n_paths``) is passed, the number of jumps of
    each path is written into it.
    """
    def work(s, e):
        return _paths_from_increments(_increments(params, cfg, s, e, jump_counts))

    values = np.concatenate(_run_chunks(work, cfg, threads), axis=0)
    return PathEnsemble(cfg.grid, values, np.full(cfg.n_paths, 1.0 / cfg.n_paths))


def simulate_bm(params: BrownianParams, cfg: SimConfig, threads: int | None = None) -> PathEnsemble:
    """``X_{i+1} = X_i + mu dt + sigma sqrt(dt) Z_i`` from ``X_0 = 0``."""
    return simulate(params, cfg, threads)


def simulate_kou(params: KouParams, cfg: SimConfig, threads: int | None = None,
                 jump_counts: np.ndarray | None = None) -> PathEnsemble:
    """Brownian step plus the sum of the jumps falling in each step."""
    return simulate(params, cfg, threads, jump_counts)


def simulate_functionals(params, cfg: SimConfig, threads: int | None = None) -> dict[str, np.ndarray]:
    """Per-path final value, running min/max and maximum drawdown without
    keeping whole paths in memory.  Agrees with ``simulate`` path by path."""
    def work(s, e):
        x = _paths_from_increments(_increments(params, cfg, s, e))
        peak = np.maximum.accumulate(x, axis=1)
        return np.stack([x[:, -1], x.min(axis=1), peak[:, -1], (peak - x).max(axis=1)])

    f = np.concatenate(_run_chunks(work, cfg, threads), axis=1)
    return {"final": f[0], "min": f[1], "max": f[2], "mdd": f[3]}


def with_seed(cfg: SimConfig, seed: int) -> SimConfig:
    return replace(cfg, seed=seed)
