"""Dual objects for path ensembles on a finite probability space and grid.

A bivariate kernel ``A = (A^pr, A^op)`` is stored through its increments at
each grid point and scenario.  The predictable part charges the value just
*before* a grid point, the optional part the value *at* it:

    <X, A> = sum_w p_w [ sum_{i>=1} X_{i-1}(w) dA^pr_i(w) + sum_{i>=0} X_i(w) dA^op_i(w) ]

``D`` is the set of nonnegative kernels with unit expected total mass.  It is
a simplex whose vertices put mass ``1/p_w`` on a single coordinate, so any
linear functional over ``D`` is minimised at a vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .acceptability import DEFAULT_TOL, DEFAULT_X_MAX, IndexFamily, alpha_sup
from .paths import PathEnsemble

__all__ = [
    "BiVariateKernel",
    "KernelExtremePoint",
    "pairing",
    "pairing_many",
    "enumerate_extreme_points",
    "vertex_stack",
    "rho_full",
    "terminal_kernel",
    "tilde_kernel",
    "alpha_bruteforce",
    "raroc_full",
    "equivalence_chain",
    "kernel_set_from_alpha",
    "regenerated_alpha",
    "random_kernel",
]

MASS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BiVariateKernel:
    """Increments of the predictable and optional parts, shape ``(n_scenarios, n_points)``.

    ``pr[:, 0]`` is always zero (the predictable part starts at 0).
    ``probs`` is the scenario measure the expected mass is taken under.
    """

    pr: np.ndarray
    op: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        pr = np.array(self.pr, dtype=float)
        op = np.array(self.op, dtype=float)
        probs = np.array(self.probs, dtype=float)
        if pr.ndim != 2 or pr.shape != op.shape or pr.shape[0] != probs.size:
            raise ValueError("pr/op must be (n_scenarios, n_points) matching probs")
        if np.any(pr[:, 0] != 0):
            raise ValueError("predictable increments vanish at t_0")
        for a in (pr, op, probs):
            a.setflags(write=False)
        object.__setattr__(self, "pr", pr)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "probs", probs)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pr.shape

    def mass(self) -> float:
        """Expected total variation ``E[Var(A)]`` (for nonnegative increments)."""
        return float(np.dot(self.probs, np.abs(self.pr).sum(axis=1) + np.abs(self.op).sum(axis=1)))

    def in_D(self, atol: float = MASS_TOL) -> bool:
        """Membership in ``D``: nonnegative increments with unit expected mass."""
        if np.any(self.pr < 0) or np.any(self.op < 0):
            return False
        return abs(self.mass() - 1.0) <= atol

    def combine(self, w_self: float, other: "BiVariateKernel", w_other: float) -> "BiVariateKernel":
        if self.shape != other.shape or np.any(self.probs != other.probs):
            raise ValueError("kernels live on different spaces")
        return BiVariateKernel(
            w_self * self.pr + w_other * other.pr,
            w_self * self.op + w_other * other.op,
            self.probs,
        )


@dataclass(frozen=True)
class KernelExtremePoint:
    """Vertex of ``D``: mass ``1/p_w`` on one increment coordinate."""

    scenario: int
    index: int
    part: Literal["pr", "op"]

    def __post_init__(self):
        if self.part not in ("pr", "op"):
            raise ValueError("part is 'pr' or 'op'")
        if self.part == "pr" and self.index < 1:
            raise ValueError("predictable vertices need index >= 1")

    def to_kernel(self, probs, n_points: int) -> BiVariateKernel:
        probs = np.asarray(probs, dtype=float)
        pr = np.zeros((probs.size, n_points))
        op = np.zeros_like(pr)
        target = pr if self.part == "pr" else op
        target[self.scenario, self.index] = 1.0 / probs[self.scenario]
        return BiVariateKernel(pr, op, probs)


def _check_shapes(e: PathEnsemble, shape) -> None:
    if tuple(shape) != e.values.shape:
        raise ValueError(
            f"kernel of shape {tuple(shape)} does not match ensemble {e.values.shape}"
        )


def pairing(e: PathEnsemble, a: BiVariateKernel) -> float:
    """``<X, A>``; predictable increments see the left value ``X_{i-1}``."""
    _check_shapes(e, a.shape)
    if np.any(a.probs != e.probs):
        raise ValueError("kernel and ensemble carry different scenario probabilities")
    x = e.values
    per_scenario = np.sum(x[:, :-1] * a.pr[:, 1:], axis=1) + np.sum(x * a.op, axis=1)
    return float(np.dot(e.probs, per_scenario))


def pairing_many(e: PathEnsemble, pr: np.ndarray, op: np.ndarray) -> np.ndarray:
    """``<X, A_k>`` for a stack of kernels given as ``(K, n, m)`` increment arrays."""
    _check_shapes(e, pr.shape[1:])
    x = e.values
    per = np.einsum("nm,knm->kn", x[:, :-1], pr[:, :, 1:]) + np.einsum("nm,knm->kn", x, op)
    return per @ e.probs


def enumerate_extreme_points(n_scenarios: int, n_points: int) -> list[KernelExtremePoint]:
    """All vertices of ``D``: ``n_scenarios * (2 * n_points - 1)`` of them."""
    out = []
    for w in range(n_scenarios):
        out.extend(KernelExtremePoint(w, i, "pr") for i in range(1, n_points))
        out.extend(KernelExtremePoint(w, i, "op") for i in range(n_points))
    return out


def vertex_stack(probs, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices of ``D`` as stacked ``(K, n, m)`` pr/op increment arrays."""
    probs = np.asarray(probs, dtype=float)
    pts = enumerate_extreme_points(probs.size, n_points)
    pr = np.zeros((len(pts), probs.size, n_points))
    op = np.zeros_like(pr)
    for k, v in enumerate(pts):
        (pr if v.part == "pr" else op)[k, v.scenario, v.index] = 1.0 / probs[v.scenario]
    return pr, op


def rho_full(e: PathEnsemble, pair=None) -> float:
    """``-min_{A in D} <X, A>``, evaluated by enumerating the vertices of ``D``."""
    if pair is not None:
        n, m = e.values.shape
        return -min(pair(e, v.to_kernel(e.probs, m)) for v in enumerate_extreme_points(n, m))
    pr, op = vertex_stack(e.probs, e.values.shape[1])
    return -float(np.min(pairing_many(e, pr, op)))


def terminal_kernel(e: PathEnsemble) -> BiVariateKernel:
    """Unit optional mass at the horizon in every scenario: ``<X, B> = E[X_T]``."""
    n, m = e.values.shape
    op = np.zeros((n, m))
    op[:, -1] = 1.0
    return BiVariateKernel(np.zeros((n, m)), op, e.probs)


def tilde_kernel(x: float, a: BiVariateKernel, b: BiVariateKernel | None = None) -> BiVariateKernel:
    """``1/(1+x) * B + x/(1+x) * A`` with ``B`` the terminal kernel."""
    if x < 0:
        raise ValueError("level x must be nonnegative")
    if not a.in_D():
        raise ValueError("kernel is not in D")
    if b is None:
        n, m = a.shape
        op = np.zeros((n, m))
        op[:, -1] = 1.0
        b = BiVariateKernel(np.zeros((n, m)), op, a.probs)
    if math.isinf(x):
        return a
    return b.combine(1.0 / (1.0 + x), a, x / (1.0 + x))


def _min_tilde_pairing(e: PathEnsemble, x: float, stack, b_pr, b_op) -> float:
    pr, op = stack
    w_b, w_a = 1.0 / (1.0 + x), x / (1.0 + x)
    return float(np.min(pairing_many(e, w_b * b_pr + w_a * pr, w_b * b_op + w_a * op)))


def alpha_bruteforce(e: PathEnsemble, tol: float = DEFAULT_TOL, x_max: float = DEFAULT_X_MAX,
                     pair=None) -> float:
    """``sup{x >= 0 : min over tilde kernels of <X, A~> >= 0}`` by bisection.

    The tilde kernels are formed explicitly from every vertex of ``D``.
    ``pair`` substitutes the pairing (used to test the verifier itself).
    """
    n, m = e.values.shape
    if pair is None:
        stack = vertex_stack(e.probs, m)
        b = terminal_kernel(e)
        b_pr, b_op = b.pr[None], b.op[None]

        def rho_x(x, ens):
            return -_min_tilde_pairing(ens, x, stack, b_pr, b_op)
    else:
        verts = [v.to_kernel(e.probs, m) for v in enumerate_extreme_points(n, m)]

        def rho_x(x, ens):
            return -min(pair(ens, tilde_kernel(x, a)) for a in verts)

    return alpha_sup(IndexFamily(rho_x, x_max=x_max), e, tol)


def raroc_full(e: PathEnsemble) -> float:
    """Closed form ``E[X_T] / rho_full`` with the index conventions."""
    reward = float(np.dot(e.probs, e.values[:, -1]))
    risk = -float(np.min(e.values))
    if risk <= 0:
        return math.inf
    if reward <= 0:
        return 0.0
    return reward / risk


def equivalence_chain(e: PathEnsemble, x: float, pair=None) -> dict[str, bool]:
    """Evaluate each statement of the chain ``alpha(X) >= x <=> ... <=> min_{Q^x} <X, A~> >= 0``
    separately, for ``x > 0``.

    The returned booleans should all agree.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    pair = pair or pairing
    n, m = e.values.shape
    verts = [v.to_kernel(e.probs, m) for v in enumerate_extreme_points(n, m)]
    b = terminal_kernel(e)
    reward = pair(e, b)
    inf_d = min(pair(e, a) for a in verts)
    rho = -inf_d
    w_b, w_a = 1.0 / (1.0 + x), x / (1.0 + x)
    alpha = math.inf if rho <= 0 else (0.0 if reward <= 0 else reward / rho)
    return {
        "alpha_ge_x": alpha >= x,
        "reward_ge_x_rho": reward >= -x * inf_d,
        "convex_mix_nonneg": w_b * reward + w_a * inf_d >= 0,
        "inf_of_mix_nonneg": min(w_b * reward + w_a * pair(e, a) for a in verts) >= 0,
        "inf_of_mixed_kernel_nonneg": min(pair(e, b.combine(w_b, a, w_a)) for a in verts) >= 0,
        "inf_over_Q_nonneg": min(pair(e, tilde_kernel(x, a)) for a in verts) >= 0,
    }


def random_kernel(rng: np.random.Generator, probs, n_points: int,
                  concentration: float = 1.0) -> BiVariateKernel:
    """Random element of ``D``: Dirichlet mixture of its vertices."""
    pr, op = vertex_stack(probs, n_points)
    w = rng.dirichlet(np.full(pr.shape[0], concentration))
    return BiVariateKernel(np.tensordot(w, pr, 1), np.tensordot(w, op, 1), probs)


def kernel_set_from_alpha(alpha_fn: Callable[[PathEnsemble], float], x: float,
                          candidates: Sequence[BiVariateKernel],
                          probes: Iterable[PathEnsemble], atol: float = 1e-12,
                          pair=None) -> list[BiVariateKernel]:
    """Candidates ``A`` with ``<X, A> >= 0`` for every probe ``X`` with ``alpha(X) > x``."""
    pair = pair or pairing
    active = [p for p in probes if alpha_fn(p) > x]
    return [a for a in candidates if all(pair(p, a) >= -atol for p in active)]


def regenerated_alpha(e: PathEnsemble, kernel_sets: dict[float, Sequence[BiVariateKernel]],
                      atol: float = 1e-12, pair=None) -> float:
    """``sup{x : min_{A in Q^x} <X, A> >= 0}`` over the levels of ``kernel_sets``.

    An empty kernel set imposes no constraint.  Returns 0 when no level passes.
    """
    pair = pair or pairing
    best = 0.0
    for x in sorted(kernel_sets):
        ks = kernel_sets[x]
        if all(pair(e, a) >= -atol for a in ks):
            best = max(best, x)
    return best
