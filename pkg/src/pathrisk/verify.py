"""Randomised property checks on small finite instances.

Each check draws random ensembles (a handful of scenarios, a few grid
points), evaluates one property and records the first counterexample.  The
checks cover the dual representation of the RAROC-type index and the
acceptability axioms of the running-minimum RAROC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linprog

from . import duality as dl
from .acceptability import alpha_sup, raroc, raroc_family
from .paths import PathEnsemble, TimeGrid, r_inf_norm

__all__ = ["random_ensemble", "CheckResult", "run_verification", "CHECKS"]


def random_ensemble(rng: np.random.Generator, max_scenarios: int = 4, max_grid: int = 5,
                    n: int | None = None, m: int | None = None) -> PathEnsemble:
    """Random ensemble with a mix of continuous values, ties and sign patterns."""
    n = n or int(rng.integers(1, max_scenarios + 1))
    m = m or int(rng.integers(2, max_grid + 1))
    t = np.concatenate(([0.0], np.cumsum(rng.uniform(0.1, 1.0, m - 1))))
    kind = rng.integers(0, 6)
    if kind == 0:
        values = rng.integers(-3, 4, size=(n, m)).astype(float)
    elif kind == 1:
        values = rng.uniform(0.0, 1.0, size=(n, m))
    elif kind == 2:
        values = rng.uniform(-1.0, 0.2, size=(n, m))
    else:
        values = rng.uniform(-1.0, 1.0, size=(n, m)) + rng.uniform(0, 0.5)
    w = rng.uniform(0.1, 1.0, n)
    probs = w / w.sum()
    probs[-1] = 1.0 - probs[:-1].sum()
    return PathEnsemble(TimeGrid(t), values, probs)


def _same_alpha(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


def _expected_alpha(e: PathEnsemble, x_max: float) -> float:
    a = dl.raroc_full(e)
    return math.inf if a >= x_max else a


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: int = 0
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, witness: Callable[[], dict]) -> None:
        self.instances += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness()

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "instances": self.instances,
            "failures": self.failures,
            "witness": self.witness,
        }


def _ens_dict(e: PathEnsemble) -> dict:
    return {"t": e.grid.t.tolist(), "values": e.values.tolist(), "probs": e.probs.tolist()}


# --- individual properties; each returns (ok, witness-extras) ----------------


def check_terminal_kernel(e, rng, pair):
    b = dl.terminal_kernel(e)
    got = pair(e, b)
    want = float(np.dot(e.probs, e.values[:, -1]))
    return b.in_D() and abs(got - want) <= 1e-12 * max(1.0, abs(want)), {"got": got, "want": want}


def check_norm_bound(e, rng, pair):
    a = dl.random_kernel(rng, e.probs, e.values.shape[1], concentration=rng.uniform(0.2, 2))
    lhs, rhs = abs(pair(e, a)), r_inf_norm(e) * a.mass()
    return lhs <= rhs + 1e-12, {"lhs": lhs, "rhs": rhs}


def check_vertex_optimality(e, rng, pair):
    vmin = -dl.rho_full(e, pair=pair)
    n, m = e.values.shape
    samples = [pair(e, dl.random_kernel(rng, e.probs, m, 0.3)) for _ in range(20)]
    # independent LP over D: minimise <X, A> subject to unit expected mass
    c = np.concatenate([(e.probs[:, None] * e.values[:, :-1]).ravel(), (e.probs[:, None] * e.values).ravel()])
    a_eq = np.concatenate([np.repeat(e.probs, m - 1), np.repeat(e.probs, m)])[None, :]
    lp = linprog(c, A_eq=a_eq, b_eq=[1.0], bounds=(0, None), method="highs")
    ok = min(samples) >= vmin - 1e-12 and abs(lp.fun - vmin) <= 1e-9
    return ok, {"vertex_min": vmin, "sample_min": min(samples), "lp_min": float(lp.fun)}


def check_rho_full(e, rng, pair):
    got, want = dl.rho_full(e, pair=pair), -float(np.min(e.values))
    return abs(got - want) <= 1e-12 * max(1.0, abs(want)), {"got": got, "want": want}


def check_alpha_bruteforce(e, rng, pair, tol=1e-9, x_max=dl.DEFAULT_X_MAX):
    got = dl.alpha_bruteforce(e, tol=tol, x_max=x_max, pair=pair)
    want = _expected_alpha(e, x_max)
    return _same_alpha(got, want, 2e-8), {"bruteforce": got, "closed_form": want}


def check_equivalence_chain(e, rng, pair):
    alpha = dl.raroc_full(e)
    x = float(rng.choice([rng.uniform(0.01, 3.0), rng.exponential(1.0) + 1e-3]))
    if math.isfinite(alpha) and abs(x - alpha) <= 1e-9 * max(1.0, alpha):
        x *= 1.5
    links = dl.equivalence_chain(e, x, pair=pair)
    # the chain's first statement uses the true pairing-free closed form
    links["alpha_closed_form_ge_x"] = alpha >= x
    return len(set(links.values())) == 1, {"x": x, "links": links}


def check_kernel_sets_increasing(e, rng, pair):
    n, m = e.values.shape
    probes = [e.with_values(rng.uniform(-1, 1.5, (n, m))) for _ in range(6)] + [e]
    cands = [dl.random_kernel(rng, e.probs, m, 0.5) for _ in range(12)]
    cands += [v.to_kernel(e.probs, m) for v in dl.enumerate_extreme_points(n, m)]
    cands.append(dl.terminal_kernel(e))
    x, y = sorted(rng.uniform(0, 3, 2))
    qx = dl.kernel_set_from_alpha(dl.raroc_full, x, cands, probes, pair=pair)
    qy = dl.kernel_set_from_alpha(dl.raroc_full, y, cands, probes, pair=pair)
    ids_x, ids_y = {id(a) for a in qx}, {id(a) for a in qy}
    return ids_x <= ids_y, {"x": x, "y": y, "n_x": len(qx), "n_y": len(qy)}


def check_pairing_monotone(e, rng, pair):
    bigger = e.with_values(e.values + rng.uniform(0, 1, e.values.shape))
    a = dl.random_kernel(rng, e.probs, e.values.shape[1])
    lo, hi = pair(e, a), pair(bigger, a)
    return lo <= hi + 1e-12, {"pair_small": lo, "pair_big": hi}


def _rel_eq(a, b, rtol):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300) or a == b


def check_raroc_scale(e, rng, pair, gamma=None):
    gamma = gamma or float(rng.uniform(0.05, 1.0))
    base = raroc(e, gamma)
    lams = rng.uniform(0.01, 100.0, 10)
    bad = [float(l) for l in lams if not _rel_eq(raroc(e * float(l), gamma), base, 1e-12)]
    return not bad, {"gamma": gamma, "lambdas": bad}


def check_raroc_monotone(e, rng, pair, gamma=None):
    gamma = gamma or float(rng.uniform(0.05, 1.0))
    bigger = e.with_values(e.values + rng.uniform(0, 0.5, e.values.shape) * rng.integers(0, 2, e.values.shape))
    a, b = raroc(e, gamma), raroc(bigger, gamma)
    return a <= b * (1 + 1e-12) or b == math.inf, {"gamma": gamma, "alpha_X": a, "alpha_Y": b}


def check_raroc_quasiconcave(e, rng, pair, gamma=None):
    gamma = gamma or float(rng.uniform(0.05, 1.0))
    other = e.with_values(rng.uniform(-1, 1.2, e.values.shape))
    floor_ = min(raroc(e, gamma), raroc(other, gamma))
    bad = []
    for lam in rng.uniform(0, 1, 10):
        mix = e.with_values(lam * e.values + (1 - lam) * other.values)
        v = raroc(mix, gamma)
        if not (v >= floor_ * (1 - 1e-12) or v == math.inf):
            bad.append({"lambda": float(lam), "alpha_mix": v})
    return not bad, {"gamma": gamma, "floor": floor_, "violations": bad,
                     "other": other.values.tolist()}


def check_alpha_sup_matches_raroc(e, rng, pair):
    gamma = float(rng.uniform(0.05, 1.0))
    fam = raroc_family(gamma)
    got, want = alpha_sup(fam, e, 1e-9), raroc(e, gamma)
    if want >= fam.x_max:
        want = math.inf
    return _same_alpha(got, want, 2e-8), {"gamma": gamma, "alpha_sup": got, "raroc": want}


CHECKS: dict[str, Callable] = {
    "terminal_kernel_projects_expectation": check_terminal_kernel,
    "pairing_norm_bound": check_norm_bound,
    "inf_attained_at_vertex": check_vertex_optimality,
    "rho_full_is_minus_min": check_rho_full,
    "alpha_bruteforce_closed_form": check_alpha_bruteforce,
    "equivalence_chain_links": check_equivalence_chain,
    "kernel_sets_increasing_in_x": check_kernel_sets_increasing,
    "pairing_monotone": check_pairing_monotone,
    "raroc_scale_invariance": check_raroc_scale,
    "raroc_monotonicity": check_raroc_monotone,
    "raroc_quasi_concavity": check_raroc_quasiconcave,
    "alpha_sup_reproduces_raroc": check_alpha_sup_matches_raroc,
}


def run_verification(instances: int = 200, max_scenarios: int = 4, max_grid: int = 5,
                     seed: int = 7, pair=None, checks=None) -> dict:
    """Run every check on ``instances`` random ensembles.

    ``pair`` replaces the bilinear pairing everywhere it is used, which lets a
    caller confirm that a broken pairing is caught.
    """
    pair = pair or dl.pairing
    rng = np.random.default_rng(seed)
    names = list(checks or CHECKS)
    results = {name: CheckResult(name) for name in names}
    for _ in range(instances):
        e = random_ensemble(rng, max_scenarios, max_grid)
        for name in names:
            sub = np.random.default_rng(rng.integers(0, 2**63))
            ok, extra = CHECKS[name](e, sub, pair)
            results[name].record(ok, lambda: {"ensemble": _ens_dict(e), **extra})
    return {
        "passed": all(r.passed for r in results.values()),
        "instances": instances,
        "max_scenarios": max_scenarios,
        "max_grid": max_grid,
        "seed": seed,
        "checks": [results[n].as_dict() for n in names],
    }


def sign_flipped_pairing(e, a) -> float:
    """Deliberately broken pairing used by the verifier's self-test."""
    return -dl.pairing(e, a)
