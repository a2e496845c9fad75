"""Simulation study: simulate ensembles, tabulate statistics and indices.

The report mirrors the two tables of the simulation study (summary
statistics of running minimum, maximum drawdown and final value per model;
Calmar, RAROC at two tail levels and the two Sharpe variants per model) and
adds histogram data for the six empirical densities.
"""

from __future__ import annotations

import csv
import math
import os
from pathlib import Path

import numpy as np

from . import __version__
from .acceptability import estimators_from_samples
from .config import ModelConfig, parse_config
from .io import dumps_json, load_ensemble, save_ensemble, sha256_file
from .paths import PathEnsemble, max_drawdown
from .simulation import simulate
from .stats import histogram, summarize

__all__ = [
    "DEFAULT_GAMMAS",
    "PUBLISHED_TABLE2",
    "cmd_simulate",
    "path_samples",
    "build_report",
    "cmd_report",
    "run_study",
]

DEFAULT_GAMMAS = (0.01, 0.05)
HIST_BINS = 50

# published values, for an informational side-by-side only
PUBLISHED_TABLE2 = {
    "bm": {"CR_n": 1.3718, "alpha_0.05": 0.7950, "alpha_0.01": 0.5998, "SR_B": 3.2652, "SR_J": 3.6670},
    "kou": {"CR_n": 2.8133, "alpha_0.05": 1.3130, "alpha_0.01": 0.9182, "SR_B": 5.2582, "SR_J": 5.2421},
}


def cmd_simulate(cfg: ModelConfig, out_path, threads: int | None = None) -> dict:
    """Simulate the configured model and write it (PRSK1, or CSV by extension)."""
    e = simulate(cfg.params, cfg.sim, threads)
    save_ensemble(out_path, e)
    return {"path": str(out_path), "sha256": sha256_file(out_path), "config": cfg.echo()}


def path_samples(e: PathEnsemble) -> dict[str, np.ndarray]:
    v = e.values
    return {"final": v[:, -1].copy(), "running_min": v.min(axis=1), "max_drawdown": max_drawdown(v)}


def _key(gamma: float) -> str:
    return f"alpha_{gamma:g}"


def _model_block(e: PathEnsemble, gammas) -> tuple[dict, dict, dict]:
    s = path_samples(e)
    table1 = {name: summarize(x).as_dict() for name, x in s.items()}
    table2 = {}
    conventions = set()
    for g in gammas:
        est = estimators_from_samples(s["final"], s["running_min"], s["max_drawdown"], g)
        table2.update(CR_n=est.CR_n, SR_B=est.SR_B, SR_J=est.SR_J)
        table2[_key(g)] = est.alpha_n_gamma
        conventions.update(est.conventions_triggered)
    table2["conventions_triggered"] = sorted(conventions)
    figures = {name: histogram(x, HIST_BINS).as_dict() for name, x in s.items()}
    return table1, table2, figures


def _ordering_checks(table2: dict, gammas) -> dict:
    out = {}
    for model, row in table2.items():
        alphas = [row[_key(g)] for g in sorted(gammas)]
        out[model] = {
            "alpha_increasing_in_gamma": all(a <= b for a, b in zip(alphas, alphas[1:])),
            "alpha_below_calmar": all(a <= row["CR_n"] for a in alphas),
        }
    if "bm" in table2 and "kou" in table2:
        out["calmar_kou_above_bm"] = table2["kou"]["CR_n"] > table2["bm"]["CR_n"]
    return out


def build_report(ensembles: dict[str, PathEnsemble], gammas=DEFAULT_GAMMAS,
                 configs: dict[str, dict] | None = None, sources: dict[str, dict] | None = None) -> dict:
    """Report dict for named ensembles (e.g. ``{"bm": ..., "kou": ...}``).

    Sample estimators treat paths as equally likely, as simulated ensembles are.
    """
    gammas = tuple(sorted(gammas))
    table1, table2, figures = {}, {}, {}
    for name in sorted(ensembles):
        table1[name], table2[name], figures[name] = _model_block(ensembles[name], gammas)
    comparison = {
        name: {k: {"published": v, "simulated": table2[name].get(k)} for k, v in PUBLISHED_TABLE2[name].items()}
        for name in table2 if name in PUBLISHED_TABLE2
    }
    return {
        "config": configs or {},
        "sources": sources or {},
        "gammas": list(gammas),
        "table1": table1,
        "table2": table2,
        "orderings": _ordering_checks(table2, gammas),
        "published_comparison": comparison,
        "figures": figures,
        "runtime": {
            "package_version": __version__,
            "n_paths": {k: int(e.n_paths) for k, e in sorted(ensembles.items())},
            "n_points": {k: int(e.values.shape[1]) for k, e in sorted(ensembles.items())},
        },
    }


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return str(v)


def write_report(report: dict, out_dir) -> dict[str, str]:
    """``report.json``, ``table1.csv``, ``table2.csv`` and ``figures.csv`` in ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {"json": out / "report.json", "table1": out / "table1.csv",
             "table2": out / "table2.csv", "figures": out / "figures.csv"}
    files["json"].write_text(dumps_json(report))
    stats_keys = ["skewness", "excess_kurtosis", "median", "mean", "sd", "n"]
    with open(files["table1"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["model", "sample"] + stats_keys)
        for model, block in report["table1"].items():
            for sample, st in block.items():
                w.writerow([model, sample] + [_fmt(st[k]) for k in stats_keys])
    with open(files["table2"], "w", newline="") as fh:
        w = csv.writer(fh)
        cols = ["CR_n"] + [_key(g) for g in report["gammas"]] + ["SR_B", "SR_J"]
        w.writerow(["model"] + cols)
        for model, row in report["table2"].items():
            w.writerow([model] + [_fmt(row[c]) for c in cols])
    with open(files["figures"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["model", "sample", "left", "right", "density"])
        for model, block in report["figures"].items():
            for sample, h in block.items():
                e = h["edges"]
                for i, d in enumerate(h["density"]):
                    w.writerow([model, sample, _fmt(e[i]), _fmt(e[i + 1]), _fmt(d)])
    return {k: str(v) for k, v in files.items()}


def cmd_report(files: dict[str, str], out_dir, gammas=DEFAULT_GAMMAS) -> dict:
    ensembles = {name: load_ensemble(path) for name, path in files.items()}
    sources = {name: {"path": os.path.basename(str(path)), "sha256": sha256_file(path)}
               for name, path in files.items()}
    report = build_report(ensembles, gammas, sources=sources)
    write_report(report, out_dir)
    return report


def run_study(out_dir, seed: int = 0, n_paths: int = 1000, n_steps: int = 1000,
              p: float = 0.5, ito_correction: bool = False, gammas=DEFAULT_GAMMAS,
              threads: int | None = None, **overrides) -> dict:
    """Simulate both models with the study parameters and write the report.

    The jump-diffusion uses a seed offset by one so its diffusion part is not a
    copy of the Brownian ensemble.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jump_keys = {"lambda", "eta1_inv", "eta2_inv"}
    common = {"n_paths": n_paths, "n_steps": n_steps, "ito_correction": ito_correction}
    common.update({k: v for k, v in overrides.items() if k not in jump_keys})
    jumps = {k: v for k, v in overrides.items() if k in jump_keys}
    cfgs = {
        "bm": parse_config({"model": "bm", "seed": seed, **common}),
        "kou": parse_config({"model": "kou", "seed": seed + 1, "p": p, **common, **jumps}),
    }
    files, ensembles = {}, {}
    for name, cfg in cfgs.items():
        files[name] = out / f"{name}.prsk"
        ensembles[name] = simulate(cfg.params, cfg.sim, threads)
        save_ensemble(files[name], ensembles[name])
    sources = {n: {"path": f.name, "sha256": sha256_file(f)} for n, f in files.items()}
    report = build_report(ensembles, gammas, configs={n: c.echo() for n, c in cfgs.items()}, sources=sources)
    write_report(report, out)
    return report
