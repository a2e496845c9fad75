"""Simulation config files.

A config is a YAML (or JSON) mapping with these keys::

    model: bm | kou          required
    mu: 0.15                 annual drift
    sigma: 0.20              annual volatility
    lambda: 10               annual jump intensity (kou only)
    eta1_inv: 0.02           mean up-jump size 1/eta1 (kou only)
    eta2_inv: 0.04           mean down-jump size 1/eta2 (kou only)
    p: 0.5                   probability of an up-jump (kou only)
    T: 1.0                   horizon in years
    n_steps: 1000
    n_paths: 1000
    seed: 42
    ito_correction: false    use drift mu - sigma^2/2
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .simulation import BrownianParams, KouParams, SimConfig

__all__ = ["ConfigError", "ModelConfig", "load_config", "parse_config", "PAPER_DEFAULTS"]

PAPER_DEFAULTS = {
    "mu": 0.15,
    "sigma": 0.20,
    "lambda": 10.0,
    "eta1_inv": 0.02,
    "eta2_inv": 0.04,
    "p": 0.5,
    "T": 1.0,
    "n_steps": 1000,
    "n_paths": 1000,
    "seed": 0,
    "ito_correction": False,
}

_COMMON = {"model", "mu", "sigma", "T", "n_steps", "n_paths", "seed", "ito_correction"}
_KOU = {"lambda", "eta1_inv", "eta2_inv", "p"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    model: str
    params: BrownianParams | KouParams
    sim: SimConfig
    raw: dict

    def echo(self) -> dict:
        """Fully resolved key/value view, suitable for reports."""
        return dict(sorted(self.raw.items()))


def parse_config(data: dict, **overrides) -> ModelConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    data = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    model = data.get("model")
    if model not in ("bm", "kou"):
        raise ConfigError("config key 'model' must be 'bm' or 'kou'")
    allowed = _COMMON | (_KOU if model == "kou" else set())
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys for model {model!r}: {', '.join(unknown)}")
    keys = allowed - {"model"}
    cfg = {k: data.get(k, PAPER_DEFAULTS[k]) for k in keys}
    try:
        diffusion = BrownianParams(float(cfg["mu"]), float(cfg["sigma"]))
        if model == "kou":
            params = KouParams.from_mean_sizes(
                diffusion.mu, diffusion.sigma, float(cfg["lambda"]),
                float(cfg["eta1_inv"]), float(cfg["eta2_inv"]), float(cfg["p"]),
            )
        else:
            params = diffusion
        sim = SimConfig(
            T=float(cfg["T"]), n_steps=int(cfg["n_steps"]), n_paths=int(cfg["n_paths"]),
            seed=int(cfg["seed"]), ito_correction=bool(cfg["ito_correction"]),
        )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    return ModelConfig(model, params, sim, {"model": model, **cfg})


def load_config(path, **overrides) -> ModelConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parse_config(data, **overrides)
