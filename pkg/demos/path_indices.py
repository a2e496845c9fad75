"""Path-dependent performance: running minimum, drawdown, RAROC and Calmar.

A small ensemble of three equally likely return paths, followed by the
bisection view of RAROC as the largest acceptable level of a risk family.

Run: python demos/path_indices.py
"""
import numpy as np

from pathrisk import (
    PathEnsemble,
    alpha_sup,
    calmar,
    max_drawdown,
    raroc,
    raroc_family,
    running_min,
    sharpe_variants,
)

paths = PathEnsemble.from_arrays(
    [[0.00, 0.04, -0.02, 0.05, 0.08],
     [0.00, -0.06, -0.03, 0.01, 0.02],
     [0.00, 0.02, 0.07, 0.03, 0.06]],
    t=np.linspace(0.0, 1.0, 5),
)

print("running minima :", running_min(paths.values)[:, -1])
print("max drawdowns  :", max_drawdown(paths))
print("final values   :", paths.values[:, -1])

gamma = 1 / 3
print(f"\nRAROC (gamma={gamma:.3f}) = {raroc(paths, gamma):.6f}")
print(f"same value by bisection   = {alpha_sup(raroc_family(gamma), paths):.6f}")
print(f"Calmar ratio              = {calmar(paths):.6f}")
sr_b, sr_j = sharpe_variants(paths)
print(f"Sharpe on running min     = {sr_b:.4f}")
print(f"Sharpe on max drawdown    = {sr_j:.4f}")

# scaling every path leaves both ratios unchanged
doubled = paths * 2.0
print(f"\nafter doubling: RAROC {raroc(doubled, gamma):.6f}, Calmar {calmar(doubled):.6f}")
