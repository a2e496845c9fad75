"""A path that dominates another everywhere can still have the lower Calmar ratio.

The upper path climbs higher before falling back, so its maximum drawdown
grows faster than its final value.

Run: python demos/calmar_not_monotone.py
"""
import numpy as np

from pathrisk import PathEnsemble, calmar, max_drawdown, raroc

t = np.linspace(0.0, 1.0, 5)
lower = PathEnsemble.from_arrays([[0.0, 1.0, 0.5, 0.5, 0.5]], t=t)
upper = PathEnsemble.from_arrays([[0.0, 1.0, 0.5, 2.0, 0.6]], t=t)

print("upper >= lower at every time:", bool(np.all(upper.values >= lower.values)))
for name, e in (("lower", lower), ("upper", upper)):
    print(f"{name}: final {e.values[0, -1]:.2f}  max drawdown {max_drawdown(e)[0]:.2f}  "
          f"Calmar {calmar(e):.4f}  RAROC {raroc(e, 1.0)}")
print("Calmar ordering flips. Neither path dips below 0, so RAROC is unbounded for both.")
