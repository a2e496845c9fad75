"""Tail risk of a return sample: VaR, AVaR and the distortion view of AVaR.

Run: python demos/tail_risk.py
"""
import numpy as np

from pathrisk import Distortion, EmpiricalDistribution, avar, avar_order_stat, distorted_expectation, var

rng = np.random.default_rng(1)
returns = rng.standard_t(df=4, size=2000) * 0.01

d = EmpiricalDistribution.from_sample(returns)
print(f"{len(returns)} daily returns, mean {d.mean():+.5f}")

for gamma in (0.01, 0.05, 0.10):
    print(f"gamma={gamma:.2f}  VaR={var(d, gamma):.5f}  AVaR={avar(d, gamma):.5f}  "
          f"distortion={distorted_expectation(d, Distortion(gamma)):.5f}  "
          f"order-stat={avar_order_stat(returns, gamma):.5f}")

# with a non-integer tail count the order-statistic estimator drops the partial atom
gamma = 0.0123
print(f"\ngamma={gamma}: exact AVaR {avar(d, gamma):.6f} vs order-stat {avar_order_stat(returns, gamma):.6f}")
