"""Brownian motion against a Kou jump-diffusion with the same diffusion part.

Prints the summary statistics and indices the report module tabulates, for a
small ensemble, and the effect of the up-jump probability on the Calmar ratio.

Run: python demos/jump_vs_diffusion.py
"""
import tempfile

from pathrisk.experiment import run_study

with tempfile.TemporaryDirectory() as out:
    for p in (0.5, 0.9):
        report = run_study(out, seed=7, n_paths=1000, n_steps=250, p=p)
        print(f"up-jump probability p={p}")
        for model, row in report["table2"].items():
            print(f"  {model:>3}: CR {row['CR_n']:.4f}  alpha_0.01 {row['alpha_0.01']:.4f}  "
                  f"alpha_0.05 {row['alpha_0.05']:.4f}  SR_B {row['SR_B']:.4f}  SR_J {row['SR_J']:.4f}")
        print(f"  Calmar of the jump model above Brownian: {report['orderings']['calmar_kou_above_bm']}")
    stats = report["table1"]["kou"]["max_drawdown"]
    print(f"\njump model max drawdown: mean {stats['mean']:.4f}, sd {stats['sd']:.4f}, "
          f"skewness {stats['skewness']:.3f}")
