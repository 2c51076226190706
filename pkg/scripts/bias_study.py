"""Estimation error of tau under one-margin rounding, three estimators.

Prints bias and RMSE for every family, tau and sample size.
"""

from _common import parse, run_preset

args = parse(__doc__.splitlines()[0])
print(f"{'family':9} {'tau':>4} {'n':>4}  {'censoring':>17} {'average':>17} {'random':>17}")
for rep in run_preset("bias", args):
    c, s = rep.config, rep.summary
    cells = " ".join(f"{s[m]['bias']:+.4f}/{s[m]['rmse']:.4f}" for m in ("censoring", "average", "random"))
    print(f"{c['family']:9} {c['tau']:4.1f} {c['n']:4d}  {cells}")
