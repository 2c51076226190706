"""RMSE of tau as the share of rounded first-margin values grows (threshold lambda)."""

from _common import parse, run_preset

args = parse(__doc__.splitlines()[0])
print(f"{'family':9} {'lambda':>6} {'tied':>5}  {'censoring':>9} {'average':>9} {'random':>9}")
for rep in run_preset("severity", args):
    c, s = rep.config, rep.summary
    cells = " ".join(f"{s[m]['rmse']:9.4f}" for m in ("censoring", "average", "random"))
    print(f"{c['family']:9} {c['mechanism']['lambda']:6.1f} {s['mean_tied_fraction_x']:5.2f}  {cells}")
