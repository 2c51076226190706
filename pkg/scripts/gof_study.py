"""Rejection rates of the Cramer-von Mises test under different tie patterns.

Pass --grid gof-sizes for the n = 50 and n = 200 design with one- and two-margin ties.
"""

from _common import parse, run_preset

args = parse(__doc__.splitlines()[0], grids=("gof", "gof-sizes"))
print(f"{'ties':>9} {'n':>4} {'tau':>5} {'true':9} {'boot':8} {'H0: C':>7} {'H0: G':>7} {'H0: N':>7}")
for rep in run_preset(args.grid, args):
    c, s = rep.config, rep.summary
    rates = " ".join(f"{s[h]['rejection_rate']:7.1%}" for h in ("clayton", "gumbel", "gaussian"))
    print(f"{c['mechanism']['kind']:>9} {c['n']:4d} {c['tau']:5.2f} {c['family']:9} {c['gof_bootstrap']:8} {rates}")
