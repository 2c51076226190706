"""Coverage of the tie-preserving bootstrap percentile interval for tau."""

from _common import parse, run_preset

args = parse(__doc__.splitlines()[0])
print(f"{'n':>4} {'tau':>5} {'family':9} {'coverage':>8} {'failed':>6}")
for rep in run_preset("coverage", args):
    c, s = rep.config, rep.summary
    print(f"{c['n']:4d} {c['tau']:5.2f} {c['family']:9} {s['coverage']:8.1%} {s['n_failed']:6d}")
