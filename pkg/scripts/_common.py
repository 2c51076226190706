"""Shared command-line plumbing for the study scripts."""

import argparse
import json
import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tiecopula.sim import preset, run, with_jobs  # noqa: E402


def parse(description: str, grids: tuple = ()) -> argparse.Namespace:
    p = argparse.ArgumentParser(description=description)
    if grids:
        p.add_argument("--grid", choices=grids, default=grids[0])
    p.add_argument("--scale", choices=["desk", "full"], default="desk")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default="results", help="output directory")
    return p.parse_args()


def run_preset(name: str, args) -> list:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = []
    configs = with_jobs(preset(name, args.scale), args.threads)
    for i, cfg in enumerate(configs):
        start = time.perf_counter()
        rep = run(cfg)
        rep.write_csv(out / f"{name}_{i:03d}.csv")
        reports.append(rep)
        print(f"[{i + 1}/{len(configs)}] {cfg.family.value} tau={cfg.tau} n={cfg.n} "
              f"({time.perf_counter() - start:.0f}s)", file=sys.stderr)
    (out / f"{name}.json").write_text(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True))
    return reports
