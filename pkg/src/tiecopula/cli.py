"""Command-line interface: ``tiecopula {fit,ci,gof,simulate}``.

Reports are JSON documents. Apart from the ``timing`` field, the same
flags and seed always produce the same bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bootstrap import BootstrapFailure, bootstrap_ci
from .copulas import CopulaDomainError, Family
from .gof import gof_test
from .mple import Method, fit
from .ranks import DegenerateDataError, RawSample, censor, kendall_tau_b
from .sim import ScenarioConfig, preset, run, with_jobs

SCHEMA = "tiecopula.report/1"
EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("tiecopula")


class InputError(ValueError):
    """Problem with user-supplied data or flags."""


@dataclass(frozen=True, eq=False)
class Dataset:
    sample: RawSample
    path: str
    columns: tuple[str, str]
    n_rows: int
    distinct: tuple[int, int]

    def summary(self) -> dict:
        return {
            "path": self.path,
            "columns": list(self.columns),
            "n": self.n_rows,
            "distinct": list(self.distinct),
        }


def _resolve_column(col, header: list[str] | None, width: int) -> int:
    if isinstance(col, int) or (isinstance(col, str) and col.lstrip("-").isdigit()):
        idx = int(col)
    elif header is None:
        raise InputError(f"column {col!r} given by name but the file has no header")
    elif col in header:
        idx = header.index(col)
    else:
        raise InputError(f"column {col!r} not found; available: {', '.join(header)}")
    if not 0 <= idx < width:
        raise InputError(f"column index {idx} out of range for {width} columns")
    return idx


def load_csv(path, col_x=0, col_y=1, has_header: bool = False, min_rows: int = 10) -> Dataset:
    """Read two numeric columns from a CSV file.

    Columns are 0-based positions or, with a header, names. Decimal
    separator is always a dot.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"no such file: {path}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    header = None
    first_line = 1
    if has_header:
        if not rows:
            raise InputError("file is empty")
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_line = 2
    width = len(header) if header else (len(rows[0]) if rows else 0)
    ix = _resolve_column(col_x, header, width)
    iy = _resolve_column(col_y, header, width)
    xs, ys = [], []
    for lineno, row in enumerate(rows, start=first_line):
        try:
            x, y = float(row[ix]), float(row[iy])
        except (ValueError, IndexError):
            raise InputError(f"row {lineno}: non-numeric or missing value") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InputError(f"row {lineno}: non-finite value")
        xs.append(x)
        ys.append(y)
    if len(xs) < min_rows:
        raise InputError(f"need at least {min_rows} rows, got {len(xs)}")
    names = (header[ix], header[iy]) if header else (str(ix), str(iy))
    sample = RawSample(np.array(xs), np.array(ys))
    distinct = (int(np.unique(sample.x).size), int(np.unique(sample.y).size))
    return Dataset(sample, str(path), names, sample.n, distinct)


def _families(text: str) -> list[Family]:
    try:
        return [Family.parse(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _threads(value) -> int:
    return value if value else (os.cpu_count() or 1)


def _cmd_fit(args, ds: Dataset) -> dict:
    out = {}
    for fam in _families(args.family):
        res = fit(fam, ds.sample, args.method, m=args.m, rng=np.random.default_rng(args.seed),
                  tau0=args.tau0)
        out[fam.value] = res.to_dict()
    if not all(r["converged"] for r in out.values()):
        raise ArithmeticError("optimizer stopped at the boundary of the search interval")
    return {"fits": out, "kendall_tau_b": kendall_tau_b(ds.sample)}


def _cmd_ci(args, ds: Dataset) -> dict:
    out = {}
    data = censor(ds.sample)
    for fam in _families(args.family):
        res = bootstrap_ci(fam, data, args.B, args.alpha, args.seed, n_jobs=_threads(args.threads))
        out[fam.value] = res.to_dict()
    return {"intervals": out}


def _cmd_gof(args, ds: Dataset) -> dict:
    out = {}
    data = censor(ds.sample)
    for fam in _families(args.family):
        res = gof_test(fam, data, args.B, args.seed, plus_one=args.plus_one, n_jobs=_threads(args.threads))
        out[fam.value] = res.to_dict()
    return {"tests": out}


def _cmd_simulate(args) -> dict:
    if args.scenario:
        try:
            configs = [ScenarioConfig.from_file(args.scenario)]
        except (KeyError, ValueError, OSError) as exc:
            raise InputError(f"bad scenario file: {exc}") from None
    elif args.preset:
        configs = preset(args.preset, args.scale)
    else:
        raise InputError("simulate needs --scenario or --preset")
    configs = with_jobs(configs, _threads(args.threads))
    reports = []
    for i, cfg in enumerate(configs):
        rep = run(cfg)
        reports.append(rep.to_dict())
        if args.records:
            target = Path(args.records)
            if len(configs) > 1:
                target = target.with_name(f"{target.stem}_{i:03d}{target.suffix}")
            rep.write_csv(target)
    return {"reports": reports}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiecopula", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bootstrap: bool):
        p.add_argument("data", help="CSV file with the two variables")
        p.add_argument("--col-x", default="0", help="first column (0-based index or header name)")
        p.add_argument("--col-y", default="1", help="second column (0-based index or header name)")
        p.add_argument("--header", action="store_true", help="first row holds column names")
        p.add_argument("--family", default="gumbel",
                       help="comma-separated families: clayton, survival-clayton, gumbel, gaussian")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        if bootstrap:
            p.add_argument("--B", type=int, default=1000, help="bootstrap replicates")
            p.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")

    p = sub.add_parser("fit", help="maximum pseudo-likelihood fit")
    common(p, bootstrap=False)
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.CENSORING.value)
    p.add_argument("--m", type=int, default=100, help="randomisations for --method random")
    p.add_argument("--tau0", type=float, default=None, help="optional starting value on the tau scale")

    p = sub.add_parser("ci", help="tie-preserving bootstrap confidence interval")
    common(p, bootstrap=True)
    p.add_argument("--alpha", type=float, default=0.05)

    p = sub.add_parser("gof", help="Cramer-von Mises goodness-of-fit test")
    common(p, bootstrap=True)
    p.add_argument("--plus-one", action="store_true", help="use (k + 1) / (B + 1) as the p-value")

    p = sub.add_parser("simulate", help="run a Monte Carlo scenario")
    p.add_argument("--scenario", help="key = value scenario file")
    p.add_argument("--preset", choices=["bias", "severity", "coverage", "gof", "gof-sizes"])
    p.add_argument("--scale", choices=["desk", "full"], default="desk")
    p.add_argument("--records", help="CSV path for replicate-level records")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    return parser


def _resolved(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "verbose")}
    if cfg.get("threads") is None and "threads" in cfg:
        cfg["threads"] = _threads(None)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    report = {"schema": SCHEMA, "command": args.command, "config": _resolved(args)}
    try:
        if args.command == "simulate":
            report["result"] = _cmd_simulate(args)
        else:
            ds = load_csv(args.data, args.col_x, args.col_y, args.header)
            report["dataset"] = ds.summary()
            handler = {"fit": _cmd_fit, "ci": _cmd_ci, "gof": _cmd_gof}[args.command]
            report["result"] = handler(args, ds)
    except (InputError, DegenerateDataError, CopulaDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BootstrapFailure, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
