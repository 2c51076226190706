"""Monte Carlo studies: point estimation, bootstrap coverage and GoF size/power.

Data are drawn on the copula scale and ties are introduced by rounding the
uniform margins; every rank-based estimator here is invariant to strictly
increasing marginal transforms, so no marginal model is needed.
"""

from __future__ import annotations

import configparser
import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from functools import partial
from pathlib import Path

import numpy as np

from .bootstrap import BootstrapFailure, MatchTies, NoTies, TiePattern, bootstrap_ci
from .copulas import CopulaSpec, Family
from .gof import run_gof
from .mple import Method, fit
from .ranks import CensoredPseudoSample, RawSample, censor
from .streams import as_seed_sequence, child, generator, replicate_map

log = logging.getLogger(__name__)


class TieKind(str, Enum):
    NONE = "none"
    ROUND_MARGIN1 = "round1"
    ROUND_BOTH = "round2"
    THRESHOLD = "threshold"


@dataclass(frozen=True)
class TieMechanism:
    kind: TieKind = TieKind.ROUND_MARGIN1
    decimals: int = 1
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", TieKind(self.kind))
        if self.decimals < 0:
            raise ValueError("decimals must be non-negative")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")


def apply_ties(mechanism: TieMechanism, pairs) -> RawSample:
    pairs = np.asarray(pairs, dtype=float)
    x, y = pairs[:, 0].copy(), pairs[:, 1].copy()
    kind, d = mechanism.kind, mechanism.decimals
    if kind in (TieKind.ROUND_MARGIN1, TieKind.ROUND_BOTH):
        x = np.round(x, d)
    if kind is TieKind.ROUND_BOTH:
        y = np.round(y, d)
    if kind is TieKind.THRESHOLD:
        x = np.where(x < mechanism.lam, np.round(x, d), x)
    return RawSample(x, y)


class RoundTies:
    """Replicate builder that re-applies a known tie mechanism."""

    def __init__(self, mechanism: TieMechanism, n: int):
        self.mechanism = mechanism
        self.n = n

    def __call__(self, pairs) -> CensoredPseudoSample:
        return censor(apply_ties(self.mechanism, pairs))


@dataclass(frozen=True)
class ScenarioConfig:
    family: Family
    tau: float
    n: int
    mechanism: TieMechanism = field(default_factory=TieMechanism)
    replicates: int = 200
    B: int = 200
    methods: tuple = (Method.CENSORING, Method.AVERAGE_RANK, Method.RANDOM_BREAK)
    seed: int = 0
    m: int = 100
    alpha: float = 0.05
    hypotheses: tuple = (Family.CLAYTON, Family.GUMBEL, Family.GAUSSIAN)
    gof_bootstrap: str = "match"
    study: str = "point"
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        object.__setattr__(self, "hypotheses", tuple(Family.parse(h) for h in self.hypotheses))
        CopulaSpec.from_tau(self.family, self.tau)
        if self.n < 10:
            raise ValueError("n must be at least 10")
        if self.replicates < 1 or self.B < 1 or self.m < 1:
            raise ValueError("replicates, B and m must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.gof_bootstrap not in ("match", "round", "standard"):
            raise ValueError("gof_bootstrap must be match, round or standard")
        if self.study not in ("point", "coverage", "gof"):
            raise ValueError("study must be point, coverage or gof")

    @property
    def spec(self) -> CopulaSpec:
        return CopulaSpec.from_tau(self.family, self.tau)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["family"] = self.family.value
        out["mechanism"] = {"kind": self.mechanism.kind.value, "decimals": self.mechanism.decimals,
                            "lambda": self.mechanism.lam}
        out["methods"] = [m.value for m in self.methods]
        out["hypotheses"] = [h.value for h in self.hypotheses]
        return out

    @classmethod
    def from_mapping(cls, values: dict) -> "ScenarioConfig":
        """Build from flat string key/value pairs as found in scenario files."""
        v = {k.strip().lower(): str(val).strip() for k, val in values.items()}
        mech = TieMechanism(
            kind=v.pop("mechanism", "round1"),
            decimals=int(v.pop("decimals", 1)),
            lam=float(v.pop("lambda", 1.0)),
        )
        kwargs = {"family": v.pop("family"), "tau": float(v.pop("tau")), "n": int(v.pop("n")),
                  "mechanism": mech}
        for key in ("replicates", "b", "seed", "m", "n_jobs"):
            if key in v:
                kwargs["B" if key == "b" else key] = int(v.pop(key))
        if "alpha" in v:
            kwargs["alpha"] = float(v.pop("alpha"))
        for key in ("methods", "hypotheses"):
            if key in v:
                kwargs[key] = tuple(s.strip() for s in v.pop(key).split(",") if s.strip())
        for key in ("gof_bootstrap", "study"):
            if key in v:
                kwargs[key] = v.pop(key)
        if v:
            raise ValueError(f"unknown scenario keys: {', '.join(sorted(v))}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        """Read a ``key = value`` scenario file (``#`` comments allowed)."""
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        parser.read_string("[scenario]\n" + Path(path).read_text())
        return cls.from_mapping(dict(parser["scenario"]))


@dataclass
class ScenarioReport:
    study: str
    config: dict
    summary: dict
    records: list

    def to_dict(self) -> dict:
        return {"study": self.study, "config": self.config, "summary": self.summary}

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    def write_csv(self, path) -> None:
        if not self.records:
            Path(path).write_text("")
            return
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(self.records[0]))
            writer.writeheader()
            writer.writerows(self.records)


def error_summary(errors) -> dict:
    """Bias, variance (ddof=0) and RMSE of estimation errors, ignoring NaNs."""
    e = np.asarray(errors, dtype=float)
    ok = e[np.isfinite(e)]
    if ok.size == 0:
        return {"bias": math.nan, "variance": math.nan, "rmse": math.nan, "n_ok": 0,
                "n_failed": int(e.size)}
    bias = float(np.mean(ok))
    variance = float(np.mean((ok - bias) ** 2))
    return {
        "bias": bias,
        "variance": variance,
        "rmse": math.sqrt(bias * bias + variance),
        "n_ok": int(ok.size),
        "n_failed": int(e.size - ok.size),
    }


def _draw(cfg: ScenarioConfig, ss, r: int) -> RawSample:
    return apply_ties(cfg.mechanism, cfg.spec.sample(cfg.n, generator(ss, r, 0)))


def _point_replicate(cfg: ScenarioConfig, ss, r: int) -> dict:
    raw = _draw(cfg, ss, r)
    rec = {"replicate": r, "tied_fraction_x": tied_fraction(raw.x)}
    for method in cfg.methods:
        try:
            res = fit(cfg.family, raw, method, m=cfg.m, rng=generator(ss, r, 1))
            err = res.tau_hat - cfg.tau
        except ValueError as exc:
            log.debug("replicate %d, %s failed: %s", r, method.value, exc)
            err = math.nan
        rec[f"error_{method.value}"] = err
    return rec


def tied_fraction(values) -> float:
    """Share of observations that belong to a tie block of size > 1."""
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    return float(np.mean(counts[inverse] > 1))


def run_point_estimation(cfg: ScenarioConfig) -> ScenarioReport:
    ss = as_seed_sequence(cfg.seed)
    records = replicate_map(partial(_point_replicate, cfg, ss), range(cfg.replicates), cfg.n_jobs)
    summary = {m.value: error_summary([rec[f"error_{m.value}"] for rec in records]) for m in cfg.methods}
    summary["mean_tied_fraction_x"] = float(np.mean([rec["tied_fraction_x"] for rec in records]))
    return ScenarioReport("point", cfg.to_dict(), summary, records)


def _coverage_replicate(cfg: ScenarioConfig, ss, r: int) -> dict:
    data = censor(_draw(cfg, ss, r))
    rec = {"replicate": r, "tau_hat": math.nan, "lower": math.nan, "upper": math.nan,
           "covered": math.nan, "n_failed": 0}
    try:
        res = bootstrap_ci(cfg.family, data, cfg.B, cfg.alpha, child(ss, r, 1))
    except (ValueError, BootstrapFailure) as exc:
        log.debug("replicate %d failed: %s", r, exc)
        return rec
    rec.update(tau_hat=res.fit.tau_hat, lower=res.tau_ci_lower, upper=res.tau_ci_upper,
               covered=float(res.covers_tau(cfg.tau)), n_failed=res.n_failed)
    return rec


def run_coverage(cfg: ScenarioConfig) -> ScenarioReport:
    ss = as_seed_sequence(cfg.seed)
    records = replicate_map(partial(_coverage_replicate, cfg, ss), range(cfg.replicates), cfg.n_jobs)
    covered = np.array([rec["covered"] for rec in records])
    ok = covered[np.isfinite(covered)]
    summary = {
        "coverage": float(ok.mean()) if ok.size else math.nan,
        "n_ok": int(ok.size),
        "n_failed": int(covered.size - ok.size),
        "nominal": 1.0 - cfg.alpha,
    }
    return ScenarioReport("coverage", cfg.to_dict(), summary, records)


def _builder(cfg: ScenarioConfig, data: CensoredPseudoSample):
    if cfg.gof_bootstrap == "match":
        return MatchTies(TiePattern.from_sample(data))
    if cfg.gof_bootstrap == "round":
        return RoundTies(cfg.mechanism, data.n)
    return NoTies(data.n)


def _gof_replicate(cfg: ScenarioConfig, ss, r: int) -> dict:
    data = censor(_draw(cfg, ss, r))
    rec = {"replicate": r}
    for j, hyp in enumerate(cfg.hypotheses):
        try:
            res = run_gof(hyp, data, cfg.B, child(ss, r, 1 + j), _builder(cfg, data),
                          label=cfg.gof_bootstrap)
            p = res.p_value
        except (ValueError, BootstrapFailure) as exc:
            log.debug("replicate %d, hypothesis %s failed: %s", r, hyp.value, exc)
            p = math.nan
        rec[f"p_{hyp.value}"] = p
    return rec


def run_gof_study(cfg: ScenarioConfig) -> ScenarioReport:
    ss = as_seed_sequence(cfg.seed)
    records = replicate_map(partial(_gof_replicate, cfg, ss), range(cfg.replicates), cfg.n_jobs)
    summary = {}
    for hyp in cfg.hypotheses:
        p = np.array([rec[f"p_{hyp.value}"] for rec in records])
        ok = p[np.isfinite(p)]
        summary[hyp.value] = {
            "rejection_rate": float(np.mean(ok < cfg.alpha)) if ok.size else math.nan,
            "n_ok": int(ok.size),
            "n_failed": int(p.size - ok.size),
        }
    return ScenarioReport("gof", cfg.to_dict(), summary, records)


def run(cfg: ScenarioConfig) -> ScenarioReport:
    return {"point": run_point_estimation, "coverage": run_coverage, "gof": run_gof_study}[cfg.study](cfg)


# Full-scale grids; the desk-scale profile shrinks replicate and bootstrap counts.
_FAMILIES = (Family.CLAYTON, Family.GUMBEL, Family.GAUSSIAN)


def preset(name: str, scale: str = "desk") -> list[ScenarioConfig]:
    """Scenario grids for the point, tie-severity, coverage and GoF studies."""
    desk = scale == "desk"
    if scale not in ("desk", "full"):
        raise ValueError("scale must be desk or full")
    round1 = TieMechanism(TieKind.ROUND_MARGIN1)
    if name == "bias":
        reps = 200 if desk else 1000
        return [ScenarioConfig(f, tau, n, round1, replicates=reps, seed=1000 + i, study="point")
                for i, (f, tau, n) in enumerate(
                    (f, t / 10, n) for f in _FAMILIES for t in range(1, 10) for n in (100, 200, 400))]
    if name == "severity":
        reps = 200 if desk else 1000
        return [ScenarioConfig(f, 0.75, 200, TieMechanism(TieKind.THRESHOLD, lam=lam / 10),
                               replicates=reps, seed=2000 + i, study="point")
                for i, (f, lam) in enumerate((f, lam) for f in _FAMILIES for lam in range(1, 11))]
    if name == "coverage":
        reps, B = (200, 300) if desk else (500, 1000)
        return [ScenarioConfig(f, tau, n, round1, replicates=reps, B=B, seed=3000 + i, study="coverage")
                for i, (f, tau, n) in enumerate(
                    (f, t, n) for n in (50, 100, 200) for t in (0.25, 0.5, 0.75) for f in _FAMILIES)]
    if name in ("gof", "gof-sizes"):
        reps = 200 if desk else 500
        patterns = {"none": TieMechanism(TieKind.NONE), "one": round1,
                    "two": TieMechanism(TieKind.ROUND_BOTH)}
        sizes = (100,) if name == "gof" else (50, 200)
        modes = ("match", "round") if name == "gof" else ("match",)
        out = []
        for pattern, mech in patterns.items():
            if name == "gof-sizes" and pattern == "none":
                continue
            for n in sizes:
                for tau in (0.25, 0.5, 0.75):
                    for f in _FAMILIES:
                        for mode in modes:
                            if pattern == "none" and mode == "round":
                                continue
                            out.append(ScenarioConfig(
                                f, tau, n, mech, replicates=reps, B=200,
                                seed=4000 + len(out), study="gof",
                                gof_bootstrap="standard" if pattern == "none" else mode))
        return out
    raise ValueError(f"unknown preset {name!r}")


def with_jobs(configs, n_jobs: int) -> list[ScenarioConfig]:
    return [replace(c, n_jobs=n_jobs) for c in configs]
