"""Pseudo-observations for tied data and their censoring intervals.

Every rank quantity is kept as an integer; the pseudo-observation scale
is obtained by dividing by ``n + 1`` so that equal ranks always give
bit-identical floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property

import numpy as np
from scipy import stats


class DegenerateDataError(ValueError):
    """Raised when a margin carries no rank information."""


class Case(IntEnum):
    """Censoring pattern of one observation."""

    BOTH_TIED = 1
    X_TIED = 2
    Y_TIED = 3
    NO_TIES = 4


@dataclass(frozen=True, eq=False)
class RawSample:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel()
        y = np.asarray(self.y, dtype=float).ravel()
        if x.shape != y.shape:
            raise ValueError(f"margins differ in length: {x.size} vs {y.size}")
        if x.size < 2:
            raise ValueError("need at least two observations")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("observations must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def from_pairs(cls, pairs) -> "RawSample":
        pairs = np.asarray(pairs, dtype=float)
        return cls(pairs[:, 0], pairs[:, 1])


def block_ranks(values) -> tuple[np.ndarray, np.ndarray]:
    """Return (upper, lower) ranks; a tie block shares both.

    The upper rank is ``n F_n(x)`` and the lower one ``n F_n(x-) + 1``.
    """
    values = np.asarray(values, dtype=float)
    s = np.sort(values)
    upper = np.searchsorted(s, values, side="right")
    lower = np.searchsorted(s, values, side="left") + 1
    return upper.astype(np.int64), lower.astype(np.int64)


@dataclass(frozen=True, eq=False)
class CensoredPseudoSample:
    """Interval-censored pseudo-observations stored as integer ranks."""

    u_rank_up: np.ndarray
    u_rank_lo: np.ndarray
    v_rank_up: np.ndarray
    v_rank_lo: np.ndarray

    def __post_init__(self):
        arrs = [np.asarray(a, dtype=np.int64) for a in
                (self.u_rank_up, self.u_rank_lo, self.v_rank_up, self.v_rank_lo)]
        n = arrs[0].size
        if any(a.shape != (n,) for a in arrs):
            raise ValueError("rank arrays must be one-dimensional with equal length")
        if np.any(arrs[1] > arrs[0]) or np.any(arrs[3] > arrs[2]):
            raise ValueError("lower rank exceeds upper rank")
        if np.any(arrs[1] < 1) or np.any(arrs[0] > n) or np.any(arrs[3] < 1) or np.any(arrs[2] > n):
            raise ValueError("ranks must lie in 1..n")
        for name, a in zip(("u_rank_up", "u_rank_lo", "v_rank_up", "v_rank_lo"), arrs):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def n(self) -> int:
        return self.u_rank_up.size

    @cached_property
    def u_up(self) -> np.ndarray:
        return self.u_rank_up / (self.n + 1)

    @cached_property
    def u_lo(self) -> np.ndarray:
        return self.u_rank_lo / (self.n + 1)

    @cached_property
    def v_up(self) -> np.ndarray:
        return self.v_rank_up / (self.n + 1)

    @cached_property
    def v_lo(self) -> np.ndarray:
        return self.v_rank_lo / (self.n + 1)

    @cached_property
    def case(self) -> np.ndarray:
        x_tied = self.u_rank_lo < self.u_rank_up
        y_tied = self.v_rank_lo < self.v_rank_up
        out = np.full(self.n, Case.NO_TIES, dtype=np.int64)
        out[x_tied & ~y_tied] = Case.X_TIED
        out[~x_tied & y_tied] = Case.Y_TIED
        out[x_tied & y_tied] = Case.BOTH_TIED
        return out

    @property
    def has_ties(self) -> bool:
        return bool(np.any(self.case != Case.NO_TIES))

    def points(self) -> np.ndarray:
        """Upper-bound pseudo-observations as an ``(n, 2)`` array."""
        return np.column_stack([self.u_up, self.v_up])

    def check_informative(self) -> None:
        for name, lo, up in (("first", self.u_rank_lo, self.u_rank_up),
                             ("second", self.v_rank_lo, self.v_rank_up)):
            if np.all(lo == 1) and np.all(up == self.n):
                raise DegenerateDataError(f"the {name} margin is a single tie block")


def censor(sample: RawSample) -> CensoredPseudoSample:
    u_up, u_lo = block_ranks(sample.x)
    v_up, v_lo = block_ranks(sample.y)
    return CensoredPseudoSample(u_up, u_lo, v_up, v_lo)


def pseudo_observations(sample: RawSample) -> np.ndarray:
    """Scaled pseudo-observations ``n/(n+1) * F_n(X_i)``, as an ``(n, 2)`` array."""
    return censor(sample).points()


def mid_rank_observations(sample: RawSample) -> np.ndarray:
    """Pseudo-observations built from average ranks, scaled by ``1/(n+1)``."""
    n = sample.n
    cols = []
    for values in (sample.x, sample.y):
        up, lo = block_ranks(values)
        cols.append((up + lo) / 2.0 / (n + 1))
    return np.column_stack(cols)


def tie_block_sizes(rank_up, rank_lo) -> list[int]:
    """Sorted sizes of the tie blocks described by a margin's rank bounds."""
    blocks = np.unique(np.column_stack([rank_lo, rank_up]), axis=0)
    return sorted(int(s) for s in blocks[:, 1] - blocks[:, 0] + 1)


def kendall_tau_b(sample: RawSample) -> float:
    """Tie-corrected (tau-b) sample Kendall correlation.

    A single constant margin gives 0, since no pair is concordant or
    discordant.
    """
    x_const = np.all(sample.x == sample.x[0])
    y_const = np.all(sample.y == sample.y[0])
    if x_const and y_const:
        raise DegenerateDataError("both margins are constant")
    if x_const or y_const:
        return 0.0
    return float(stats.kendalltau(sample.x, sample.y, variant="b").statistic)
