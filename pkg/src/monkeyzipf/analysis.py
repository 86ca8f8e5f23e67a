"""Log-spacings statistics, the mean-log bound on the exponent, and sweeps.

The mean radix-K log of the letter probabilities, ``mu_bar``, is a lower
bound for ``-beta``, and for random spacings it tends to -1 as K grows.
Together with ``-beta < -1`` this squeezes the exponent towards -1.
"""

from __future__ import annotations

import enum
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .enumeration import top_n_raw
from .exponent import solve_root
from .keyboard import (
    DEFAULT_C,
    DistributionKind,
    DistributionSpec,
    Keyboard,
    SpacingsSample,
    keyboard_from_spacings,
    miller_keyboard,
    sample_spacings,
)

EULER_GAMMA = 0.57721566490153286061

# Differential entropy of Beta(3, 2), i.e. -int h log h over [0, 1] with
# h(x) = 12 x^2 (1 - x); closed form 9/4 - ln 12, confirmed by quadrature
# in tests/test_analysis.py.
BETA32_ENTROPY = -0.2349066497880003

GENERALIZED_ENTROPY = {
    DistributionKind.UNIFORM: 0.0,
    DistributionKind.BETA32: BETA32_ENTROPY,
}


def entropy_limit(spec: DistributionSpec) -> float | None:
    """Almost-sure limit of the log-spacings statistic, if known for ``spec``."""
    h = GENERALIZED_ENTROPY.get(spec.kind)
    return None if h is None else h - EULER_GAMMA


@dataclass(frozen=True)
class ShaoHahnReport:
    K: int
    statistic: float
    radixK_mean: float
    entropy_limit: float | None
    mu_bar: float


def shao_hahn_statistic(sample: SpacingsSample, c: float = DEFAULT_C) -> ShaoHahnReport:
    """``mean(log(K * D))`` and its radix-K forms for one sample.

    ``mu_bar`` is the mean radix-K log of the letter probabilities of the
    keyboard built from ``sample`` with letter mass ``c``.
    """
    K = sample.K
    log_d = np.log(sample.spacings)
    log_K = math.log(K)
    statistic = math.log(K) + math.fsum(log_d.tolist()) / K
    radix_mean = statistic / log_K - 1.0
    return ShaoHahnReport(
        K=K,
        statistic=statistic,
        radixK_mean=radix_mean,
        entropy_limit=entropy_limit(sample.spec),
        mu_bar=math.log(c) / log_K + radix_mean,
    )


def mean_log_radix_K(kb: Keyboard) -> float:
    return math.fsum(kb.log_q.tolist()) / (kb.K * math.log(kb.K))


@dataclass(frozen=True)
class Proposition1Result:
    mu_bar: float
    minus_beta: float
    holds: bool
    ratio: float


def verify_proposition1(kb: Keyboard, tol: float = 1e-12) -> Proposition1Result:
    """Check ``mu_bar <= -beta``.

    ``ratio`` is ``sum(alpha) / (K * log_R0(K))``; ``mu_bar = ratio * (-beta)``,
    and the geometric-harmonic mean inequality makes ``ratio >= 1``.
    """
    rep = solve_root(kb)
    mu_bar = mean_log_radix_K(kb)
    ratio = math.fsum(rep.alphas.tolist()) * math.log(rep.R0) / (kb.K * math.log(kb.K))
    holds = mu_bar <= -rep.beta + tol and ratio >= 1.0 - tol
    return Proposition1Result(mu_bar, -rep.beta, holds, ratio)


@dataclass(frozen=True)
class LogLogSeries:
    ranks: np.ndarray
    log_rank: np.ndarray
    log_base: np.ndarray
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if not len(self.ranks) == len(self.log_rank) == len(self.log_base):
            raise ValueError("series vectors differ in length")

    def __len__(self):
        return len(self.ranks)

    @classmethod
    def from_ranked(cls, ranked, source=None) -> "LogLogSeries":
        ranks = np.fromiter((rw.rank for rw in ranked), dtype=np.int64, count=len(ranked))
        lb = np.fromiter((rw.word.log_base for rw in ranked), dtype=float, count=len(ranked))
        return cls(ranks, np.log(ranks), lb, dict(source or {}))


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float


def fit_loglog_slope(series: LogLogSeries, min_rank: int = 2) -> SlopeFit:
    """Least-squares line of log base value on log rank for ranks >= ``min_rank``."""
    keep = series.ranks >= min_rank
    x = series.log_rank[keep]
    y = series.log_base[keep]
    if len(x) < 10:
        raise ValueError(f"need at least 10 points with rank >= {min_rank}, got {len(x)}")
    if x.min() == x.max():
        raise ValueError("degenerate series: all log ranks equal")
    xc = x - x.mean()
    sxx = float(xc @ xc)
    yc = y - y.mean()
    slope = float(xc @ yc) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = yc - slope * xc
    syy = float(yc @ yc)
    r2 = 1.0 - float(resid @ resid) / syy if syy > 0 else 1.0
    return SlopeFit(slope, intercept, r2)


def log_thin(series: LogLogSeries, n_points: int) -> LogLogSeries:
    """Keep about ``n_points`` ranks spaced evenly in log rank.

    Plain least squares over every rank weights each step of a staircase
    by its width, so the widest (last) step dominates; thinning to a
    log-uniform grid gives every decade of rank equal weight.
    """
    lo, hi = math.log(series.ranks[0]), math.log(series.ranks[-1])
    grid = np.unique(np.rint(np.exp(np.linspace(lo, hi, n_points))).astype(np.int64))
    idx = np.searchsorted(series.ranks, grid)
    idx = idx[idx < len(series.ranks)]
    return LogLogSeries(series.ranks[idx], series.log_rank[idx], series.log_base[idx],
                        dict(series.source, thinned=n_points))


class FigureKind(str, enum.Enum):
    EQUAL = "equal"
    UNIFORM = "uniform"
    BETA32 = "beta"


def figure_keyboard(kind: FigureKind | str, K: int = 26, c: float = DEFAULT_C,
                    seed: int = 0) -> Keyboard:
    kind = FigureKind(kind)
    if kind is FigureKind.EQUAL:
        return miller_keyboard(K, 1.0 - c)
    spec = DistributionSpec.uniform() if kind is FigureKind.UNIFORM else DistributionSpec.beta32()
    return keyboard_from_spacings(sample_spacings(spec, K, seed), c)


def figure1_data(kind: FigureKind | str, K: int = 26, c: float = DEFAULT_C,
                 N: int = 475_255, seed: int = 0) -> LogLogSeries:
    kind = FigureKind(kind)
    kb = figure_keyboard(kind, K, c, seed)
    source = {"kind": kind.value, "K": K, "c": c, "N": N}
    if kind is not FigureKind.EQUAL:
        source["seed"] = seed
    lb = np.fromiter((e[0] for e in top_n_raw(kb, N)), dtype=float, count=N)
    ranks = np.arange(1, N + 1, dtype=np.int64)
    return LogLogSeries(ranks, np.log(ranks), lb, source)


@dataclass(frozen=True)
class SweepRow:
    K: int
    seed: int
    beta: float
    mu_bar: float

    @property
    def abs_err(self) -> float:
        return abs(self.beta - 1.0)


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]

    def medians(self) -> dict[int, float]:
        by_K: dict[int, list[float]] = {}
        for row in self.rows:
            by_K.setdefault(row.K, []).append(row.abs_err)
        return {K: statistics.median(v) for K, v in sorted(by_K.items())}


def _sweep_cell(spec: DistributionSpec, K: int, seed: int, c: float) -> SweepRow:
    try:
        kb = keyboard_from_spacings(sample_spacings(spec, K, seed), c)
        rep = solve_root(kb)
    except Exception as exc:
        raise RuntimeError(f"sweep cell K={K}, seed={seed} failed: {exc}") from exc
    return SweepRow(K, seed, rep.beta, mean_log_radix_K(kb))


def convergence_sweep(spec: DistributionSpec, K_list, seeds_per_K: int, c: float = DEFAULT_C,
                      first_seed: int = 0, workers: int | None = None) -> SweepResult:
    """Exponent and mean-log for each ``(K, seed)`` with seeds ``first_seed, first_seed+1, ...``.

    Rows come back ordered by ``(K, seed)`` whatever ``workers`` is.
    """
    if any(K < 2 for K in K_list):
        raise ValueError("every K must be >= 2")
    cells = [(K, first_seed + j) for K in K_list for j in range(seeds_per_K)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_cell, spec, K, seed, c) for K, seed in cells]
            rows = [f.result() for f in futures]
    else:
        rows = [_sweep_cell(spec, K, seed, c) for K, seed in cells]
    rows.sort(key=lambda r: (r.K, r.seed))
    return SweepResult(rows)
