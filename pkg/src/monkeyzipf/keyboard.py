"""Keyboard model and letter probabilities from random divisions of [0, 1].

A keyboard has ``K`` letters with rank-ordered probabilities
``q[0] >= q[1] >= ... >= q[K-1]`` and a space key with probability ``s``.
Random keyboards are built by breaking the unit interval at ``K - 1``
random points and scaling the sorted pieces by ``c = 1 - s``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateSampleError

SUM_TOL = 1e-12
MAX_RESAMPLES = 8
DEFAULT_C = 0.82
DEFAULT_S = 0.18


@dataclass(frozen=True)
class Keyboard:
    q: tuple[float, ...]
    s: float

    def __post_init__(self):
        q = tuple(float(x) for x in self.q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", float(self.s))
        if len(q) < 2:
            raise ValueError(f"need at least 2 letters, got {len(q)}")
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"space probability must lie in (0, 1), got {self.s}")
        if min(q) <= 0.0:
            raise ValueError("letter probabilities must be positive")
        if any(a < b for a, b in zip(q, q[1:])):
            raise ValueError("letter probabilities must be sorted non-increasing")
        total = math.fsum(q) + self.s
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    @classmethod
    def normalized(cls, weights: Sequence[float], s: float) -> "Keyboard":
        """Scale arbitrary positive letter weights to total mass ``1 - s`` and sort them."""
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or np.any(w <= 0):
            raise ValueError("weights must be a 1-d vector of positive numbers")
        q = np.sort(w)[::-1] * ((1.0 - s) / math.fsum(w))
        return cls(tuple(q.tolist()), s)

    @property
    def K(self) -> int:
        return len(self.q)

    @property
    def log_q(self) -> np.ndarray:
        return np.log(np.asarray(self.q))

    def to_dict(self) -> dict:
        return {"q": list(self.q), "s": self.s}

    @classmethod
    def from_dict(cls, d: dict) -> "Keyboard":
        return cls(tuple(d["q"]), d["s"])


class DistributionKind(str, enum.Enum):
    UNIFORM = "uniform"
    BETA32 = "beta32"
    QUANTILE_TABLE = "quantile"


@dataclass(frozen=True)
class DistributionSpec:
    """Distribution of the break points on [0, 1].

    ``quantile_table`` holds ``(probability, value)`` pairs of the inverse
    CDF; sampling interpolates it linearly. The table is not checked for the
    slope-bounded-below condition the log-spacings limit needs.
    """

    kind: DistributionKind = DistributionKind.UNIFORM
    quantile_table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        kind = DistributionKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is not DistributionKind.QUANTILE_TABLE:
            if self.quantile_table is not None:
                raise ValueError(f"{kind.value} takes no quantile table")
            return
        if self.quantile_table is None:
            raise ValueError("quantile kind requires a quantile table")
        table = tuple((float(p), float(v)) for p, v in self.quantile_table)
        object.__setattr__(self, "quantile_table", table)
        p, v = np.array(table).T
        if len(p) < 2 or p[0] != 0.0 or v[0] != 0.0 or p[-1] != 1.0 or v[-1] != 1.0:
            raise ValueError("quantile table must map 0 -> 0 and 1 -> 1")
        if np.any(np.diff(p) <= 0) or np.any(np.diff(v) <= 0):
            raise ValueError("quantile table must be strictly increasing in both coordinates")

    @classmethod
    def uniform(cls) -> "DistributionSpec":
        return cls(DistributionKind.UNIFORM)

    @classmethod
    def beta32(cls) -> "DistributionSpec":
        return cls(DistributionKind.BETA32)

    @classmethod
    def quantile(cls, table) -> "DistributionSpec":
        return cls(DistributionKind.QUANTILE_TABLE, tuple(map(tuple, table)))

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` independent variates on [0, 1]."""
        if self.kind is DistributionKind.BETA32:
            # 3rd smallest of 4 uniforms is exactly Beta(3, 2)
            u = rng.random((n, 4))
            return np.sort(u, axis=1)[:, 2]
        u = rng.random(n)
        if self.kind is DistributionKind.UNIFORM:
            return u
        p, v = np.array(self.quantile_table).T
        return np.interp(u, p, v)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.quantile_table is not None:
            d["quantile_table"] = [list(row) for row in self.quantile_table]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        table = d.get("quantile_table")
        return cls(d["kind"], None if table is None else tuple(map(tuple, table)))


@dataclass(frozen=True)
class SpacingsSample:
    spec: DistributionSpec
    K: int
    seed: int
    spacings: np.ndarray = field(repr=False)
    sorted_spacings: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.spacings, dtype=float)
        if d.shape != (self.K,):
            raise ValueError(f"expected {self.K} spacings, got shape {d.shape}")
        if np.any(d <= 0):
            raise DegenerateSampleError("zero spacing in sample")
        if abs(math.fsum(d) - 1.0) > SUM_TOL:
            raise ValueError("spacings do not sum to 1")
        d.setflags(write=False)
        srt = np.asarray(self.sorted_spacings, dtype=float)
        srt.setflags(write=False)
        object.__setattr__(self, "spacings", d)
        object.__setattr__(self, "sorted_spacings", srt)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "K": self.K,
            "seed": self.seed,
            "spacings": self.spacings.tolist(),
        }


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_spacings(spec: DistributionSpec, K: int, seed: int) -> SpacingsSample:
    """Break [0, 1] at ``K - 1`` variates drawn from ``spec``.

    Spacings are listed from the top of the interval down, so
    ``D[0] = 1 - X_max`` and ``D[K-1] = X_min``. A sample with tied
    variates is redrawn from the same stream, at most ``MAX_RESAMPLES`` times.
    """
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    rng = make_rng(seed)
    for _ in range(MAX_RESAMPLES + 1):
        x = np.sort(spec.draw(rng, K - 1))[::-1]
        d = -np.diff(np.concatenate(([1.0], x, [0.0])))
        if np.all(d > 0):
            break
    else:
        raise DegenerateSampleError(
            f"degenerate sample: zero spacing after {MAX_RESAMPLES} resamples (K={K}, seed={seed})"
        )
    return SpacingsSample(spec, K, seed, d, np.sort(d)[::-1])


def keyboard_from_spacings(sample: SpacingsSample, c: float = DEFAULT_C) -> Keyboard:
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    return Keyboard(tuple((c * sample.sorted_spacings).tolist()), 1.0 - c)


def miller_keyboard(K: int, s: float) -> Keyboard:
    """Equal letter probabilities ``(1 - s) / K``."""
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    return Keyboard(((1.0 - s) / K,) * K, s)


def alphas(kb: Keyboard) -> np.ndarray:
    """Exponents ``a`` with ``q[i] = q[0] ** a[i]``; ``a[0]`` is exactly 1."""
    log_q = kb.log_q
    a = log_q / log_q[0]
    a[0] = 1.0
    return a
