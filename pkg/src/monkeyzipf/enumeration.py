"""Ranked word base values and the counting functions N(t), N_cum(t).

Base values are carried as natural logs, ``log_base = sum(log q[i])`` over
a word's letters, so the null word has ``log_base == 0``. Letter indices in
public output are 1-based.

Ranking is by descending base value. Values within ``TIE_TOL`` of each
other (chained) count as tied and are put in alphabetical order: letter
sequences compared index by index, a prefix before its extensions.
"""

from __future__ import annotations

import heapq
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ResourceError
from .exponent import ExponentReport, solve_root
from .keyboard import Keyboard, alphas

TIE_TOL = 1e-9
FRONTIER_BUDGET = 2**27
BRUTE_FORCE_GUARD = 10**7
COUNT_T_CAP = 30.0
COUNT_NODE_BUDGET = 5_000_000
UPPER_REL_TOL = 1e-12


class Word(NamedTuple):
    letters: tuple[int, ...]
    log_base: float

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def label(self) -> str:
        return ".".join(map(str, self.letters))


class RankedWord(NamedTuple):
    rank: int
    word: Word

    @property
    def log_base(self) -> float:
        return self.word.log_base


def word_log_base(kb: Keyboard, letters: Sequence[int]) -> float:
    """Log base value of a word given 1-based letters."""
    log_q = kb.log_q
    return math.fsum(log_q[i - 1] for i in letters)


def _tie_order(entries: list) -> list:
    """Reorder runs of near-equal ``(log_base, letters)`` entries alphabetically."""
    out = []
    start = 0
    for i in range(1, len(entries) + 1):
        if i == len(entries) or entries[i - 1][0] - entries[i][0] > TIE_TOL:
            run = entries[start:i]
            if len(run) > 1:
                run.sort(key=lambda e: e[1])
            out.extend(run)
            start = i
    return out


def top_n(kb: Keyboard, N: int, budget: int = FRONTIER_BUDGET) -> list[RankedWord]:
    """The ``N`` largest base values as ranked words, best first."""
    return [RankedWord(r, Word(letters, lb))
            for r, (lb, letters) in enumerate(top_n_raw(kb, N, budget), start=1)]


def top_n_raw(kb: Keyboard, N: int, budget: int = FRONTIER_BUDGET) -> list[tuple[float, tuple]]:
    """``(log_base, letters)`` pairs of the ``N`` largest base values, best first.

    Every word ``w + (i,)`` has two successors: ``w + (i, 1)`` and
    the sibling ``w + (i + 1,)``. Both have base values no larger than the
    word and come after it alphabetically, so a heap over the frontier pops
    words in rank order while holding at most ``N + 1`` entries.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > budget:
        raise ResourceError(f"N = {N} exceeds the enumeration budget of {budget} words", N)
    log_q = [0.0] + kb.log_q.tolist()
    first = log_q[1]
    last = kb.K
    push, pop = heapq.heappush, heapq.heappop
    # entries: (-log_base, letters, log_base of letters[:-1])
    heap = [(-0.0, (), 0.0)]
    popped = []
    while True:
        neg, letters, parent = pop(heap)
        lb = -neg
        if len(popped) >= N and popped[-1][0] - lb > TIE_TOL:
            break
        popped.append((lb, letters))
        push(heap, (-(lb + first), letters + (1,), lb))
        if letters and letters[-1] < last:
            nxt = letters[-1] + 1
            push(heap, (-(parent + log_q[nxt]), letters[:-1] + (nxt,), parent))
        if len(heap) > budget:
            raise ResourceError(
                f"frontier exceeded {budget} entries after {len(popped)} words",
                estimate=N + 1,
            )
    return _tie_order(popped)[:N]


def brute_force_top_n(kb: Keyboard, N: int, max_len: int) -> list[RankedWord]:
    """Exhaustive oracle: rank every word of length <= ``max_len`` and keep ``N``.

    Only words whose log base exceeds ``max_len * log q1`` can rank above a
    word that passes the safety check, and every such word is shorter than
    ``max_len``, so the enumeration drops the rest level by level. Raises
    ``ResourceError`` ("too large") once more than ``BRUTE_FORCE_GUARD``
    words survive and ``ValueError`` ("truncation unsafe") when a longer
    word could still belong in the top ``N``.
    """
    if N < 1 or max_len < 0:
        raise ValueError(f"need N >= 1 and max_len >= 0, got N={N}, max_len={max_len}")
    K = kb.K
    log_q = kb.log_q
    cutoff = max_len * log_q[0]
    levels = [(np.zeros((1, 0), dtype=np.int16), np.zeros(1))]
    total = 1
    for _ in range(max_len):
        letters, lb = levels[-1]
        ext_lb = (lb[:, None] + log_q[None, :]).ravel()
        keep = ext_lb > cutoff
        n_keep = int(keep.sum())
        if n_keep == 0:
            break
        total += n_keep
        if total > BRUTE_FORCE_GUARD:
            raise ResourceError(f"too large: more than {total} words of length <= {max_len}",
                                estimate=total)
        ext = np.concatenate([np.repeat(letters, K, axis=0),
                              np.tile(np.arange(1, K + 1, dtype=np.int16), len(lb))[:, None]],
                             axis=1)
        levels.append((ext[keep], ext_lb[keep]))

    width = len(levels) - 1
    padded = np.zeros((total, width), dtype=np.int16)
    row = 0
    for j, (letters, _) in enumerate(levels):
        padded[row:row + len(letters), :j] = letters
        row += len(letters)
    lb = np.concatenate([lv[1] for lv in levels])
    # alphabetical key: letters 1..K, right-padded with 0 so a prefix sorts first
    alpha_keys = tuple(padded[:, c] for c in range(width - 1, -1, -1))

    order = np.lexsort(alpha_keys + (-lb,))
    srt = lb[order]
    cluster = np.empty(total, dtype=np.int64)
    cluster[order] = np.concatenate(([0], np.cumsum(srt[:-1] - srt[1:] > TIE_TOL)))
    order = np.lexsort(alpha_keys + (cluster,))

    if N > total or lb[order[N - 1]] <= cutoff + TIE_TOL:
        raise ValueError(f"truncation unsafe: rank {N} is not provably within length {max_len}")
    out = []
    for r, k in enumerate(order[:N].tolist(), start=1):
        letters = tuple(int(x) for x in padded[k] if x)
        out.append(RankedWord(r, Word(letters, float(lb[k]))))
    return out


@dataclass(frozen=True)
class CountReport:
    t: float
    N_t: int
    N_cum_t: int


class CountingTable:
    """Exact counts of words by radix-q1 log base value up to ``t_max``.

    Words are grouped by letter multiset: a multiset with counts ``c``
    has alpha-sum ``sum(c * alpha)`` and ``n! / prod(c!)`` orderings.
    Multisets are enumerated depth-first over letters, abandoning a branch
    once its alpha-sum passes ``t_max``.
    """

    def __init__(self, kb: Keyboard, t_max: float, cap: float = COUNT_T_CAP,
                 node_budget: int = COUNT_NODE_BUDGET, report: ExponentReport | None = None):
        if t_max < 0:
            raise ValueError(f"t must be >= 0, got {t_max}")
        if t_max > cap:
            R0 = (report or solve_root(kb)).R0
            raise ResourceError(
                f"t = {t_max} exceeds the counting cap {cap} (about {R0 ** t_max:.3g} words)",
                estimate=R0**t_max,
            )
        self.kb = kb
        self.t_max = t_max
        alpha = alphas(kb).tolist()
        K = len(alpha)
        limit = t_max + TIE_TOL
        sums: list[float] = []
        ways: list[int] = []
        nodes = 0
        # stack entries: (next letter, alpha-sum, letters so far, orderings)
        stack = [(0, 0.0, 0, 1)]
        while stack:
            i, acc, n, w = stack.pop()
            nodes += 1
            if nodes > node_budget:
                R0 = (report or solve_root(kb)).R0
                raise ResourceError(
                    f"counting to t = {t_max} needs more than {node_budget} nodes",
                    estimate=R0**t_max,
                )
            if i == K or acc + alpha[i] > limit:
                sums.append(acc)
                ways.append(w)
                continue
            c = 0
            a = alpha[i]
            while acc + c * a <= limit:
                stack.append((i + 1, acc + c * a, n + c, w * math.comb(n + c, c)))
                c += 1
        order = sorted(range(len(sums)), key=sums.__getitem__)
        self.sums = [sums[k] for k in order]
        self.cumulative = [0]
        for k in order:
            self.cumulative.append(self.cumulative[-1] + ways[k])

    def N_cum(self, t: float) -> int:
        """Number of words with radix-q1 log base value <= t."""
        if t < 0:
            return 0
        if t > self.t_max:
            raise ValueError(f"t = {t} beyond table limit {self.t_max}")
        return self.cumulative[bisect_right(self.sums, t + TIE_TOL)]

    def N(self, t: float) -> int:
        """Number of words with radix-q1 log base value in (t - 1, t]."""
        return self.N_cum(t) - self.N_cum(t - 1.0)

    def report(self, t: float) -> CountReport:
        return CountReport(t, self.N(t), self.N_cum(t))


def count_N(kb: Keyboard, t: float, cap: float = COUNT_T_CAP) -> CountReport:
    return CountingTable(kb, t, cap=cap).report(t)


@dataclass(frozen=True)
class CsiszarRow:
    t: float
    N: int
    Ncum: int
    lower: float
    upper: float
    ok: bool


def verify_csiszar_bounds(kb: Keyboard, t_values: Iterable[float],
                          report: ExponentReport | None = None,
                          cap: float = COUNT_T_CAP) -> list[CsiszarRow]:
    """Check ``b * R0**t < N(t) <= R0**t`` at each ``t``.

    The upper bound is attained exactly for equal probabilities at integer
    ``t``; it is compared with a relative slack of ``UPPER_REL_TOL`` to
    absorb rounding in ``R0``.
    """
    t_values = [float(t) for t in t_values]
    rep = report or solve_root(kb)
    table = CountingTable(kb, max(t_values), cap=cap, report=rep)
    rows = []
    for t in t_values:
        n = table.N(t)
        upper = rep.R0**t
        lower = rep.b * upper
        ok = lower < n and n <= upper * (1.0 + UPPER_REL_TOL)
        rows.append(CsiszarRow(t, n, table.N_cum(t), lower, upper, ok))
    return rows


@dataclass(frozen=True)
class RankBoundsReport:
    """Per-rank check of ``C1 * B**(-1/beta) < r < C2 * B**(-1/beta)``."""

    rank: np.ndarray
    log_base: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    ok: np.ndarray

    @property
    def violations(self) -> int:
        return int((~self.ok[self.rank >= 2]).sum())

    def __len__(self):
        return len(self.rank)


def verify_rank_bounds(kb: Keyboard, ranked: Sequence[RankedWord],
                       report: ExponentReport | None = None) -> RankBoundsReport:
    rep = report or solve_root(kb)
    r = np.fromiter((rw.rank for rw in ranked), dtype=np.int64, count=len(ranked))
    lb = np.fromiter((rw.word.log_base for rw in ranked), dtype=float, count=len(ranked))
    scale = -lb / rep.beta
    log_lower = math.log(rep.C1) + scale
    log_upper = math.log(rep.C2) + scale
    log_r = np.log(r)
    ok = (log_lower < log_r) & (log_r < log_upper)
    return RankBoundsReport(r, lb, np.exp(log_lower), np.exp(log_upper), ok)
