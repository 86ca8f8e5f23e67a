"""Power-law exponent of the rank/base-value relation and its bound constants.

The exponent ``beta`` solves ``sum(q_i ** (1/beta)) = 1``. Equivalently
``R0 = q_1 ** (-1/beta)`` is the root above 1 of ``sum(R0 ** -alpha_i) = 1``,
and the counting function of word base values grows like ``R0 ** t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .keyboard import Keyboard, alphas

BISECT_WIDTH = 1e-15
NEWTON_STEPS = 4


@dataclass(frozen=True)
class ExponentReport:
    R0: float
    beta: float
    u: float
    alphas: np.ndarray
    b: float
    C1: float
    C2: float
    residual: float

    @property
    def minus_beta(self) -> float:
        return -self.beta

    def to_dict(self) -> dict:
        return {
            "R0": self.R0,
            "beta": self.beta,
            "b": self.b,
            "C1": self.C1,
            "C2": self.C2,
            "residual": self.residual,
        }


def _root_function(log_q: np.ndarray):
    def g(u):
        return float(np.exp(u * log_q).sum()) - 1.0

    def dg(u):
        return float((log_q * np.exp(u * log_q)).sum())

    return g, dg


def solve_u(log_q: np.ndarray) -> tuple[float, float]:
    """Root of ``sum(exp(u * log_q)) - 1`` on (0, 1) and its residual.

    The function is strictly decreasing from ``K - 1`` at 0 to ``-s`` at 1,
    so plain bisection always brackets; a few Newton steps polish the
    midpoint and are only kept while they reduce the residual.
    """
    g, dg = _root_function(log_q)
    lo, hi = 0.0, 1.0
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    gu = g(u)
    for _ in range(NEWTON_STEPS):
        if gu == 0.0:
            break
        cand = u - gu / dg(u)
        gc = g(cand)
        if not 0.0 < cand < 1.0 or abs(gc) >= abs(gu):
            break
        u, gu = cand, gc
    return u, abs(gu)


def compute_b(R0: float, alpha: np.ndarray) -> float:
    """Lower-bound constant of the counting function.

    The sequence ``b_1 = 1/R0``, ``b_{i+1} = b_i * sum(R0 ** -a_j for a_j <= i)``
    stops changing once ``i >= max(alpha)``, so the limit is a finite product.
    """
    alpha = np.asarray(alpha, dtype=float)
    if R0 <= 1.0:
        raise ValueError(f"R0 must exceed 1, got {R0}")
    terms = R0 ** -alpha
    b = 1.0 / R0
    for i in range(1, math.ceil(alpha[-1])):
        b *= float(terms[alpha <= i].sum())
    return b


def solve_root(kb: Keyboard) -> ExponentReport:
    log_q = kb.log_q
    u, residual = solve_u(log_q)
    beta = 1.0 / u
    R0 = math.exp(-u * log_q[0])
    alpha = alphas(kb)
    b = compute_b(R0, alpha)
    return ExponentReport(
        R0=R0,
        beta=beta,
        u=u,
        alphas=alpha,
        b=b,
        C1=b / R0,
        C2=R0 / (R0 - 1.0),
        residual=residual,
    )


def miller_exponent(K: int, s: float) -> float:
    """Closed-form exponent ``-beta`` for equal letter probabilities."""
    if K < 2 or not 0.0 < s < 1.0:
        raise ValueError("need K >= 2 and 0 < s < 1")
    return math.log1p(-s) / math.log(K) - 1.0


def characteristic_residual(R0: float, alpha) -> float:
    """Defect of ``sum(R0 ** -alpha) = 1``."""
    return math.fsum((R0 ** -np.asarray(alpha, dtype=float)).tolist()) - 1.0
