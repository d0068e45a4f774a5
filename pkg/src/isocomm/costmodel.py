"""Linear latency/bandwidth cost model for combined vs direct schedules.

Works with any real number type; pass ``fractions.Fraction`` for exact
comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CostParams:
    alpha: float
    beta: float
    m: float = 1

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.m < 0:
            raise ValueError("block size must be >= 0")


def estimate(p: CostParams, rounds: int, volume_blocks: int):
    """``rounds * alpha + beta * volume_blocks * m``."""
    return rounds * p.alpha + p.beta * volume_blocks * p.m


def crossover_blocksize(alpha, beta, s: int, D: int, V: int):
    """Block size below which D rounds / V blocks beats s rounds / s blocks.

    The combined schedule is predicted faster exactly when ``m < m*``.
    Returns ``math.inf`` when it is faster for every block size and ``0``
    when it never is.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if D > V:
        # a real neighborhood always has D <= V
        raise ValueError(f"D={D} exceeds V={V}")
    # faster  <=>  alpha * (D - s) + beta * m * (V - s) < 0
    if V > s:
        if D >= s:
            return 0
        return alpha * (s - D) / (beta * (V - s))
    # V <= s; since D <= V, D < s unless D = V = s
    if D < s and (alpha > 0 or V < s):
        return math.inf
    return 0
