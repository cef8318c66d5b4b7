"""Small statistical helpers on top of scipy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .rng import as_rng

__all__ = ["KSResult", "ks_two_sample", "chi_square_gof", "pooled_z", "mean_se"]


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float  # permutation p-value (nan if permutations == 0)
    n1: int
    n2: int


def ks_two_sample(x, y, permutations: int = 0, rng=None) -> KSResult:
    """Two-sample KS distance with an optional Monte Carlo permutation p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = float(stats.ks_2samp(x, y).statistic)
    if permutations <= 0:
        return KSResult(d, math.nan, x.size, y.size)
    gen = as_rng(rng)
    pooled = np.concatenate([x, y])
    hits = 0
    for _ in range(permutations):
        perm = gen.permutation(pooled)
        if stats.ks_2samp(perm[: x.size], perm[x.size :]).statistic >= d - 1e-12:
            hits += 1
    return KSResult(d, (hits + 1) / (permutations + 1), x.size, y.size)


def chi_square_gof(counts, probs) -> tuple[float, float]:
    """Pearson chi-square of observed counts against exact cell probabilities."""
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    res = stats.chisquare(counts, probs / probs.sum() * counts.sum())
    return float(res.statistic), float(res.pvalue)


def mean_se(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def pooled_z(a: float, se_a: float, b: float, se_b: float) -> float:
    """``(a - b) / sqrt(se_a^2 + se_b^2)``."""
    return (a - b) / math.hypot(se_a, se_b)
