"""Discrete Brownian-snake reference laws.

The driving excursion is the contour of a uniform plane tree with ``N``
edges. Its steps are +-1 with variance 1, so ``C(2Nt) / sqrt(2N)`` tends to
the normalised excursion ``e`` with no extra constant. Each edge carries an
independent standard Gaussian increment, so the label at time ``t`` has
conditional variance ``C(2Nt)`` and ``V(2Nt) / (2N)^{1/4}`` has conditional
variance ``e(t)``, as the snake head should.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels as K
from .errors import InvalidInput
from .rng import STREAM_SNAKE, as_rng, make_rng

__all__ = [
    "SnakePath",
    "sample_snake",
    "vervaat_condition",
    "SnakeSamples",
    "snake_samples",
    "functional_table",
    "QUANTILES",
    "KINDS",
]

QUANTILES = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)
KINDS = ("range", "sup", "occupation")
BLOCK = 1000


@dataclass(frozen=True)
class SnakePath:
    """``(e, r)`` on the grid ``i / (2N)``, ``i = 0..2N``."""

    N: int
    e: np.ndarray
    r: np.ndarray
    conditioned: bool = False

    @property
    def times(self) -> np.ndarray:
        return np.arange(2 * self.N + 1) / (2 * self.N)

    def at(self, s) -> tuple:
        """Linear interpolation of ``(e, r)`` at times in [0, 1]."""
        t = self.times
        return np.interp(s, t, self.e), np.interp(s, t, self.r)

    def range(self) -> float:
        return float(self.r.max() - self.r.min())

    def occupation_mean(self) -> float:
        """``int_0^1 (r - inf r) dt`` for the piecewise linear path."""
        r = self.r - self.r.min()
        return float(0.5 * (r[:-1] + r[1:]).mean())


def sample_snake(N: int, rng=None) -> SnakePath:
    if N < 1:
        raise InvalidInput("N must be >= 1")
    C, V = K.snake_path(as_rng(rng), int(N))
    L = 2 * N
    return SnakePath(int(N), C / math.sqrt(L), V / L**0.25)


def vervaat_condition(path: SnakePath) -> SnakePath:
    """Re-root at the (earliest) argmin of ``r``.

    ``ebar(s) = e(s*) + e({s*+s}) - 2 inf e`` over the arc between ``s*``
    and ``{s*+s}``, and ``rbar(s) = r({s*+s}) - r(s*)``; on the grid this is
    an index rotation.
    """
    if path.conditioned:
        raise InvalidInput("path is already conditioned")
    L = 2 * path.N
    i0 = int(np.argmin(path.r[:L]))
    j = (i0 + np.arange(L + 1)) % L
    e, r = path.e, path.r
    # inf of e between i0 and j along [min, max] of the two indices
    fwd = np.minimum.accumulate(e[i0:L + 1])  # inf over [i0, i0 + t]
    bwd = np.minimum.accumulate(e[i0::-1])  # inf over [i0 - t, i0]
    lo = np.where(j >= i0, fwd[np.clip(j - i0, 0, L - i0)], bwd[np.clip(i0 - j, 0, i0)])
    ebar = e[i0] + e[j] - 2.0 * lo
    rbar = r[j] - r[i0]
    ebar[0] = ebar[-1] = 0.0
    rbar[-1] = 0.0
    return SnakePath(path.N, ebar, rbar, conditioned=True)


@dataclass
class SnakeSamples:
    """Raw per-path functionals (already rescaled by ``(2N)^{-1/4}``)."""

    N: int
    paths: int
    seed: int
    sup: np.ndarray
    inf: np.ndarray
    occupation: np.ndarray
    r_mid: np.ndarray  # r at t = 1/2
    e_mid: np.ndarray  # e at t = 1/2

    def values(self, kind: str) -> np.ndarray:
        if kind == "range":
            return self.sup - self.inf
        if kind == "sup":
            return self.sup
        if kind == "occupation":
            return self.occupation
        raise InvalidInput(f"unknown functional {kind!r}; choose from {KINDS}")


def _block(seed, N, count, b):
    gen = make_rng(seed, STREAM_SNAKE, b)
    return K.snake_functionals(gen, N, count, N)


def _cache_path(cache_dir, N, paths, seed) -> Optional[Path]:
    if cache_dir is None:
        return None
    return Path(cache_dir) / f"snake_v1_N{N}_paths{paths}_seed{seed}.npz"


def default_cache_dir() -> Path:
    return Path(os.environ.get("BDGMAPS_CACHE", Path.home() / ".cache" / "bdgmaps"))


def snake_samples(N: int, paths: int, seed: int = 0, threads: int = 1, cache_dir="default") -> SnakeSamples:
    """Simulate ``paths`` snake paths in blocks of 1000 (one RNG stream per block).

    Output depends only on ``(N, paths, seed)``, not on ``threads``. Results
    are cached on disk (``$BDGMAPS_CACHE``, default ``~/.cache/bdgmaps``);
    pass ``cache_dir=None`` to disable.
    """
    if N < 1 or paths < 1:
        raise InvalidInput("N and paths must be positive")
    if cache_dir == "default":
        cache_dir = default_cache_dir()
    cp = _cache_path(cache_dir, N, paths, seed)
    if cp is not None and cp.exists():
        z = np.load(cp)
        return SnakeSamples(N, paths, seed, z["sup"], z["inf"], z["occ"], z["r_mid"], z["e_mid"])
    nb = -(-paths // BLOCK)
    sizes = [min(BLOCK, paths - b * BLOCK) for b in range(nb)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda b: _block(seed, N, sizes[b], b), range(nb)))
    else:
        parts = [_block(seed, N, sizes[b], b) for b in range(nb)]
    raw = np.concatenate(parts)
    s = (2 * N) ** 0.25
    out = SnakeSamples(N, paths, seed, raw[:, 0] / s, raw[:, 1] / s, raw[:, 2] / s, raw[:, 3] / s,
                       raw[:, 4] / math.sqrt(2 * N))
    if cp is not None:
        cp.parent.mkdir(parents=True, exist_ok=True)
        tmp = cp.with_suffix(".tmp.npz")
        np.savez(tmp, sup=out.sup, inf=out.inf, occ=out.occupation, r_mid=out.r_mid, e_mid=out.e_mid)
        os.replace(tmp, cp)
    return out


def batch_quantile_se(x: np.ndarray, q: float, batches: int = 20) -> float:
    """Standard error of an empirical quantile by batch means."""
    x = np.asarray(x)
    if x.size < 2 * batches:
        return math.nan
    parts = np.array_split(x, batches)
    qs = np.array([np.quantile(p, q) for p in parts])
    return float(qs.std(ddof=1) / math.sqrt(batches))


def functional_table(kind: str, N: int, paths: int, rng=0, threads: int = 1, cache_dir="default",
                     samples: Optional[SnakeSamples] = None) -> list[dict]:
    """Quantiles (and the mean) of a snake functional with standard errors.

    ``kind``: ``range`` (sup r - inf r, the radius limit), ``sup`` (sup r,
    the typical-distance limit) or ``occupation`` (``int (r - inf r)``, the
    first moment of the profile limit).
    """
    if kind not in KINDS:
        raise InvalidInput(f"unknown functional {kind!r}; choose from {KINDS}")
    seed = int(rng) if not isinstance(rng, np.random.Generator) else int(rng.integers(2**63))
    t0 = time.perf_counter()
    s = samples or snake_samples(N, paths, seed, threads=threads, cache_dir=cache_dir)
    x = s.values(kind)
    wall = time.perf_counter() - t0
    rows = []
    for q in QUANTILES:
        rows.append({"functional": kind, "N": N, "paths": paths, "quantile": q, "value": float(np.quantile(x, q)),
                     "stderr": batch_quantile_se(x, q), "seed": seed, "wall_time": wall})
    rows.append({"functional": kind, "N": N, "paths": paths, "quantile": "mean", "value": float(x.mean()),
                 "stderr": float(x.std(ddof=1) / math.sqrt(x.size)), "seed": seed, "wall_time": wall})
    return rows


def write_table_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
