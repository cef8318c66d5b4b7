"""Monte Carlo experiments on uniform rooted 2kappa-angulations.

Samples of ``Ubar^n_kappa`` are produced as ``Pbar^n`` mobiles (root label
1) pushed through the rooted BDG map. Work is cut into blocks of
``BLOCK`` samples, each with its own RNG streams, so results depend on
``(seed, kappa, n, samples)`` only and not on the number of threads.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .bdg import to_rooted_map
from .errors import BudgetExhausted, InvariantViolation
from .mobiles import Mobile
from .rng import STREAM_EXPERIMENT, STREAM_SAMPLE, make_rng
from .sampling import OffspringTables, estimate_constants
from .snake import QUANTILES, batch_quantile_se, default_cache_dir, snake_samples
from .stats import ks_two_sample, mean_se
from .trees import PlaneTree
from .weights import kappa_params

__all__ = [
    "MapSampleSet",
    "collect_samples",
    "exp_radius",
    "exp_profile",
    "exp_typical_distance",
    "exp_separating",
    "exp_constants",
    "separation_windows",
]

BLOCK = 50
PROFILE_BIN = 0.1
PROFILE_MAX = 8.0
MAX_ATTEMPTS = 10**8


def separation_windows(n: int, epsilon: float) -> dict[str, tuple[float, float]]:
    """``[n^a, 2 n^a]`` for the proven exponent ``a = 1/2 - eps`` and the conjectured ``2/3 - eps``."""
    a, b = 0.5 - epsilon, 2.0 / 3.0 - epsilon
    return {"half": (n**a, 2 * n**a), "two_thirds": (n**b, 2 * n**b)}


@dataclass
class MapSampleSet:
    kappa: int
    n: int
    samples: int
    seed: int
    epsilon: float
    radius: np.ndarray  # R_M from the root vertex
    mean_dist: np.ndarray  # mean of d(o, a) over vertices a
    typical: np.ndarray  # d(o, a) for one uniform vertex a
    profile: np.ndarray  # sum over samples of the rescaled profile on PROFILE_BIN bins
    sep_map: np.ndarray  # bool, per window: a cut vertex with #S in the window
    sep_mobile: np.ndarray  # bool, per window: a mobile-side witness with #T^{[v],0} in the window
    witnesses: int
    mismatches: int  # witnesses with #S^{v, root} != #T^{[v],0}
    undercounts: int  # witnesses with #S^{v, root} < #T^{[v],0}; the proven direction says 0
    wall_time: float

    def rescaled(self, x) -> np.ndarray:
        return np.asarray(x) / self.n**0.25


def _one_block(kappa, n, count, seed, b, epsilon, tab, logw, mmin, checks):
    gen = make_rng(seed, STREAM_SAMPLE, b)
    aux = make_rng(seed, STREAM_EXPERIMENT, b)
    nbins = int(PROFILE_MAX / PROFILE_BIN) + 1
    wins = separation_windows(n, epsilon)
    lohi = np.array(list(wins.values()))
    out = {
        "radius": np.empty(count, np.int64),
        "mean_dist": np.empty(count),
        "typical": np.empty(count, np.int64),
        "profile": np.zeros(nbins),
        "sep_map": np.zeros((count, len(wins)), bool),
        "sep_mobile": np.zeros((count, len(wins)), bool),
        "witnesses": 0,
        "mismatches": 0,
        "undercounts": 0,
    }
    for i in range(count):
        ch, lab, att = K.positive_mobile(gen, n, tab.prob, tab.alias, logw, mmin, 1, MAX_ATTEMPTS)
        if att < 0:
            raise BudgetExhausted(f"no well-labelled mobile after {MAX_ATTEMPTS} attempts (n={n})")
        tree = PlaneTree(ch, validate=False)
        mob = Mobile(tree, lab, validate=False)
        m = to_rooted_map(mob, validate=False)
        d = m.bfs_distances(0)
        t0 = np.flatnonzero(~tree.type1)
        if checks:
            if not np.array_equal(d[1:], lab[t0]):
                raise InvariantViolation("distance from the root vertex differs from the label")
            if not m.euler_check(kappa, n):
                raise InvariantViolation("face/vertex/edge counts of a 2kappa-angulation violated")
            if np.any(np.abs(d[m.vertex] - d[m.vertex[m.alpha]]) != 1):
                raise InvariantViolation("an edge joins two vertices at the same distance (not bipartite)")
        out["radius"][i] = d.max()
        out["mean_dist"][i] = d.mean()
        out["typical"][i] = d[aux.integers(0, d.size)]
        hist = np.bincount(np.minimum((d / n**0.25 / PROFILE_BIN).astype(np.int64), nbins - 1), minlength=nbins)
        out["profile"] += hist / d.size
        # map side: all values of #S^{v, s} over cut vertices v
        is_cut, ptr, sizes = m._cuts
        vals = m.n_vertices - sizes
        for w, (lo, hi) in enumerate(lohi):
            out["sep_map"][i, w] = bool(np.any((vals >= lo) & (vals <= hi)))
        # mobile side: type-0 v whose strict type-0 descendants all have larger labels
        depth = tree.depth
        submin = K.subtree_min_strict(tree.children, depth, lab)
        is0 = ~tree.type1
        cs = np.r_[0, np.cumsum(is0)]
        size = tree.subtree_size
        idx = np.arange(len(tree))
        cnt0 = cs[idx + size] - cs[idx]
        wit = is0 & (cnt0 >= 2) & (submin > lab)
        wv = np.flatnonzero(wit)
        for w, (lo, hi) in enumerate(lohi):
            out["sep_mobile"][i, w] = bool(np.any((cnt0[wv] >= lo) & (cnt0[wv] <= hi)))
        if wv.size:
            vid = np.full(len(tree), -1, np.int64)
            vid[t0] = np.arange(1, t0.size + 1)
            sep = m.separated_from_vertex0()
            out["witnesses"] += int(wv.size)
            out["mismatches"] += int(np.count_nonzero(sep[vid[wv]] != cnt0[wv]))
            out["undercounts"] += int(np.count_nonzero(sep[vid[wv]] < cnt0[wv]))
    return out


def _cache_file(cache_dir, kappa, n, samples, seed, epsilon) -> Optional[Path]:
    if cache_dir is None:
        return None
    return Path(cache_dir) / f"maps_v2_k{kappa}_n{n}_s{samples}_seed{seed}_eps{epsilon:g}.npz"


def collect_samples(kappa: int, n: int, samples: int, seed: int = 0, threads: int = 1, epsilon: float = 0.2,
                    checks: bool = True, cache_dir="default") -> MapSampleSet:
    """Draw ``samples`` maps from ``Ubar^n_kappa`` and record all map observables.

    With ``checks`` every sample is verified exactly (face degrees, vertex
    and edge counts, bipartiteness, ``d(root, v) = U_v``); a failure raises
    :class:`InvariantViolation`.

    Cached on disk like the snake tables (``cache_dir=None`` disables).
    """
    if cache_dir == "default":
        cache_dir = default_cache_dir()
    cf = _cache_file(cache_dir, kappa, n, samples, seed, epsilon)
    if cf is not None and cf.exists():
        z = np.load(cf)
        return MapSampleSet(kappa, n, samples, seed, epsilon, z["radius"], z["mean_dist"], z["typical"],
                            z["profile"], z["sep_map"], z["sep_mobile"], int(z["witnesses"]),
                            int(z["mismatches"]), int(z["undercounts"]), float(z["wall_time"]))
    t0 = time.perf_counter()
    params = kappa_params(kappa)
    tab = OffspringTables.from_params(params)
    logw, mmin = tab.size_weights(n)
    nb = -(-samples // BLOCK)
    sizes = [min(BLOCK, samples - b * BLOCK) for b in range(nb)]

    def job(b):
        return _one_block(kappa, n, sizes[b], seed, b, epsilon, tab, logw, mmin, checks)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(job, range(nb)))
    else:
        parts = [job(b) for b in range(nb)]
    cat = {k: np.concatenate([p[k] for p in parts]) for k in ("radius", "mean_dist", "typical", "sep_map", "sep_mobile")}
    res = MapSampleSet(
        kappa, n, samples, seed, epsilon, cat["radius"], cat["mean_dist"], cat["typical"],
        sum(p["profile"] for p in parts), cat["sep_map"], cat["sep_mobile"],
        sum(p["witnesses"] for p in parts), sum(p["mismatches"] for p in parts),
        sum(p["undercounts"] for p in parts), time.perf_counter() - t0,
    )
    if cf is not None:
        cf.parent.mkdir(parents=True, exist_ok=True)
        tmp = cf.with_suffix(".tmp.npz")
        np.savez(tmp, radius=res.radius, mean_dist=res.mean_dist, typical=res.typical, profile=res.profile,
                 sep_map=res.sep_map, sep_mobile=res.sep_mobile, witnesses=res.witnesses,
                 mismatches=res.mismatches, undercounts=res.undercounts, wall_time=res.wall_time)
        os.replace(tmp, cf)
    return res


def _prov(s: MapSampleSet) -> dict:
    return {"seed": s.seed, "n": s.n, "samples": s.samples, "wall_time": round(s.wall_time, 3), "kappa": s.kappa}


def _quantile_rows(s, name, x_map, x_ref, scale, snake_N, snake_paths):
    rows = []
    for q in QUANTILES:
        rows.append(_prov(s) | {
            "statistic": name, "quantile": q,
            "map_value": float(np.quantile(x_map, q)), "map_stderr": batch_quantile_se(x_map, q),
            "snake_value": scale * float(np.quantile(x_ref, q)), "snake_stderr": scale * batch_quantile_se(x_ref, q),
            "snake_N": snake_N, "snake_paths": snake_paths,
        })
    mm, ms = mean_se(x_map)
    rm, rs = mean_se(x_ref)
    rows.append(_prov(s) | {"statistic": name, "quantile": "mean", "map_value": mm, "map_stderr": ms,
                            "snake_value": scale * rm, "snake_stderr": scale * rs,
                            "snake_N": snake_N, "snake_paths": snake_paths})
    ks = ks_two_sample(x_map, scale * np.asarray(x_ref))
    rows.append(_prov(s) | {"statistic": name, "quantile": "ks", "map_value": ks.statistic, "map_stderr": math.nan,
                            "snake_value": math.nan, "snake_stderr": math.nan,
                            "snake_N": snake_N, "snake_paths": snake_paths})
    return rows


def exp_radius(kappa: int, n_list: Sequence[int], samples: int, seed: int = 0, threads: int = 1,
               snake_N: int = 4096, snake_paths: int = 100_000, cache_dir="default") -> list[dict]:
    """Quantiles of ``n^{-1/4} R_M`` beside ``D`` times the snake range quantiles."""
    D = kappa_params(kappa).scale_D
    ref = snake_samples(snake_N, snake_paths, seed, threads=threads, cache_dir=cache_dir).values("range")
    rows = []
    for n in n_list:
        s = collect_samples(kappa, n, samples, seed, threads, cache_dir=cache_dir)
        rows += _quantile_rows(s, "radius", s.rescaled(s.radius), ref, D, snake_N, snake_paths)
    return rows


def exp_profile(kappa: int, n: int, samples: int, seed: int = 0, threads: int = 1,
                snake_N: int = 4096, snake_paths: int = 100_000, cache_dir="default") -> list[dict]:
    """Mean rescaled profile (histogram) and its first moment against the snake occupation mean."""
    D = kappa_params(kappa).scale_D
    ref = snake_samples(snake_N, snake_paths, seed, threads=threads, cache_dir=cache_dir).values("occupation")
    s = collect_samples(kappa, n, samples, seed, threads, cache_dir=cache_dir)
    mm, ms = mean_se(s.rescaled(s.mean_dist))
    rm, rs = mean_se(ref)
    rows = [_prov(s) | {"statistic": "profile_mean", "bin_left": math.nan, "map_value": mm, "map_stderr": ms,
                        "snake_value": D * rm, "snake_stderr": D * rs}]
    prof = s.profile / s.samples
    for i, p in enumerate(prof):
        rows.append(_prov(s) | {"statistic": "profile_mass", "bin_left": round(i * PROFILE_BIN, 10),
                                "map_value": float(p), "map_stderr": math.nan,
                                "snake_value": math.nan, "snake_stderr": math.nan})
    return rows


def exp_typical_distance(kappa: int, n: int, samples: int, seed: int = 0, threads: int = 1,
                         snake_N: int = 4096, snake_paths: int = 100_000, cache_dir="default") -> list[dict]:
    """Quantiles of ``n^{-1/4} d(o, a)``, ``a`` uniform, beside ``D`` times the snake sup quantiles."""
    D = kappa_params(kappa).scale_D
    ref = snake_samples(snake_N, snake_paths, seed, threads=threads, cache_dir=cache_dir).values("sup")
    s = collect_samples(kappa, n, samples, seed, threads, cache_dir=cache_dir)
    return _quantile_rows(s, "typical_distance", s.rescaled(s.typical), ref, D, snake_N, snake_paths)


def exp_separating(kappa: int, n_list: Sequence[int], epsilon: float, samples: int, seed: int = 0,
                   threads: int = 1, cache_dir="default") -> list[dict]:
    """Fraction of maps with a separating vertex cutting off a set of size in ``[n^a, 2n^a]``."""
    rows = []
    for n in n_list:
        s = collect_samples(kappa, n, samples, seed, threads, epsilon=epsilon, cache_dir=cache_dir)
        for w, (name, (lo, hi)) in enumerate(separation_windows(n, epsilon).items()):
            fm, sm = mean_se(s.sep_map[:, w])
            fo, so = mean_se(s.sep_mobile[:, w])
            rows.append(_prov(s) | {"epsilon": epsilon, "window": name, "lo": lo, "hi": hi,
                                    "map_fraction": fm, "map_stderr": sm,
                                    "mobile_fraction": fo, "mobile_stderr": so,
                                    "witnesses": s.witnesses, "mismatches": s.mismatches,
                                    "undercounts": s.undercounts})
    return rows


def exp_constants(kappa: int, n_list: Sequence[int], samples: int, seed: int = 0,
                  pos_samples: Optional[int] = None) -> list[dict]:
    """Table of ``n^{3/2} P(#T^1 = n)``, ``n P^n(U > 0)`` and the type-0 leaf fraction."""
    t0 = time.perf_counter()
    gen = make_rng(seed, STREAM_EXPERIMENT, 10**6 + kappa)
    rows = estimate_constants(kappa_params(kappa), n_list, samples, gen, pos_trials=pos_samples)
    wall = time.perf_counter() - t0
    out = []
    for r in rows:
        d = dict(r.__dict__)
        d["flags"] = ";".join(d["flags"])
        out.append({"seed": seed, "n": r.n, "samples": samples, "wall_time": round(wall, 3), "kappa": kappa} | d)
    return out
