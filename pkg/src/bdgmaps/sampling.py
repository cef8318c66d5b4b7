"""Two-type spatial Galton-Watson trees and their conditioned versions.

Laws (``mu = (mu0, mu1)``; ``mu0`` geometric, ``mu1`` tabulated):

* ``P_mu``: the unconditioned two-type tree;
* ``P^n``: conditioned on ``#T^1 = n``;
* ``Pbar^n``: additionally conditioned on all type-0 labels outside the
  root being positive (root label ``x``);
* ``Q_mu``: conditioned on the root having exactly one child.

Size conditioning is done either by plain rejection on ``P_mu`` or by the
exact sampler described in :func:`exact_size_tree`; positivity always by
joint rejection of (tree, labels).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from scipy.special import gammaln

from . import _kernels as K
from .errors import AttemptAbandoned, BudgetExhausted, InvalidInput
from .mobiles import Mobile
from .rng import as_rng
from .trees import PlaneTree
from .weights import BoltzmannParams, derive_offspring

__all__ = [
    "SamplerConfig",
    "SampleStats",
    "OffspringTables",
    "alias_table",
    "sample_gw",
    "attach_labels",
    "exact_size_tree",
    "sample_conditioned",
    "estimate_constants",
]

Condition = Literal["none", "size", "size_and_positive", "root_one_child"]


def alias_table(pmf) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias tables ``(prob, alias)`` for a finite pmf."""
    p = np.asarray(pmf, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or not np.isclose(p.sum(), 1.0, atol=1e-9):
        raise InvalidInput("alias_table needs a nonnegative pmf summing to 1")
    n = p.size
    scaled = p * n / p.sum()
    prob = np.ones(n)
    alias = np.arange(n, dtype=np.int64)
    small = [i for i in range(n) if scaled[i] < 1.0]
    large = [i for i in range(n) if scaled[i] >= 1.0]
    while small and large:
        s, g = small.pop(), large.pop()
        prob[s] = scaled[s]
        alias[s] = g
        scaled[g] -= 1.0 - scaled[s]
        (small if scaled[g] < 1.0 else large).append(g)
    return prob, alias


@dataclass(frozen=True)
class OffspringTables:
    """Everything the compiled samplers need for one offspring pair."""

    p: float  # geometric parameter of mu0
    mu1: np.ndarray
    prob: np.ndarray
    alias: np.ndarray

    @classmethod
    def from_params(cls, params: BoltzmannParams) -> "OffspringTables":
        p, mu1 = derive_offspring(params)
        prob, alias = alias_table(mu1)
        return cls(float(p), mu1, prob, alias)

    @classmethod
    def from_laws(cls, mu0_param: float, mu1_pmf) -> "OffspringTables":
        if not 0.0 <= mu0_param < 1.0:
            raise InvalidInput(f"geometric parameter must lie in [0, 1), got {mu0_param}")
        mu1 = np.asarray(mu1_pmf, dtype=float)
        prob, alias = alias_table(mu1)
        return cls(float(mu0_param), mu1, prob, alias)

    def size_weights(self, n: int) -> tuple[np.ndarray, int]:
        """Log acceptance weights over the possible type-0 counts ``m``.

        Given ``n`` type-1 vertices with offspring ``K_1..K_n`` (so
        ``m = 1 + sum K``), a tree is produced by ``m`` rotations of a
        sequence of packages, and the composition of ``n`` into ``m`` parts
        has ``binom(n+m-1, n)`` choices; hence ``w(m) ~ binom(n+m-1, n) (1-p)^m / m``.
        """
        supp = np.flatnonzero(self.mu1 > 0)
        mmin = 1 + n * int(supp.min())
        mmax = 1 + n * int(supp.max())
        m = np.arange(mmin, mmax + 1, dtype=float)
        logw = gammaln(n + m) - gammaln(n + 1) - gammaln(m) + m * math.log1p(-self.p) - np.log(m)
        logw -= logw.max()
        return logw, mmin


@dataclass
class SamplerConfig:
    size_n: int = 1
    max_total_vertices: int = 10_000_000
    max_attempts: int = 10_000_000
    root_label: int = 1
    condition: Condition = "size_and_positive"
    method: Literal["exact", "rejection"] = "exact"

    def __post_init__(self):
        if self.size_n < 1:
            raise InvalidInput("size_n must be >= 1")
        if self.max_total_vertices < 1 or self.max_attempts < 1:
            raise InvalidInput("caps and budgets must be positive")
        if self.condition not in ("none", "size", "size_and_positive", "root_one_child"):
            raise InvalidInput(f"unknown condition {self.condition!r}")
        if self.method not in ("exact", "rejection"):
            raise InvalidInput(f"unknown method {self.method!r}")


@dataclass
class SampleStats:
    attempts: int = 0  # tree draws
    size_hits: int = 0  # draws with the right #T^1
    truncated: int = 0  # draws abandoned at the vertex cap
    accepted: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def sample_gw(mu0_param: float, mu1_pmf, rng=None, cap: int = 10_000_000) -> PlaneTree:
    """One draw of ``P_mu``; raises :class:`AttemptAbandoned` past ``cap`` vertices."""
    tab = OffspringTables.from_laws(mu0_param, mu1_pmf)
    gen = as_rng(rng)
    ch, status = K.sample_gw(gen, tab.p, tab.prob, tab.alias, int(cap), -1)
    if status:
        raise AttemptAbandoned(f"tree exceeded {cap} vertices")
    return PlaneTree(ch, validate=False)


def attach_labels(tree: PlaneTree, x: int, rng=None, reversed_nu: bool = False) -> Mobile:
    """Labels under ``R_{nu,x}``: root label ``x``, type-1 children displaced by ``nu_1^k``."""
    gen = as_rng(rng)
    lab, _ = K.attach_labels(gen, tree.children, tree.depth, int(x), False, bool(reversed_nu))
    return Mobile(tree, lab, validate=False)


def exact_size_tree(tables: OffspringTables, n: int, rng=None) -> PlaneTree:
    """Exact draw of ``P^n`` without rejection on the tree size.

    Draws the type-1 offspring ``K_1..K_n`` iid, accepts the implied number
    of type-0 vertices with probability ``w(m)``, splits the ``n`` type-1
    vertices among the ``m`` type-0 ones uniformly, and fixes the cyclic
    order of the type-0 packages by the cycle lemma.
    """
    logw, mmin = tables.size_weights(int(n))
    gen = as_rng(rng)
    return PlaneTree(K.exact_size_tree(gen, int(n), tables.prob, tables.alias, logw, mmin), validate=False)


def _rejection_size(gen, tab, cfg, stats, positive):
    n = cfg.size_n
    while stats.attempts < cfg.max_attempts:
        stats.attempts += 1
        ch, status = K.sample_gw(gen, tab.p, tab.prob, tab.alias, cfg.max_total_vertices, n)
        if status == 1:
            stats.truncated += 1
            continue
        if status == 2:
            continue
        tree = PlaneTree(ch, validate=False)
        if tree.n_type1 != n:
            continue
        stats.size_hits += 1
        lab, ok = K.attach_labels(gen, tree.children, tree.depth, cfg.root_label, positive, False)
        if ok:
            return Mobile(tree, lab, validate=False)
    return None


def sample_conditioned(config: SamplerConfig, params: BoltzmannParams, rng=None,
                       tables: Optional[OffspringTables] = None) -> tuple[Mobile, SampleStats]:
    """One exact draw of the law selected by ``config.condition``.

    Raises :class:`BudgetExhausted` (with the statistics so far) when
    ``max_attempts`` tree draws did not produce an accepted sample.
    """
    tab = tables or OffspringTables.from_params(params)
    gen = as_rng(rng)
    stats = SampleStats()
    t0 = time.perf_counter()
    cfg = config
    mob = None
    if cfg.condition in ("none", "root_one_child"):
        while stats.attempts < cfg.max_attempts:
            stats.attempts += 1
            ch, status = K.sample_gw(gen, tab.p, tab.prob, tab.alias, cfg.max_total_vertices, -1)
            if status:
                stats.truncated += 1
                continue
            if cfg.condition == "root_one_child" and ch[0] != 1:
                continue
            tree = PlaneTree(ch, validate=False)
            lab, _ = K.attach_labels(gen, tree.children, tree.depth, cfg.root_label, False, False)
            mob = Mobile(tree, lab, validate=False)
            break
    elif cfg.method == "rejection":
        mob = _rejection_size(gen, tab, cfg, stats, cfg.condition == "size_and_positive")
    else:
        logw, mmin = tab.size_weights(cfg.size_n)
        if cfg.condition == "size":
            ch = K.exact_size_tree(gen, cfg.size_n, tab.prob, tab.alias, logw, mmin)
            tree = PlaneTree(ch, validate=False)
            lab, _ = K.attach_labels(gen, tree.children, tree.depth, cfg.root_label, False, False)
            stats.attempts = stats.size_hits = 1
            mob = Mobile(tree, lab, validate=False)
        else:
            ch, lab, att = K.positive_mobile(gen, cfg.size_n, tab.prob, tab.alias, logw, mmin,
                                             cfg.root_label, cfg.max_attempts)
            stats.attempts = stats.size_hits = att if att > 0 else cfg.max_attempts
            if att > 0:
                mob = Mobile(PlaneTree(ch, validate=False), lab, validate=False)
    stats.seconds = time.perf_counter() - t0
    if mob is None:
        raise BudgetExhausted(f"no accepted sample after {stats.attempts} attempts", stats.as_dict())
    stats.accepted = 1
    return mob, stats


@dataclass
class ConstantsRow:
    n: int
    trials_size: int
    hits_size: int
    scaled_size_prob: float  # n^{3/2} P(#T^1 = n)
    scaled_size_se: float
    trials_pos: int
    hits_pos: int
    scaled_pos_prob: float  # n P^n(U > 0)
    scaled_pos_se: float
    leaf_fraction: float  # E #d0T / n under P^n
    leaf_fraction_se: float
    flags: list = field(default_factory=list)


def estimate_constants(params: BoltzmannParams, n_list, trials: int, rng=None,
                       pos_trials: Optional[int] = None, x: int = 1) -> list[ConstantsRow]:
    """Monte Carlo estimates behind the n^{3/2}, 1/n and leaf-count laws.

    ``trials`` unconditioned trees give ``P(#T^1 = n)`` for all ``n`` at once;
    ``pos_trials`` exact draws of ``P^n`` per ``n`` give ``P^n(U > 0)`` and
    the type-0 leaf fraction.
    """
    n_list = [int(n) for n in n_list]
    if n_list != sorted(n_list) or not n_list or n_list[0] < 1:
        raise InvalidInput("n_list must be ascending positive integers")
    tab = OffspringTables.from_params(params)
    gen = as_rng(rng)
    pos_trials = trials if pos_trials is None else int(pos_trials)
    hist = K.gw_type1_counts(gen, tab.p, tab.prob, tab.alias, int(trials), n_list[-1])
    rows = []
    for n in n_list:
        h = int(hist[n])
        ph = h / trials
        se = math.sqrt(ph * (1 - ph) / trials)
        logw, mmin = tab.size_weights(n)
        npos, ls, lq = K.size_conditioned_stats(gen, n, tab.prob, tab.alias, logw, mmin, int(x), pos_trials)
        pp = npos / pos_trials
        pse = math.sqrt(pp * (1 - pp) / pos_trials)
        lm = ls / pos_trials
        lvar = max(lq / pos_trials - lm**2, 0.0)
        flags = []
        if h < 30:
            flags.append("few size hits")
        if npos < 30:
            flags.append("few positive hits")
        rows.append(ConstantsRow(
            n=n, trials_size=int(trials), hits_size=h,
            scaled_size_prob=n**1.5 * ph, scaled_size_se=n**1.5 * se,
            trials_pos=pos_trials, hits_pos=int(npos),
            scaled_pos_prob=n * pp, scaled_pos_se=n * pse,
            leaf_fraction=lm / n, leaf_fraction_se=math.sqrt(lvar / pos_trials) / n,
            flags=flags,
        ))
    return rows
