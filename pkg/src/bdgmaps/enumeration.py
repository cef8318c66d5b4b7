"""Exhaustive enumeration at tiny sizes for the 2kappa-angulation weights.

For these weights ``mu0`` is geometric with parameter ``1/kappa`` and
``mu1`` is the point mass at ``kappa - 1``, so every probability below is
a rational number and is computed with :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidInput
from .mobiles import Mobile, enumerate_A, reroot_labels
from .trees import PlaneTree, reroot
from .weights import N

__all__ = [
    "enumerate_trees",
    "enumerate_mobiles",
    "exact_conditional_law",
    "label_assignments",
    "reroot_law_check",
    "RerootReport",
    "dump_jsonl",
    "hat_vertex",
]

MAX_N = {2: 4, 3: 3}


def _mu0(kappa: int, k: int) -> Fraction:
    p = Fraction(1, kappa)
    return (1 - p) * p**k


def _mu1(kappa: int, k: int) -> Fraction:
    return Fraction(1) if k == kappa - 1 else Fraction(0)


def enumerate_trees(kappa: int, n: int) -> Iterator[PlaneTree]:
    """All two-type trees with ``n`` type-1 vertices, each having ``kappa-1`` children."""
    out: list[int] = []

    def rec(pending: list[int], left: int):
        if not pending:
            if left == 0:
                yield PlaneTree(out, validate=False)
            return
        t = pending.pop()
        if t == 0:
            for k in range(left + 1):
                out.append(k)
                pending.extend([1] * k)
                yield from rec(pending, left - k)
                del pending[len(pending) - k :]
                out.pop()
        else:
            k = kappa - 1
            out.append(k)
            pending.extend([0] * k)
            yield from rec(pending, left)
            del pending[len(pending) - k :]
            out.pop()
        pending.append(t)

    yield from rec([0], n)


def label_assignments(tree: PlaneTree, x: int = 1, reversed_nu: bool = False) -> Iterator[np.ndarray]:
    """Every label vector reachable under ``R_{nu,x}``, each with weight ``prod 1/N(k+1)``.

    Mixed-radix counter over the ``A_k`` choices of the type-1 vertices in preorder.
    """
    t1 = np.flatnonzero(tree.type1 & (tree.children > 0))
    size = tree.subtree_size
    par = tree.parent
    kids = []
    for v in t1:
        c, lst = v + 1, []
        for _ in range(int(tree.children[v])):
            lst.append(c)
            c += size[c]
        kids.append(np.array(lst))
    choices = [enumerate_A(int(tree.children[v])) for v in t1]
    depth_order = np.argsort(tree.depth, kind="stable")
    for combo in itertools.product(*[range(len(c)) for c in choices]):
        disp = np.zeros(len(tree), np.int64)
        for v_i, ci in enumerate(combo):
            pt = choices[v_i][ci]
            disp[kids[v_i]] = pt[::-1] if reversed_nu else pt
        lab = np.empty(len(tree), np.int64)
        lab[0] = x
        for v in depth_order[1:]:
            lab[v] = lab[par[v]] + disp[v]
        yield lab


def enumerate_mobiles(kappa: int, n: int, well_labelled: bool) -> list[Mobile]:
    """All mobiles with root label 1 and ``n`` type-1 vertices of degree ``kappa``."""
    if kappa not in MAX_N:
        raise InvalidInput("enumeration supports kappa in {2, 3}")
    if not 1 <= n <= MAX_N[kappa]:
        raise InvalidInput(f"enumeration for kappa={kappa} is limited to 1 <= n <= {MAX_N[kappa]}")
    out = []
    for t in enumerate_trees(kappa, n):
        for lab in label_assignments(t, 1):
            m = Mobile(t, lab, validate=False)
            if well_labelled and not _positive_outside_root(m):
                continue
            out.append(m)
    return out


def _positive_outside_root(m: Mobile) -> bool:
    mask = ~m.tree.type1
    mask[0] = False
    return bool(np.all(m.labels[mask] > 0))


def exact_conditional_law(kappa: int, n: int, condition: str = "size") -> list[tuple[Mobile, Fraction]]:
    """Exact ``P^n`` (``condition="size"``) or ``Pbar^n`` (``"size_and_positive"``) with root label 1.

    Weight of a mobile: ``prod mu0(k_u) prod mu1(k_u)`` times ``1/N(k+1)``
    per type-1 vertex with ``k`` children, normalised over the enumeration.
    """
    if condition not in ("size", "size_and_positive"):
        raise InvalidInput(f"unknown condition {condition!r}")
    mobs = enumerate_mobiles(kappa, n, condition == "size_and_positive")
    w = []
    for m in mobs:
        t = m.tree
        wt = Fraction(1)
        for v in range(len(t)):
            k = int(t.children[v])
            if t.depth[v] % 2 == 0:
                wt *= _mu0(kappa, k)
            else:
                wt *= _mu1(kappa, k) / N(k + 1)
        w.append(wt)
    tot = sum(w)
    return [(m, wt / tot) for m, wt in zip(mobs, w)]


# ---------------------------------------------------------------- re-rooting


def hat_vertex(v0: Sequence[int]) -> tuple[int, ...]:
    """``1 u^n ... u^2`` for ``v0 = u^1 ... u^n``."""
    v0 = tuple(v0)
    return (1,) + tuple(reversed(v0[1:]))


def _trees_with_leaf(kappa: int, leaf: tuple[int, ...], max_vertices: int):
    """Trees with one root child, at most ``max_vertices`` vertices and ``leaf`` as a leaf."""
    out: list[int] = []

    def rec(pending: list[int], budget: int):
        if not pending:
            yield list(out)
            return
        t = pending.pop()
        opts = range(budget + 1) if t == 0 else ([kappa - 1] if kappa - 1 <= budget else [])
        for k in opts:
            out.append(k)
            pending.extend([1 - t] * k)
            yield from rec(pending, budget - k)
            del pending[len(pending) - k :]
            out.pop()
        pending.append(t)

    for ch in rec([1], max_vertices - 2):
        tree = PlaneTree([1] + ch, validate=False)
        if tree.contains(leaf):
            i = tree.index(leaf)
            if tree.children[i] == 0:
                yield tree, i


def _path_mass(kappa: int, v: tuple[int, ...]) -> Fraction:
    """``Q(v in T)``: tail probabilities along the ancestral line (root child count is 1)."""
    mass = Fraction(1)
    for d in range(1, len(v)):
        need = v[d]
        if d % 2 == 1:  # v[:d] has odd generation, so it is type 1
            mass *= Fraction(1) if kappa - 1 >= need else Fraction(0)
        else:
            mass *= Fraction(1, kappa) ** need
    return mass


def _pruned_weight(kappa: int, tree: PlaneTree, leaf: int) -> Fraction:
    wt = Fraction(1)
    for v in range(1, len(tree)):
        if v == leaf:
            continue
        k = int(tree.children[v])
        wt *= _mu0(kappa, k) if tree.depth[v] % 2 == 0 else _mu1(kappa, k)
    return wt


@dataclass
class RerootReport:
    v0: tuple
    v0_hat: tuple
    mass_v0: Fraction
    mass_v0_hat: Fraction
    covered_left: Fraction
    covered_right: Fraction
    tv: Fraction
    n_outcomes: int
    spatial: bool
    mismatches: list = field(default_factory=list)

    @property
    def covered(self) -> float:
        return float(min(self.covered_left, self.covered_right))


def reroot_law_check(v0: Sequence[int] = (1, 1), kappa: int = 2, max_vertices: int = 9,
                     spatial: bool = False) -> RerootReport:
    """Compare the law of the re-rooted tree with that of the pruned tree at ``v0_hat``.

    Left: ``reroot(T^{(v0)}, v0)`` under ``Q(. | v0 in T)`` (labels from the
    reversed displacement law when ``spatial``). Right: ``T^{(v0_hat)}`` under
    ``Q(. | v0_hat in T)``. Both are computed exactly on trees with at most
    ``max_vertices`` vertices; ``tv`` is the total variation distance between
    the two restricted measures.
    """
    v0 = tuple(int(a) for a in v0)
    if len(v0) % 2 or not v0 or v0[0] != 1:
        raise InvalidInput("v0 must be 1 u^2 ... u^{2p}")
    vh = hat_vertex(v0)
    m_left, m_right = _path_mass(kappa, v0), _path_mass(kappa, vh)
    if m_left == 0:
        raise InvalidInput(f"Q(v0 in T) = 0 for v0 = {v0}")
    left: dict = {}
    right: dict = {}
    cov_l = cov_r = Fraction(0)
    for s, i in _trees_with_leaf(kappa, v0, max_vertices):
        w = _pruned_weight(kappa, s, i) / m_left
        cov_l += w
        if spatial:
            nk = Fraction(1, N(kappa)) ** s.n_type1
            for lab in label_assignments(s, 0, reversed_nu=True):
                r = reroot_labels(Mobile(s, lab, validate=False), i)
                key = (tuple(r.tree.children.tolist()), tuple(r.labels.tolist()))
                left[key] = left.get(key, Fraction(0)) + w * nk
        else:
            r, _ = reroot(s, i)
            key = tuple(r.children.tolist())
            left[key] = left.get(key, Fraction(0)) + w
    for t, i in _trees_with_leaf(kappa, vh, max_vertices):
        w = _pruned_weight(kappa, t, i) / m_right
        cov_r += w
        if spatial:
            nk = Fraction(1, N(kappa)) ** t.n_type1
            for lab in label_assignments(t, 0):
                key = (tuple(t.children.tolist()), tuple(lab.tolist()))
                right[key] = right.get(key, Fraction(0)) + w * nk
        else:
            key = tuple(t.children.tolist())
            right[key] = right.get(key, Fraction(0)) + w
    keys = set(left) | set(right)
    diff = [(k, left.get(k, Fraction(0)), right.get(k, Fraction(0))) for k in keys]
    tv = sum(abs(a - b) for _, a, b in diff) / 2
    bad = sorted([(k, a, b) for k, a, b in diff if a != b], key=repr)[:10]
    return RerootReport(v0, vh, m_left, m_right, cov_l, cov_r, tv, len(keys), spatial, bad)


def dump_jsonl(mobiles, path) -> int:
    """Write one mobile per line; returns the number of lines."""
    path = Path(path)
    k = 0
    with path.open("w") as fh:
        for m in mobiles:
            if isinstance(m, tuple):
                mob, p = m
                doc = mob.to_json() | {"probability": str(p)}
            else:
                doc = m.to_json()
            fh.write(json.dumps(doc) + "\n")
            k += 1
    return k
