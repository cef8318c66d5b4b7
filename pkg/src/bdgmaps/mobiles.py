"""Labelled two-type trees (mobiles) and the displacement laws nu_1^k.

A point of ``A_k`` is a vector ``x`` of length ``k`` with

    x_1 >= -1,   x_{i+1} - x_i >= -1,   -x_k >= -1,

i.e. the partial sums of a vector of ``B_k`` (``k+1`` entries >= -1 summing
to 0). There are ``N(k+1) = binom(2k+1, k)`` such points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import InvalidInput
from .rng import as_rng
from .trees import PlaneTree, reroot

__all__ = [
    "Mobile",
    "MobileCheck",
    "enumerate_A",
    "in_A",
    "sample_nu1",
    "validate_mobile",
    "shift_positive",
    "reroot_labels",
    "phi_j",
    "reverse",
    "min_label_excluding_root",
]


# ---------------------------------------------------------------- A_k


@lru_cache(maxsize=None)
def _A_cached(k: int) -> np.ndarray:
    # bar positions b_1 < ... < b_k in {1, ..., 2k+1}; the point is b_i - 2i
    out = np.array([[b - 2 * (i + 1) for i, b in enumerate(bars)] for bars in combinations(range(1, 2 * k + 2), k)],
                   dtype=np.int64)
    out.setflags(write=False)
    return out


def enumerate_A(k: int) -> np.ndarray:
    """All points of ``A_k`` as rows, in lexicographic order of bar positions."""
    if k < 1:
        raise InvalidInput(f"A_k needs k >= 1, got {k}")
    return _A_cached(int(k))


def in_A(x) -> bool:
    x = np.asarray(x, dtype=np.int64)
    if x.ndim != 1 or x.size == 0:
        return False
    steps = np.diff(np.concatenate([[0], x, [0]]))
    return bool(np.all(steps >= -1))


def sample_nu1(k: int, rng=None, size: Optional[int] = None) -> np.ndarray:
    """Draw from the uniform law on ``A_k``.

    A uniform ``k``-subset of ``{1, ..., 2k+1}`` (sorted bar positions
    ``b``) gives the point ``b_i - 2i``. With ``size`` the result has shape
    ``(size, k)``.
    """
    if k < 1:
        raise InvalidInput(f"nu_1^k needs k >= 1, got {k}")
    rng = as_rng(rng)
    m = 2 * k + 1
    reps = 1 if size is None else int(size)
    # the k smallest of 2k+1 iid uniforms sit at a uniform k-subset of positions
    keys = rng.random((reps, m))
    bars = np.sort(np.argpartition(keys, k - 1, axis=1)[:, :k], axis=1) + 1
    pts = bars - 2 * np.arange(1, k + 1)
    return pts[0] if size is None else pts


def phi_j(x, j: int) -> np.ndarray:
    """Cyclic recentering ``(x_{j+1}-x_j, ..., x_k-x_j, -x_j, x_1-x_j, ..., x_{j-1}-x_j)``."""
    x = np.asarray(x, dtype=np.int64)
    k = x.shape[-1]
    if not 1 <= j <= k:
        raise InvalidInput(f"phi_j needs 1 <= j <= {k}, got {j}")
    xj = x[..., j - 1 : j]
    ext = np.concatenate([x[..., j:], np.zeros_like(xj), x[..., : j - 1]], axis=-1)
    return ext - xj


def reverse(x) -> np.ndarray:
    """``(x_1, ..., x_k) -> (x_k, ..., x_1)``, the map defining the reversed law."""
    return np.asarray(x)[..., ::-1].copy()


# ---------------------------------------------------------------- mobiles


@dataclass(frozen=True)
class MobileCheck:
    ok: bool
    well_labelled: bool = False
    condition: Optional[str] = None  # "a" or "b"
    vertex: Optional[int] = None  # offending vertex (preorder index)
    corner: Optional[int] = None  # for (b): position j of the failing step v(j) -> v(j+1)
    detail: str = ""

    def __bool__(self):
        return self.ok


def validate_mobile(tree: PlaneTree, labels) -> MobileCheck:
    """Check mobile conditions (a) and (b); report the first violation."""
    lab = np.asarray(labels, dtype=np.int64)
    if lab.shape != (len(tree),):
        raise InvalidInput(f"expected {len(tree)} labels, got shape {lab.shape}")
    par = tree.parent
    t1 = tree.type1
    # (a): a type-1 vertex carries its parent's label
    bad = np.flatnonzero(t1 & (lab != lab[np.maximum(par, 0)]))
    if bad.size:
        v = int(bad[0])
        return MobileCheck(False, condition="a", vertex=int(v),
                           detail=f"U[{v}] = {lab[v]} differs from parent label {lab[par[v]]}")
    n = len(tree)
    if n > 1:
        size = tree.subtree_size
        idx = np.arange(1, n)
        pv = par[idx]
        on1 = t1[pv]  # children of type-1 vertices
        # predecessor in the cyclic order around the parent: previous sibling or the parent itself
        nxt = idx + size[idx]
        has_next = nxt < n
        sib = np.zeros_like(has_next)
        sib[has_next] = par[nxt[has_next]] == pv[has_next]
        prev_of = np.full(n, -1, np.int64)
        prev_of[nxt[sib]] = idx[sib]
        first = prev_of[idx] < 0
        prev = np.where(first, pv, prev_of[idx])
        step_bad = on1 & (lab[idx] < lab[prev] - 1)
        # closing step: from the last child back to the parent
        last = on1 & ~sib
        close_bad = last & (lab[pv] < lab[idx] - 1)
        cand = []
        if step_bad.any():
            c = int(idx[np.flatnonzero(step_bad)[0]])
            cand.append((int(par[c]), c, "step"))
        if close_bad.any():
            c = int(idx[np.flatnonzero(close_bad)[0]])
            cand.append((int(par[c]), c, "close"))
        if cand:
            v, c, kind = min(cand)
            kids = _children_of(tree, v)
            j = kids.index(c) + (1 if kind == "close" else 0)
            seq = [int(lab[v])] + [int(lab[w]) for w in kids] + [int(lab[v])]
            return MobileCheck(False, condition="b", vertex=v, corner=j,
                               detail=f"labels around vertex {v}: {seq}, step {j} -> {j + 1} drops by more than 1")
    return MobileCheck(True, well_labelled=bool(lab.min() >= 1))


def _children_of(tree: PlaneTree, v: int) -> list[int]:
    out = []
    c = v + 1
    for _ in range(int(tree.children[v])):
        out.append(c)
        c += int(tree.subtree_size[c])
    return out


class Mobile:
    """A plane tree with integer labels satisfying conditions (a) and (b)."""

    __slots__ = ("tree", "labels", "__dict__")

    def __init__(self, tree: PlaneTree, labels, validate: bool = True):
        lab = np.ascontiguousarray(labels, dtype=np.int64)
        if validate:
            chk = validate_mobile(tree, lab)
            if not chk:
                raise InvalidInput(f"not a mobile: condition ({chk.condition}) fails; {chk.detail}")
        lab.setflags(write=False)
        self.tree = tree
        self.labels = lab

    @cached_property
    def well_labelled(self) -> bool:
        return bool(self.labels.min() >= 1)

    @property
    def n_faces(self) -> int:
        return self.tree.n_type1

    def __len__(self):
        return len(self.tree)

    def __eq__(self, other):
        return isinstance(other, Mobile) and self.tree == other.tree and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.tree, self.labels.tobytes()))

    def __repr__(self):
        return f"Mobile(tree={self.tree.children.tolist()}, labels={self.labels.tolist()})"

    def key(self) -> tuple:
        return (tuple(self.tree.children.tolist()), tuple(self.labels.tolist()))

    def to_json(self) -> dict:
        return {"tree": self.tree.to_json(), "labels": self.labels.tolist()}

    @classmethod
    def from_json(cls, doc) -> "Mobile":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(PlaneTree(doc["tree"]), doc["labels"])


def shift_positive(mobile: Mobile) -> Mobile:
    """``U+ = U - min U + 1``: same increments, minimum label exactly 1."""
    lab = mobile.labels - mobile.labels.min() + 1
    return Mobile(mobile.tree, lab, validate=False)


def reroot_labels(mobile: Mobile, v0: int) -> Mobile:
    """The re-rooted spatial tree: type-0 labels ``U_vbar - U_v0``, type-1 copy their parent.

    The result has root label 0. Note it is a labelled tree but not
    necessarily a mobile in the sense of condition (b); the caller decides.
    """
    new, corr = reroot(mobile.tree, v0)
    lab = mobile.labels[corr] - mobile.labels[v0]
    t1 = new.type1
    lab[t1] = lab[new.parent[t1]]
    return Mobile(new, lab, validate=False)


def min_label_excluding_root(mobile: Mobile) -> float:
    """``min{U_v : v in T^0 \\ {root}}``, or ``inf`` when that set is empty."""
    mask = ~mobile.tree.type1
    mask[0] = False
    if not mask.any():
        return math.inf
    return int(mobile.labels[mask].min())
