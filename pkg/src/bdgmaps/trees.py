"""Plane trees in Ulam-Harris form, stored as preorder child counts.

Vertex ``i`` of a :class:`PlaneTree` is the ``i``-th vertex in
lexicographic (preorder) order; ``0`` is the root. Generation parity gives
the type: even generations are type 0, odd generations type 1.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import InvalidInput

__all__ = ["PlaneTree", "from_contour", "reroot", "subtree_above", "prune_at"]


class PlaneTree:
    """Ordered rooted tree given by its preorder child-count sequence."""

    __slots__ = ("children", "__dict__")

    def __init__(self, children: Iterable[int], validate: bool = True):
        ch = np.ascontiguousarray(np.asarray(list(children) if not isinstance(children, np.ndarray) else children, dtype=np.int64))
        if ch.ndim != 1 or ch.size == 0:
            raise InvalidInput("a tree needs at least the root vertex")
        if validate:
            bad = K.lukasiewicz_ok(ch)
            if bad >= 0:
                raise InvalidInput(f"not a preorder child-count sequence (violation at index {bad})")
        ch.setflags(write=False)
        self.children = ch

    # ------------------------------------------------------------ basics
    def __len__(self) -> int:
        return self.children.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneTree) and np.array_equal(self.children, other.children)

    def __hash__(self):
        return hash(self.children.tobytes())

    def __repr__(self) -> str:
        return f"PlaneTree({self.children.tolist()})"

    @property
    def zeta(self) -> int:
        return len(self) - 1

    @cached_property
    def _structure(self):
        return K.tree_structure(self.children)

    @property
    def parent(self) -> np.ndarray:
        return self._structure[0]

    @property
    def depth(self) -> np.ndarray:
        return self._structure[1]

    @property
    def subtree_size(self) -> np.ndarray:
        return self._structure[2]

    @property
    def type1(self) -> np.ndarray:
        """Boolean mask of odd-generation vertices."""
        return (self.depth & 1).astype(bool)

    @property
    def n_type0(self) -> int:
        return int(len(self) - self.type1.sum())

    @property
    def n_type1(self) -> int:
        return int(self.type1.sum())

    def type0_leaves(self) -> np.ndarray:
        return np.flatnonzero((self.children == 0) & ~self.type1)

    def alternates(self) -> bool:
        """Children of type-0 vertices are type 1 and vice versa (always true by parity)."""
        p = self.parent[1:]
        return bool(np.all((self.depth[1:] & 1) != (self.depth[p] & 1)))

    # ------------------------------------------------------------ words
    @cached_property
    def words(self) -> list[tuple[int, ...]]:
        """Ulam-Harris word of every vertex, in preorder."""
        out: list[tuple[int, ...]] = [()]
        rank = np.zeros(len(self), dtype=np.int64)
        seen = np.zeros(len(self), dtype=np.int64)
        par = self.parent
        for i in range(1, len(self)):
            p = par[i]
            seen[p] += 1
            rank[i] = seen[p]
            out.append(out[p] + (int(rank[i]),))
        return out

    def index(self, word: Sequence[int]) -> int:
        """Preorder index of a vertex given as a word; raises if absent."""
        v = 0
        size = self.subtree_size
        for j in word:
            if not 1 <= j <= self.children[v]:
                raise InvalidInput(f"vertex {tuple(word)} is not in the tree")
            c = v + 1
            for _ in range(j - 1):
                c += size[c]
            v = c
        return v

    def contains(self, word: Sequence[int]) -> bool:
        try:
            self.index(word)
        except InvalidInput:
            return False
        return True

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]]) -> "PlaneTree":
        ws = sorted({tuple(w) for w in words})
        if () not in ws:
            raise InvalidInput("the root () must belong to the tree")
        wset = set(ws)
        kids = {w: 0 for w in ws}
        for w in ws:
            if w:
                if w[:-1] not in wset:
                    raise InvalidInput(f"parent of {w} missing")
                kids[w[:-1]] = max(kids[w[:-1]], w[-1])
        for w, k in kids.items():
            for j in range(1, k + 1):
                if w + (j,) not in wset:
                    raise InvalidInput(f"children of {w} are not 1..{k}")
        return cls([kids[w] for w in ws])

    # ------------------------------------------------------------ encodings
    def search_depth(self) -> np.ndarray:
        """Preorder indices u_0, ..., u_{2 zeta} of the contour walk."""
        return K.contour_vertices(self.children)

    def contour(self) -> np.ndarray:
        return self.depth[self.search_depth()]

    def to_json(self) -> list[int]:
        return self.children.tolist()

    @classmethod
    def from_json(cls, doc) -> "PlaneTree":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc)


def from_contour(C: Sequence[int]) -> PlaneTree:
    """The unique tree whose contour function is ``C``."""
    C = np.asarray(C, dtype=np.int64)
    if C.ndim != 1 or C.size % 2 == 0:
        raise InvalidInput("a contour has odd length 2*zeta+1")
    if C[0] != 0:
        raise InvalidInput("contour violation at position 0: C(0) must be 0")
    steps = np.diff(C)
    bad = np.flatnonzero(np.abs(steps) != 1)
    if bad.size:
        raise InvalidInput(f"contour violation at position {bad[0] + 1}: steps must be +-1")
    neg = np.flatnonzero(C < 0)
    if neg.size:
        raise InvalidInput(f"contour violation at position {neg[0]}: C must be >= 0")
    if C[-1] != 0:
        raise InvalidInput(f"contour violation at position {C.size - 1}: C(2 zeta) must be 0")
    return PlaneTree(K.children_from_contour(C), validate=False)


def _check_vertex(tree: PlaneTree, v: int) -> int:
    if not 0 <= v < len(tree):
        raise InvalidInput(f"vertex {v} is not in the tree")
    return int(v)


def reroot(tree: PlaneTree, v0: int) -> tuple[PlaneTree, np.ndarray]:
    """Re-root at a type-0 vertex after removing its strict descendants.

    Implements ``C(k) + C([[k-t]]) - 2 inf C`` over the arc between ``k``
    (first visit of ``v0``) and ``[[k-t]]``. Returns the new tree and, for
    each of its vertices, the preorder index of the original vertex.
    """
    v0 = _check_vertex(tree, v0)
    if tree.depth[v0] % 2:
        raise InvalidInput("re-rooting is only defined at type-0 vertices")
    if v0 == 0:
        # the contour formula would collapse the tree; the root re-roots to itself
        return tree, np.arange(len(tree), dtype=np.int64)
    u = tree.search_depth()
    C = tree.depth[u]
    z2 = C.size - 1
    if z2 == 0:
        return tree, np.zeros(1, dtype=np.int64)
    hits = np.flatnonzero(u == v0)
    k, l = int(hits[0]), int(hits[-1])
    t = np.arange(z2 - (l - k) + 1)
    j = np.mod(k - t, z2)
    # inf of C between k and j: j runs k, k-1, ..., 0, then 2z-1, ..., l
    back = np.minimum.accumulate(C[k::-1])  # inf over [i, k] for i = k, k-1, ..., 0
    lo = np.empty(t.size, dtype=np.int64)
    first = k + 1  # t = 0..k hits j = k..0
    lo[:first] = back
    if t.size > first:
        # j = z2 - 1, ..., l ; the interval is [k, j]
        seg = C[k : z2]
        run = np.minimum.accumulate(seg)  # inf over [k, k + i]
        js = j[first:]
        lo[first:] = run[js - k]
    Chat = C[k] + C[j] - 2 * lo
    new = from_contour(Chat)
    corr = np.empty(len(new), dtype=np.int64)
    corr[new.search_depth()] = u[j]
    return new, corr


def subtree_above(tree: PlaneTree, v: int) -> PlaneTree:
    """Fringe subtree ``{w : v w in T}`` rooted at ``v``."""
    v = _check_vertex(tree, v)
    return PlaneTree(tree.children[v : v + tree.subtree_size[v]], validate=False)


def prune_at(tree: PlaneTree, v: int) -> PlaneTree:
    """``T`` with the strict descendants of ``v`` removed."""
    v = _check_vertex(tree, v)
    s = tree.subtree_size[v]
    ch = np.concatenate([tree.children[: v + 1], tree.children[v + s :]])
    ch[v] = 0
    return PlaneTree(ch, validate=False)


def prune_map(tree: PlaneTree, v: int) -> np.ndarray:
    """Original indices of the vertices kept by :func:`prune_at`."""
    s = tree.subtree_size[v]
    return np.concatenate([np.arange(v + 1), np.arange(v + s, len(tree))])
