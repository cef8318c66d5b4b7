"""From mobiles to rooted pointed bipartite maps.

Write ``w_0, ..., w_{z-1}`` for the type-0 corners of the mobile in
contour order (``z = #T - 1``) and ``U+`` for the labels shifted to have
minimum 1. Corner ``k`` sends one edge to the extra vertex when
``U+ = 1``, and otherwise to the next corner (cyclically) whose label is one
less. Map vertex 0 is the extra vertex; type-0 tree vertices follow in
preorder.

Embedding: around a tree vertex the darts appear corner by corner in
contour order; inside a corner, first the edges arriving from earlier
corners, nearest first, then the edge leaving the corner. Around the
extra vertex, edges appear in reverse contour order of their corners.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import InvalidInput, InvariantViolation
from .maps import PlanarMap
from .mobiles import Mobile, validate_mobile

__all__ = ["to_map", "to_rooted_map", "canonical_code", "verify_correspondences", "Correspondence",
           "corner_sequence"]


def corner_sequence(mobile: Mobile) -> tuple[np.ndarray, np.ndarray]:
    """Type-0 corners ``w_0..w_{z-1}`` (preorder indices) and their ``U+`` labels."""
    u = mobile.tree.search_depth()
    w = u[0:-1:2]
    lab = mobile.labels - mobile.labels.min() + 1
    return w, lab[w]


def _build(mobile: Mobile) -> PlanarMap:
    tree = mobile.tree
    z = tree.zeta
    if z == 0:
        raise InvalidInput("a single-vertex mobile has no corners")
    w, L = corner_sequence(mobile)
    succ = K.bdg_successors(L)
    t0 = ~tree.type1
    vid = np.full(len(tree), -1, np.int64)
    vid[t0] = np.arange(1, int(t0.sum()) + 1)
    D = 2 * z
    k = np.arange(z)
    # dart 2k sits at corner k, dart 2k+1 at the other end of edge k
    vertex = np.empty(D, np.int64)
    vertex[0::2] = vid[w]
    to_extra = succ < 0
    vertex[1::2] = np.where(to_extra, 0, vid[w[np.maximum(succ, 0)]])
    # sort key per dart: (vertex, corner, group, offset)
    corner = np.empty(D, np.int64)
    group = np.empty(D, np.int64)
    off = np.empty(D, np.int64)
    corner[0::2] = k
    group[0::2] = 1
    off[0::2] = 0
    corner[1::2] = np.where(to_extra, -k, succ)
    group[1::2] = 0
    off[1::2] = np.where(to_extra, 0, (succ - k) % z)
    order = np.lexsort((off, group, corner, vertex))
    vs = vertex[order]
    nxt = np.empty(D, np.int64)
    nxt[:-1] = order[1:]
    # wrap each vertex block around
    starts = np.flatnonzero(np.r_[True, vs[1:] != vs[:-1]])
    ends = np.r_[starts[1:], D] - 1
    nxt[ends] = order[starts]
    sigma = np.empty(D, np.int64)
    sigma[order] = nxt
    alpha = np.arange(D) ^ 1
    origin = np.r_[-1, np.flatnonzero(t0)]
    return PlanarMap(sigma, alpha, root=1, pointed=0, vertex=vertex, origin=origin, validate=False)


def to_map(mobile: Mobile, validate: bool = True) -> PlanarMap:
    """Rooted pointed map of a mobile with root label 1, pointed at the extra vertex.

    The root edge is edge 0 (corner ``w_0``), oriented from its lower
    ``U+`` end to its higher end; for well-labelled mobiles this is the dart
    leaving the extra vertex towards the root of the tree.
    """
    if validate:
        chk = validate_mobile(mobile.tree, mobile.labels)
        if not chk:
            raise InvalidInput(f"not a mobile: condition ({chk.condition}) fails; {chk.detail}")
    if mobile.labels[0] != 1:
        raise InvalidInput(f"root label must be 1, got {mobile.labels[0]}")
    m = _build(mobile)
    if validate:
        m.validate()
    return m


def to_rooted_map(mobile: Mobile, validate: bool = True) -> PlanarMap:
    """Rooted map of a well-labelled mobile; root dart leaves the extra vertex."""
    if not mobile.well_labelled:
        raise InvalidInput("to_rooted_map needs a well-labelled mobile (all labels >= 1)")
    m = to_map(mobile, validate=validate)
    if m.vertex[m.root] != 0:
        raise InvariantViolation("root dart of a well-labelled mobile must start at the extra vertex")
    # as a rooted map the root vertex plays the role of the distinguished point
    m.pointed = None
    return m


def canonical_code(m: PlanarMap) -> bytes:
    return m.canonical_code()


@dataclass
class Correspondence:
    ok: bool
    face_degrees: dict = field(default_factory=dict)  # 2k -> (faces, type-1 vertices with k-1 children)
    distances: dict = field(default_factory=dict)  # l -> (vertices at distance l, type-0 with U+ = l)
    violations: list = field(default_factory=list)


def verify_correspondences(mobile: Mobile, m: PlanarMap) -> Correspondence:
    """Face degrees vs type-1 offspring, distances from the extra vertex vs ``U+``."""
    tree = mobile.tree
    rep = Correspondence(ok=True)
    deg = m.faces()
    fk = np.bincount(deg // 2)
    kids = tree.children[tree.type1]
    tk = np.bincount(kids + 1)
    for k in range(max(fk.size, tk.size)):
        a = int(fk[k]) if k < fk.size else 0
        b = int(tk[k]) if k < tk.size else 0
        if a or b:
            rep.face_degrees[2 * k] = (a, b)
            if a != b:
                rep.violations.append(f"{a} faces of degree {2 * k} but {b} type-1 vertices with {k - 1} children")
    if np.any(deg % 2):
        rep.violations.append("odd face degree")
    d = m.bfs_distances(0)
    dl = np.bincount(d[1:])
    lab = mobile.labels - mobile.labels.min() + 1
    ul = np.bincount(lab[~tree.type1])
    for l in range(1, max(dl.size, ul.size)):
        a = int(dl[l]) if l < dl.size else 0
        b = int(ul[l]) if l < ul.size else 0
        if a or b:
            rep.distances[l] = (a, b)
            if a != b:
                rep.violations.append(f"{a} vertices at distance {l} but {b} type-0 vertices with U+ = {l}")
    if m.origin is not None:
        # vertex-wise: d(extra, v) = U+_v
        per = d[1:] != lab[m.origin[1:]]
        if per.any():
            rep.violations.append(f"{int(per.sum())} vertices with d(extra, v) != U+_v")
    rep.ok = not rep.violations
    return rep
