"""Rooted (pointed) planar maps as rotation systems, and map-side observables.

A map with ``E`` edges has ``2E`` darts. ``alpha`` pairs the two darts of
an edge, ``sigma`` is the cyclic successor of a dart around its vertex and
faces are the orbits of ``sigma o alpha``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import _kernels as K
from .errors import InvalidInput, InvariantViolation

__all__ = ["PlanarMap", "ProfileMeasure"]


def _orbits(perm: np.ndarray) -> np.ndarray:
    """Orbit id of each element of a permutation (ids in order of first element)."""
    n = perm.shape[0]
    orb = np.full(n, -1, np.int64)
    k = 0
    for s in range(n):
        if orb[s] >= 0:
            continue
        d = s
        while orb[d] < 0:
            orb[d] = k
            d = perm[d]
        k += 1
    return orb


@dataclass(frozen=True)
class ProfileMeasure:
    """Distance profile from a vertex: ``counts[k] = #{a : d(o, a) = k}``."""

    counts: np.ndarray
    n_vertices: int
    n_faces: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.n_vertices

    @property
    def radius(self) -> int:
        return int(np.flatnonzero(self.counts)[-1])

    def rescaled_support(self) -> np.ndarray:
        """Support points ``k / n^{1/4}`` of the rescaled profile."""
        return np.arange(self.counts.size) / self.n_faces**0.25

    def mean(self, rescaled: bool = True) -> float:
        k = self.rescaled_support() if rescaled else np.arange(self.counts.size)
        return float(np.dot(k, self.probabilities))


class PlanarMap:
    """Combinatorial map given by ``sigma``, ``alpha`` and a root dart.

    ``vertex[d]`` is the vertex carrying dart ``d``. ``pointed`` is an
    optional distinguished vertex. ``origin`` optionally records, for each
    vertex, where it came from (e.g. a tree vertex, ``-1`` for the extra one).
    """

    def __init__(self, sigma, alpha, root: int = 0, pointed: Optional[int] = None,
                 vertex=None, origin=None, validate: bool = True):
        self.sigma = np.ascontiguousarray(sigma, dtype=np.int64)
        self.alpha = np.ascontiguousarray(alpha, dtype=np.int64)
        self.root = int(root)
        if vertex is None:
            vertex = _orbits(self.sigma)
        self.vertex = np.ascontiguousarray(vertex, dtype=np.int64)
        self.n_vertices = int(self.vertex.max()) + 1 if self.vertex.size else 1
        self.pointed = None if pointed is None else int(pointed)
        self.origin = None if origin is None else np.asarray(origin, dtype=np.int64)
        if validate:
            self.validate()

    # ------------------------------------------------------------ structure
    @property
    def n_darts(self) -> int:
        return self.sigma.shape[0]

    @property
    def n_edges(self) -> int:
        return self.n_darts // 2

    @cached_property
    def face_of(self) -> np.ndarray:
        return _orbits(self.sigma[self.alpha])

    @property
    def n_faces(self) -> int:
        return int(self.face_of.max()) + 1 if self.n_darts else 1

    def faces(self) -> np.ndarray:
        """Face degrees (orbit lengths of ``sigma o alpha``)."""
        if not self.n_darts:
            return np.zeros(1, np.int64)
        return np.bincount(self.face_of)

    def validate(self):
        D = self.n_darts
        if D % 2:
            raise InvariantViolation("odd number of darts")
        if D == 0:
            return
        ar = np.arange(D)
        if not (np.array_equal(np.sort(self.sigma), ar) and np.array_equal(np.sort(self.alpha), ar)):
            raise InvariantViolation("sigma and alpha must be permutations")
        if np.any(self.alpha == ar) or not np.array_equal(self.alpha[self.alpha], ar):
            raise InvariantViolation("alpha must be a fixed-point-free involution")
        if not np.array_equal(self.vertex[self.sigma], self.vertex):
            raise InvariantViolation("sigma must preserve vertices")
        if not 0 <= self.root < D:
            raise InvariantViolation("root dart out of range")
        if self.pointed is not None and not 0 <= self.pointed < self.n_vertices:
            raise InvariantViolation("pointed vertex out of range")
        if not self.is_connected():
            raise InvariantViolation("map is not connected")
        chi = self.n_vertices - self.n_edges + self.n_faces
        if chi != 2:
            raise InvariantViolation(f"Euler characteristic {chi} != 2 (not planar)")

    def is_connected(self) -> bool:
        if self.n_darts == 0:
            return True
        return bool(np.all(self._dart_bfs_order() >= 0))

    def _dart_bfs_order(self) -> np.ndarray:
        D = self.n_darts
        num = np.full(D, -1, np.int64)
        q = np.empty(D, np.int64)
        num[self.root] = 0
        q[0] = self.root
        h, t = 0, 1
        sg, al = self.sigma, self.alpha
        while h < t:
            d = q[h]
            h += 1
            for e in (sg[d], al[d]):
                if num[e] < 0:
                    num[e] = t
                    q[t] = e
                    t += 1
        return num

    # ------------------------------------------------------------ graph view
    @cached_property
    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency ``(ptr, nbr)`` with one entry per dart (multi-edges kept)."""
        order = np.argsort(self.vertex, kind="stable")
        ptr = np.zeros(self.n_vertices + 1, np.int64)
        np.cumsum(np.bincount(self.vertex, minlength=self.n_vertices), out=ptr[1:])
        nbr = self.vertex[self.alpha[order]]
        return ptr, np.ascontiguousarray(nbr)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.vertex, minlength=self.n_vertices)

    @property
    def root_vertex(self) -> int:
        return int(self.vertex[self.root])

    def bfs_distances(self, source: int) -> np.ndarray:
        if not 0 <= source < self.n_vertices:
            raise InvalidInput(f"vertex {source} not in map")
        ptr, nbr = self.adjacency
        return K.bfs(ptr, nbr, int(source))

    def is_bipartite(self) -> bool:
        d = self.bfs_distances(0)
        a, b = self.vertex, self.vertex[self.alpha]
        return bool(np.all((d[a] - d[b]) % 2 == 1))

    def radius(self, o: Optional[int] = None) -> int:
        o = self.root_vertex if o is None else o
        return int(self.bfs_distances(o).max())

    def profile(self, o: Optional[int] = None) -> ProfileMeasure:
        o = self.root_vertex if o is None else o
        d = self.bfs_distances(o)
        return ProfileMeasure(np.bincount(d), self.n_vertices, self.n_faces)

    # ------------------------------------------------------------ separation
    @cached_property
    def _cuts(self):
        ptr, nbr = self.adjacency
        return K.cut_components(ptr, nbr, 0)

    def separating_vertices(self) -> np.ndarray:
        """Articulation vertices of the underlying graph, sorted."""
        return np.flatnonzero(self._cuts[0])

    def component_sizes(self, v: int) -> np.ndarray:
        """Sizes of the connected components of ``G - v`` (empty if ``v`` is not a cut vertex)."""
        is_cut, ptr, sizes = self._cuts
        return sizes[ptr[v] : ptr[v + 1]].copy()

    def separated_set_sizes(self, v: int) -> np.ndarray:
        """All values of ``#S^{v, s}`` over ``s != v``, one per component of ``G - v``."""
        return self.n_vertices - self.component_sizes(v)

    def separated_from_vertex0(self) -> np.ndarray:
        """``#S^{v, 0}`` for every vertex ``v != 0`` (entry 0 is set to 0).

        Uses the DFS rooted at vertex 0: for a cut vertex ``v`` the component
        of ``G - v`` holding vertex 0 is the one containing ``v``'s DFS parent.
        """
        is_cut, ptr, sizes = self._cuts
        out = np.ones(self.n_vertices, np.int64)
        cut = np.flatnonzero(is_cut)
        cut = cut[cut != 0]
        out[cut] = self.n_vertices - sizes[ptr[cut + 1] - 1]
        out[0] = 0
        return out

    def component_size(self, sigma0: int, sigma: int) -> int:
        """``#S^{sigma0, sigma}``: ``sigma0`` plus the vertices only reachable from ``sigma`` through it."""
        if sigma0 == sigma:
            raise InvalidInput("sigma0 and sigma must differ")
        for v in (sigma0, sigma):
            if not 0 <= v < self.n_vertices:
                raise InvalidInput(f"vertex {v} not in map")
        ptr, nbr = self.adjacency
        # BFS from sigma in G - sigma0
        mask = nbr != sigma0
        keep = np.repeat(np.arange(self.n_vertices), np.diff(ptr))
        deg = np.bincount(keep[mask], minlength=self.n_vertices)
        p2 = np.zeros(self.n_vertices + 1, np.int64)
        np.cumsum(deg, out=p2[1:])
        d = K.bfs(p2, np.ascontiguousarray(nbr[mask]), int(sigma))
        return int(np.count_nonzero(d < 0))

    def euler_check(self, kappa: int, n: int) -> bool:
        """``V = (kappa-1) n + 2``, ``E = kappa n``, ``F = n`` and all faces of degree ``2 kappa``."""
        f = self.faces()
        return bool(self.n_vertices == (kappa - 1) * n + 2 and self.n_edges == kappa * n
                    and self.n_faces == n and np.all(f == 2 * kappa))

    # ------------------------------------------------------------ encodings
    def canonical_code(self) -> bytes:
        """Breadth-first code from the root dart; equal iff isomorphic as rooted (pointed) maps."""
        num = self._dart_bfs_order()
        if np.any(num < 0):
            raise InvalidInput("canonical code needs a connected map")
        D = self.n_darts
        order = np.empty(D, np.int64)
        order[num] = np.arange(D)
        body = np.empty(2 * D + 2, np.int64)
        body[0] = D
        body[1:-1:2] = num[self.sigma[order]]
        body[2:-1:2] = num[self.alpha[order]]
        if self.pointed is None:
            body[-1] = -1
        else:
            body[-1] = num[self.vertex == self.pointed].min()
        return body.astype("<i4").tobytes()

    @classmethod
    def from_code(cls, code: bytes) -> "PlanarMap":
        arr = np.frombuffer(code, dtype="<i4").astype(np.int64)
        D = int(arr[0])
        if arr.size != 2 * D + 2:
            raise InvalidInput("truncated map code")
        sigma = arr[1:-1:2]
        alpha = arr[2:-1:2]
        vertex = _orbits(sigma)
        pointed = None if arr[-1] < 0 else int(vertex[arr[-1]])
        return cls(sigma, alpha, root=0, pointed=pointed, vertex=vertex)

    def to_json(self) -> dict:
        """Darts renumbered so that ``2e, 2e+1`` are the two sides of edge ``e``."""
        D = self.n_darts
        new = np.empty(D, np.int64)
        e = 0
        for d in range(D):
            a = self.alpha[d]
            if d < a:
                new[d], new[a] = 2 * e, 2 * e + 1
                e += 1
        inv = np.empty(D, np.int64)
        inv[new] = np.arange(D)
        # position of each dart in its vertex rotation, counted from the vertex's smallest new index
        pos = np.zeros(D, np.int64)
        seen = np.zeros(D, bool)
        for d0 in inv:
            if seen[d0]:
                continue
            d, i = d0, 0
            while not seen[d]:
                seen[d] = True
                pos[d] = i
                i += 1
                d = self.sigma[d]
        darts = [[int(self.vertex[inv[k]]), int(pos[inv[k]])] for k in range(D)]
        return {
            "n_vertices": self.n_vertices,
            "darts": darts,
            "root": int(new[self.root]) if D else 0,
            "pointed": self.pointed,
            "code": self.canonical_code().hex(),
        }

    @classmethod
    def from_json(cls, doc) -> "PlanarMap":
        if isinstance(doc, str):
            doc = json.loads(doc)
        darts = np.asarray(doc["darts"], dtype=np.int64).reshape(-1, 2)
        D = darts.shape[0]
        alpha = np.arange(D) ^ 1
        sigma = np.empty(D, np.int64)
        order = np.lexsort((darts[:, 1], darts[:, 0]))
        v_sorted = darts[order, 0]
        for v in np.unique(v_sorted):
            ds = order[v_sorted == v]
            sigma[ds] = np.roll(ds, -1)
        return cls(sigma, alpha, root=doc["root"], pointed=doc.get("pointed"), vertex=darts[:, 0])
