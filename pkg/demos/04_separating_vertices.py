"""Separating vertices and positive subtrees.

A type-0 vertex v whose strict descendants all carry larger labels cuts its
subtree off from the rest of the map. The separated set always contains the
type-0 part of that subtree, and it can be strictly larger. The small
example below has a leaf outside the subtree hanging off v as a pendant
vertex.
"""

import numpy as np

from bdgmaps import _kernels as K
from bdgmaps.bdg import to_rooted_map
from bdgmaps.enumeration import enumerate_mobiles
from bdgmaps.experiments import collect_samples, separation_windows
from bdgmaps.mobiles import Mobile
from bdgmaps.trees import PlaneTree


def witnesses(mob):
    t, lab = mob.tree, mob.labels
    sub = K.subtree_min_strict(t.children, t.depth, lab)
    is0 = ~t.type1
    cs = np.r_[0, np.cumsum(is0)]
    i = np.arange(len(t))
    cnt0 = cs[i + t.subtree_size] - cs[i]
    return np.flatnonzero(is0 & (cnt0 >= 2) & (sub > lab)), cnt0, np.cumsum(is0) * is0


words = [(), (1,), (1, 1), (1, 1, 1), (1, 1, 1, 1), (1, 1, 2), (1, 1, 2, 1), (1, 1, 2, 1, 1), (1, 1, 2, 1, 1, 1)]
mob = Mobile(PlaneTree.from_words(words), [1, 1, 2, 2, 2, 2, 1, 1, 2])
wv, cnt0, vid = witnesses(mob)
m = to_rooted_map(mob)
v = mob.tree.index((1, 1, 2, 1))
print(f"subtree of 1121 has {cnt0[v]} type-0 vertices; the map separates {m.separated_from_vertex0()[vid[v]]}")
leaf = vid[mob.tree.index((1, 1, 1, 1))]
print("degrees of the map vertices:", m.degrees().tolist(), f"(vertex {leaf} is the leaf 1111)")

for kappa, top in ((2, 4), (3, 3)):
    for n in range(1, top + 1):
        tot = bad = 0
        for mb in enumerate_mobiles(kappa, n, True):
            wv, cnt0, vid = witnesses(mb)
            sep = to_rooted_map(mb).separated_from_vertex0()
            tot += wv.size
            bad += int(np.count_nonzero(sep[vid[wv]] != cnt0[wv]))
        print(f"kappa={kappa} n={n}: {tot} witnesses, {bad} with a strictly larger separated set")

print("\nfraction of maps with a separated set in [n^0.3, 2 n^0.3] (and [n^0.47, 2 n^0.47])")
for n in (100, 200, 400):
    s = collect_samples(2, n, 300, seed=2)
    lo, hi = separation_windows(n, 0.2)["half"]
    print(f"  n={n}: window [{lo:.1f}, {hi:.1f}]  map side {s.sep_map.mean(0).round(3).tolist()}  "
          f"mobile side {s.sep_mobile.mean(0).round(3).tolist()}  mismatches {s.mismatches}/{s.witnesses}")
