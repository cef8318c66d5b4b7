"""From a face-weight sequence to one random quadrangulation.

Walks through the pipeline on a single example: solve the criticality
equation, read off the two offspring laws, draw a well-labelled mobile with
a fixed number of faces and turn it into a rooted map. The final check is
the defining property of the bijection, labels equal distances.
"""

import numpy as np

from bdgmaps.bdg import to_rooted_map, verify_correspondences
from bdgmaps.rng import make_rng
from bdgmaps.sampling import SamplerConfig, sample_conditioned
from bdgmaps.weights import WeightSequence, kappa_params, solve_and_classify

# Uniform 2kappa-angulations come from a single weight alpha_kappa on faces of degree 2kappa.
for kappa in (2, 3, 4):
    p = kappa_params(kappa)
    print(f"kappa={kappa}: Z={p.Z:.6f}  rho={p.rho:.6f}  D={p.scale_D:.6f}  "
          f"mu0 geometric({p.mu0_param:.4f})  mu1 mass at {int(np.argmax(p.mu1_pmf))}")

# A mixed sequence: squares and hexagons. The root solve decides which regime it is in.
for q in ({2: 1 / 24, 3: 1 / 500}, {2: 1 / 12}, {2: 0.2}):
    print(q, "->", solve_and_classify(WeightSequence(q)).classification.value)

# One uniform rooted quadrangulation with 60 faces.
mob, stats = sample_conditioned(SamplerConfig(size_n=60), kappa_params(2), make_rng(1))
print(f"\nmobile: {len(mob)} vertices, {mob.n_faces} type-1 vertices, {stats.attempts} attempts")
m = to_rooted_map(mob)
print(f"map: V={m.n_vertices} E={m.n_edges} F={m.n_faces}, face degrees {set(m.faces().tolist())}")

rep = verify_correspondences(mob, m)
print("faces <-> type-1 vertices and distances <-> labels:", "ok" if rep.ok else rep.violations)
print("distance profile from the root vertex:", np.bincount(m.bfs_distances(0)).tolist())
print("radius", m.radius(0), "and n^{1/4} =", round(60**0.25, 3))
