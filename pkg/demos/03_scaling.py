"""Distances in large maps against the Brownian snake.

The rescaled radius, the mean distance and the distance to a uniform
vertex are compared with D times the range, occupation mean and supremum of
a discrete snake. The gap shrinks with n, slowly: finite-size corrections
are of relative order n^{-1/4}.
"""

import numpy as np

from bdgmaps.experiments import collect_samples
from bdgmaps.snake import snake_samples
from bdgmaps.weights import kappa_params

SAMPLES = 300
ref = snake_samples(2048, 20_000, seed=0)
rng_, occ, sup = ref.values("range"), ref.values("occupation"), ref.values("sup")

for kappa in (2, 3):
    D = kappa_params(kappa).scale_D
    print(f"kappa={kappa} (D={D:.4f}); snake: radius {D * rng_.mean():.3f}, "
          f"mean distance {D * occ.mean():.3f}, typical median {D * np.median(sup):.3f}")
    for n in (50, 100, 200, 400):
        s = collect_samples(kappa, n, SAMPLES, seed=1)
        print(f"  n={n:4d}: radius {s.rescaled(s.radius).mean():.3f}  mean distance "
              f"{s.rescaled(s.mean_dist).mean():.3f}  typical median {np.median(s.rescaled(s.typical)):.3f}"
              f"  ({s.wall_time:.1f}s)")
