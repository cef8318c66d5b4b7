"""Exact checks at tiny sizes.

Every well-labelled mobile with n type-1 vertices gives a different rooted
map, so counting mobiles counts maps. The re-rooting comparison computes two
laws on trees exactly (rational arithmetic) and reports their total
variation distance.
"""

import math

from bdgmaps.bdg import to_rooted_map
from bdgmaps.enumeration import enumerate_mobiles, exact_conditional_law, reroot_law_check


def quadrangulations(n):
    return 2 * 3**n * math.comb(2 * n, n) // ((n + 1) * (n + 2))


print("rooted quadrangulations with n faces")
for n in range(1, 5):
    mobs = enumerate_mobiles(2, n, well_labelled=True)
    codes = {to_rooted_map(m).canonical_code() for m in mobs}
    print(f"  n={n}: {len(mobs)} mobiles, {len(codes)} distinct maps, closed form {quadrangulations(n)}")

print("\nrooted hexangulations with n faces")
for n in range(1, 4):
    print(f"  n={n}: {len(enumerate_mobiles(3, n, True))}")

law = exact_conditional_law(2, 2, "size_and_positive")
print(f"\nPbar^2 for kappa=2 puts mass {law[0][1]} on each of its {len(law)} mobiles")

print("\nre-rooting at v0 versus pruning at v0-hat")
for v0, kappa, size, spatial in [((1, 1), 2, 9, False), ((1, 1, 1, 1), 2, 11, False),
                                 ((1, 2, 1, 1), 3, 10, False), ((1, 1, 1, 1), 2, 9, True)]:
    r = reroot_law_check(v0, kappa, size, spatial=spatial)
    print(f"  v0={''.join(map(str, v0))} kappa={kappa} <= {size} vertices spatial={spatial}: "
          f"TV={r.tv}, covered mass {r.covered:.4f}, {r.n_outcomes} outcomes")
