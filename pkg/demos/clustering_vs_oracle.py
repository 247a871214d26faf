"""Clustering approximations checked against exhaustive enumeration.

The instance is small enough that the optimal discrete clusterings can
be found by trying every candidate center set, so the approximation
ratios printed here are exact, not estimated.

Run with: python3 demos/clustering_vs_oracle.py
"""

import numpy as np

from curveclust import Curve, k_center_approx, k_median_approx, kl_center_approx
from curveclust.oracle import brute_force_discrete_center, brute_force_discrete_median


def make_family(rng, groups=3, per_group=4):
    anchors = rng.uniform(-20.0, 20.0, (groups, 2))
    curves = []
    for g in range(groups):
        steps = rng.normal(0.0, 1.0, (3, 2))
        template = np.vstack([anchors[g], anchors[g] + np.cumsum(steps, axis=0)])
        for i in range(per_group):
            jitter = rng.normal(0.0, 0.3, template.shape)
            curves.append(Curve(template + jitter, label=f"g{g}-{i}"))
    return curves


def main():
    rng = np.random.default_rng(23)
    T = make_family(rng)
    print(f"{len(T)} curves of complexity 4 in 3 planted groups\n")

    print("k  farthest-first cost  optimum   ratio     swaps  local-search cost  optimum   ratio")
    for k in (1, 2, 3):
        cen = k_center_approx(T, k)
        cen_opt = brute_force_discrete_center(T, k).against(cen.cost)
        med = k_median_approx(T, k)
        med_opt = brute_force_discrete_median(T, k).against(med.cost)
        print(
            f"{k}  {cen.cost:18.4f}  {cen_opt.optimal_value:8.4f}  {cen_opt.ratio:.4f}"
            f"  {len(med.meta['swaps']):7d}  {med.cost:17.4f}"
            f"  {med_opt.optimal_value:8.4f}  {med_opt.ratio:.4f}"
        )

    # centers need not be input curves: a vertex budget of 2 forces
    # each chosen curve down to a single segment before it serves
    clust = kl_center_approx(T, 3, 2)
    print(f"\nmax-radius cost with 2-vertex centers: {clust.cost:.4f}")
    for c in clust.centers:
        print(f"  center from {c.label!r}: {c.vertices.round(2).tolist()}")


if __name__ == "__main__":
    main()
