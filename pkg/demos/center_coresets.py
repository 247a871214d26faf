"""Grid coresets for the max-radius objective, verified by replay.

Builds coresets for a segment family and a curve family, checks the
cost sandwich over random candidate center sets, and walks into the
instance class the curve construction refuses on purpose. Both
families have more planted groups than centers, so the clustering
radius sits at the between-group scale and whole groups collapse into
a handful of grid buckets.

Run with: python3 demos/center_coresets.py
"""

import numpy as np

from curveclust import (
    Curve,
    CoresetFailure,
    center_coreset_curves,
    center_coreset_segments,
)
from curveclust.oracle import coreset_sandwich_check, random_center_subsets


def grouped_segments(rng, n, groups):
    anchors = rng.uniform(-30.0, 30.0, (groups, 2))
    dirs = rng.normal(0.0, 2.0, (groups, 2))
    out = []
    for i in range(n):
        g = i % groups
        a = anchors[g] + rng.normal(0.0, 0.2, 2)
        out.append(Curve(np.vstack([a, anchors[g] + dirs[g] + rng.normal(0.0, 0.2, 2)])))
    return out


def grouped_curves(rng, n, groups, m=3, step=0.6):
    anchors = rng.uniform(-30.0, 30.0, (groups, 2))
    templates = [
        np.vstack([a, a + np.cumsum(rng.normal(0.0, step, (m - 1, 2)), axis=0)])
        for a in anchors
    ]
    return [
        Curve(templates[i % groups] + rng.normal(0.0, 0.1, (m, 2))) for i in range(n)
    ]


def replay(T, core, eps, k, seed):
    cands = random_center_subsets(len(T), k, 100, seed)
    rep = coreset_sandwich_check(T, core, eps, cands, "center")
    status = "all pass" if rep.passed else f"{len(rep.violations)} violations"
    print(
        f"  size {len(core):3d} of {len(T)}   cost sandwich over "
        f"{rep.checked} candidate sets: {status}"
    )


def main():
    rng = np.random.default_rng(31)
    k = 2

    print("segment family, 6 planted groups, 2 centers:")
    segs = grouped_segments(rng, 150, 6)
    for eps in (0.8, 0.4, 0.2):
        core = center_coreset_segments(segs, eps, k)
        print(f"eps = {eps}")
        replay(segs, core, eps, k, seed=1)

    print("\ncurve family with short edges, 6 planted groups, 2 centers:")
    curves = grouped_curves(rng, 120, 6)
    for eps in (0.8, 0.4):
        core = center_coreset_curves(curves, eps, k, l=3)
        print(f"eps = {eps}")
        replay(curves, core, eps, k, seed=2)

    # a family of near-identical curves with very long edges: the
    # bucket budget argument collapses, so the construction declines
    # rather than emit a coreset it cannot vouch for
    print("\nnear-identical curves with 150-unit edges:")
    base = np.array([[0.0, 0.0], [150.0, 0.0], [300.0, 20.0]])
    long_family = [Curve(base + rng.normal(0.0, 0.05, (3, 2))) for _ in range(80)]
    res = center_coreset_curves(long_family, 0.4, 1, l=3)
    if isinstance(res, CoresetFailure):
        print(
            f"  declined: longest center edge {res.longest_edge:.1f} vs "
            f"clustering cost {res.approx_cost:.3f} (budget sqrt(n) = {res.limit:.2f})"
        )


if __name__ == "__main__":
    main()
