"""Sensitivity sampling for the sum-of-distances objective.

Shows the sampling law itself, the unbiasedness of the weighted
estimator, and a full sampled coreset replayed against every candidate
center pair of its input.

Run with: python3 demos/median_sampling.py
"""

import numpy as np

from curveclust import Curve, draw_sample, median_coreset, sample_size, sampling_distribution
from curveclust.oracle import all_center_subsets, coreset_sandwich_check


def grouped_segments(rng, n, groups):
    anchors = rng.uniform(-25.0, 25.0, (groups, 2))
    dirs = rng.normal(0.0, 2.0, (groups, 2))
    out = []
    for i in range(n):
        g = i % groups
        a = anchors[g] + rng.normal(0.0, 0.6, 2)
        out.append(Curve(np.vstack([a, anchors[g] + dirs[g] + rng.normal(0.0, 0.6, 2)])))
    return out


def main():
    rng = np.random.default_rng(47)
    n, k = 24, 2
    T = grouped_segments(rng, n, k)

    dist = sampling_distribution(T, k)
    print(f"sampling law over {n} curves, {k} centers")
    print(f"  total mass        {dist.probabilities.sum():.12f}")
    print(f"  mean sensitivity  {dist.normalizer:.1f}")
    print(f"  probability range [{dist.probabilities.min():.5f}, {dist.probabilities.max():.5f}]")

    # the weighted estimator averages to the true cost
    M = dist.clustering.meta["distances"]
    cand = (0, 13)
    nearest = M[:, cand].min(axis=1)
    full = nearest.sum()
    print(f"\ncost of candidate pair {cand}: {full:.4f}")
    print("draws  mean weighted estimate  relative error")
    for block in (10, 100, 1000, 10000):
        idx = draw_sample(dist, block * 200, seed=3)
        vals = nearest[idx] / (block * dist.probabilities[idx])
        est = vals.reshape(200, block).sum(axis=1).mean()
        print(f"{block:5d}  {est:22.4f}  {abs(est - full) / full:14.5f}")

    # the packaged coreset: enough draws for an eps guarantee
    eps = 0.9
    size = sample_size(n, k, eps)
    core = median_coreset(T, eps, k, seed=11)
    cands = list(all_center_subsets(n, k))
    rep = coreset_sandwich_check(T, core, eps, cands, "median", distances=M)
    status = "all pass" if rep.passed else f"{len(rep.violations)} violations"
    print(
        f"\nmedian coreset at eps = {eps}: {size} draws, "
        f"sandwich over all {rep.checked} candidate pairs: {status}"
    )


if __name__ == "__main__":
    main()
