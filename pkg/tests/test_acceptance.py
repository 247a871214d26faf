"""Acceptance gate for the package.

Twelve end-to-end checks, one per guarantee the library advertises,
each runnable on a desk machine. Where a guarantee is quantitative the
stated tolerance is asserted literally; where it is asymptotic the
concrete closed-form bound is asserted at the sizes used here. The
slow approximations are compared against the exhaustive oracles, never
against themselves, and every randomized check runs from a fixed seed.
"""

import json
import math
import time

import numpy as np
import pytest

from curveclust import Curve, CurveSet
from curveclust.cli import curvefile_payload, main as cli_main
from curveclust.clustering import PairwiseFrechet, k_center_approx, k_median_approx
from curveclust.coresets import (
    CoresetFailure,
    WeightedCoreset,
    center_coreset_curves,
    center_coreset_segments,
    draw_sample,
    median_coreset,
    sample_size,
    sampling_distribution,
)
from curveclust.frechet import discrete_frechet, frechet_distance
from curveclust.geometry import Motion, align_to_last_axis, centroid, euclidean
from curveclust.oracle import (
    all_center_subsets,
    brute_force_discrete_center,
    brute_force_discrete_median,
    coreset_sandwich_check,
    exhaustive_discrete_frechet,
    means_counterexample,
    random_center_subsets,
)

from util import clustered_curves, clustered_segments, random_curve


def test_01_segment_distance_closed_form():
    # two segments: the distance is the larger endpoint distance
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    for _ in range(1000):
        d = int(rng.integers(1, 4))
        a = Curve(rng.normal(0.0, 5.0, (2, d)))
        b = Curve(rng.normal(0.0, 5.0, (2, d)))
        want = max(euclidean(a.start, b.start), euclidean(a.end, b.end))
        got = frechet_distance(a, b).value
        assert abs(got - want) <= 1e-7
    assert time.perf_counter() - t0 < 10.0


def test_02_discrete_distance_matches_exhaustive_enumeration():
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    for _ in range(500):
        d = int(rng.integers(1, 4))
        a = random_curve(rng, int(rng.integers(1, 7)), d)
        b = random_curve(rng, int(rng.integers(1, 7)), d)
        assert discrete_frechet(a, b) == exhaustive_discrete_frechet(a, b)
    assert time.perf_counter() - t0 < 30.0


def test_03_bracket_ordering_and_discrete_upper_bound():
    rng = np.random.default_rng(103)
    for _ in range(500):
        d = int(rng.integers(1, 4))
        a = random_curve(rng, int(rng.integers(2, 9)), d)
        b = random_curve(rng, int(rng.integers(2, 9)), d)
        r = frechet_distance(a, b)
        assert r.lower <= r.value <= r.upper
        assert r.value <= discrete_frechet(a, b) + 1e-7


def test_04_motions_are_invertible_isometries():
    rng = np.random.default_rng(104)
    for _ in range(10000):
        d = int(rng.integers(1, 6))
        mo = Motion(
            shift=tuple(rng.normal(0.0, 5.0, d)),
            angles=tuple(rng.uniform(-math.pi, math.pi, d - 1)),
        )
        p = rng.normal(0.0, 5.0, d)
        q = rng.normal(0.0, 5.0, d)
        tp, tq = mo.transform(p), mo.transform(q)
        assert abs(euclidean(tp, tq) - euclidean(p, q)) <= 1e-9
        assert euclidean(mo.untransform(tp), p) <= 1e-9
    for _ in range(2000):
        d = int(rng.integers(2, 6))
        v = rng.normal(0.0, 5.0, d)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            continue
        angles, aligned = align_to_last_axis(v)
        assert len(angles) == d - 1
        assert np.abs(aligned[:-1]).max() <= 1e-9 * (1.0 + norm)
        assert aligned[-1] == pytest.approx(norm, rel=1e-12)


def test_05_farthest_first_is_within_three_of_optimum():
    t0 = time.perf_counter()
    rng = np.random.default_rng(105)
    for _ in range(50):
        n = int(rng.integers(4, 11))
        k = int(rng.integers(1, 4))
        T = [random_curve(rng, int(rng.integers(2, 6)), 2) for _ in range(n)]
        approx = k_center_approx(T, k)
        opt = brute_force_discrete_center(T, k).against(approx.cost)
        assert opt.ratio is not None
        assert opt.ratio <= 3.0 + 1e-6
    assert time.perf_counter() - t0 < 60.0


def test_06_local_search_is_within_six_and_stops_swapping():
    t0 = time.perf_counter()
    rng = np.random.default_rng(106)
    for trial in range(50):
        n = int(rng.integers(4, 13))
        k = int(rng.integers(1, 4))
        if trial % 2:
            T = list(clustered_segments(rng, n, 2, k))
        else:
            T = [random_curve(rng, int(rng.integers(2, 5)), 2) for _ in range(n)]
        clust = k_median_approx(T, k)
        assert len(clust.meta["swaps"]) <= 3 * n * k - k
        opt = brute_force_discrete_median(T, k).against(clust.cost)
        if opt.ratio is not None:
            assert opt.ratio <= 6.0 + 1e-6
        else:
            assert clust.cost <= 1e-9
    assert time.perf_counter() - t0 < 120.0


def test_07_segment_grid_coreset_covers_and_sandwiches():
    t0 = time.perf_counter()
    d = 2
    for k in (1, 2, 3):
        rng = np.random.default_rng(200 + k)
        cs = clustered_segments(rng, 200, d, k, jitter=0.5)
        M = PairwiseFrechet(list(cs)).values()
        for eps in (0.25, 0.5):
            core = center_coreset_segments(cs, eps, k)
            radius = core.meta["approx_cost"]
            members = core.meta["member_indices"]
            nearest = M[:, members].min(axis=1)
            assert nearest.max() <= eps * radius / 6.0 + 1e-7
            bound = (2.0 ** (2 * d)) * (6.0 ** (2 * d)) * (d**d) * k / eps ** (2 * d)
            assert len(core) <= min(bound, 200)
            cands = random_center_subsets(200, k, 200, 300 + k)
            rep = coreset_sandwich_check(cs, core, eps, cands, "center", distances=M)
            assert rep.passed and rep.checked == 200
    for k in (1, 2, 3):
        rng = np.random.default_rng(210 + k)
        small = clustered_segments(rng, 12, d, k, jitter=0.4)
        Ms = PairwiseFrechet(list(small)).values()
        for eps in (0.25, 0.5):
            core = center_coreset_segments(small, eps, k)
            rep = coreset_sandwich_check(
                small, core, eps, all_center_subsets(12, k), "center", distances=Ms
            )
            assert rep.passed and rep.checked == math.comb(12, k)
    assert time.perf_counter() - t0 < 120.0


def test_08_curve_grid_coreset_covers_sandwiches_and_declines(tmp_path):
    t0 = time.perf_counter()
    n, m, d, l = 100, 3, 2, 3
    for k in (1, 2):
        rng = np.random.default_rng(220 + k)
        cs = clustered_curves(rng, n, m, d, k, jitter=0.2, step=0.6)
        M = PairwiseFrechet(list(cs)).values()
        for eps in (0.25, 0.5):
            core = center_coreset_curves(cs, eps, k, l)
            assert isinstance(core, WeightedCoreset)
            radius = core.meta["approx_cost"]
            members = core.meta["member_indices"]
            nearest = M[:, members].min(axis=1)
            assert nearest.max() <= eps * radius / 6.0 + 1e-7
            bound = k * (
                2.0 ** (3 * m) * math.sqrt(n) * l ** (12 * d * d * m) / eps ** (d * m)
                + 2.0**m * float(m) ** m
            )
            assert len(core) <= min(bound, n)
            cands = random_center_subsets(n, k, 200, 320 + k)
            rep = coreset_sandwich_check(cs, core, eps, cands, "center", distances=M)
            assert rep.passed and rep.checked == 200

    # negative path: center edges far longer than the clustering radius
    rng = np.random.default_rng(230)
    base = np.array([[0.0, 0.0], [150.0, 0.0], [300.0, 0.0]])
    long_family = CurveSet(
        [Curve(base + rng.normal(0.0, 0.01, (3, 2)), label=f"t{i}") for i in range(6)]
    )
    res = center_coreset_curves(long_family, 0.5, 1, 3)
    assert isinstance(res, CoresetFailure)
    assert res.longest_edge > res.approx_cost
    fam = tmp_path / "long.json"
    fam.write_text(json.dumps(curvefile_payload(long_family)) + "\n")
    code = cli_main(
        ["coreset", "--input", str(fam), "--variant", "center-curves",
         "--epsilon", "0.5", "--k", "1", "--l", "3",
         "--output", str(tmp_path / "core.json")]
    )
    assert code == 3
    assert time.perf_counter() - t0 < 180.0


def test_09_sampling_law_is_valid_and_conservative():
    rng = np.random.default_rng(109)
    for trial in range(20):
        n = int(rng.integers(10, 51))
        k = int(rng.integers(1, 4))
        cs = clustered_segments(rng, n, 2, k, jitter=0.6)
        dist = sampling_distribution(cs, k)
        assert abs(dist.probabilities.sum() - 1.0) <= 1e-9
        M = dist.clustering.meta["distances"]
        for cand in random_center_subsets(n, k, 20, 1000 + trial):
            nearest = M[:, cand].min(axis=1)
            mean_cost = nearest.mean()
            y = nearest / (n * dist.probabilities)
            assert abs(float((dist.probabilities * y).sum()) - mean_cost) <= 1e-9 * (
                1.0 + mean_cost
            )
            var = float((dist.probabilities * (y - mean_cost) ** 2).sum())
            assert var <= (dist.normalizer - 1.0) * mean_cost**2 + 1e-9 * (
                1.0 + mean_cost**2
            )
    # regression pin: scaling by the documented per-curve constant
    # instead of the exact mean sensitivity leaves mass 5/8 at k = 2
    rng = np.random.default_rng(119)
    cs = clustered_segments(rng, 40, 2, 2, jitter=0.8)
    dist = sampling_distribution(cs, 2)
    literal_mass = float((dist.sensitivities / (32.0 * 2.0)).sum()) / 40.0
    assert abs(literal_mass - 5.0 / 8.0) <= 1e-12


def test_10_sampled_median_coreset_sandwiches_most_trials():
    t0 = time.perf_counter()
    n, k, eps, rho = 30, 2, 0.2, 1.0 / 3.0
    rng = np.random.default_rng(110)
    cs = clustered_segments(rng, n, 2, k, jitter=0.6)
    size = sample_size(n, k, eps, rho)
    assert size == 390025
    dist = sampling_distribution(cs, k)
    M = dist.clustering.meta["distances"]
    cands = list(all_center_subsets(n, k))
    assert len(cands) == 435
    nearest_rows = np.stack([M[:, c].min(axis=1) for c in cands])
    full = nearest_rows.sum(axis=1)

    # the aggregated per-input weights below reproduce the packaged
    # construction exactly; verify that once against it
    core0 = median_coreset(cs, eps, k, rho, seed=0)
    idx0 = draw_sample(dist, size, 0)
    assert np.array_equal(core0.meta["member_indices"], idx0)
    assert np.allclose(core0.weights, 1.0 / (size * dist.probabilities[idx0]))

    wins = 0
    for seed in range(30):
        idx = draw_sample(dist, size, seed)
        w = 1.0 / (size * dist.probabilities[idx])
        agg = np.bincount(idx, weights=w, minlength=n)
        est = nearest_rows @ agg
        ok = np.all(np.abs(est - full) <= eps * full + 1e-9 * np.maximum(1.0, full))
        wins += bool(ok)
    assert wins >= 20
    assert time.perf_counter() - t0 < 300.0


def test_11_weighted_estimator_is_unbiased_in_practice():
    rng = np.random.default_rng(111)
    cs = clustered_segments(rng, 20, 2, 2, jitter=0.8)
    dist = sampling_distribution(cs, 2)
    M = dist.clustering.meta["distances"]
    cand = (0, 9)
    nearest = M[:, cand].min(axis=1)
    full = float(nearest.sum())
    trials, block = 10000, 100
    idx = draw_sample(dist, trials * block, 2024)
    vals = nearest[idx] / (block * dist.probabilities[idx])
    estimates = vals.reshape(trials, block).sum(axis=1)
    assert abs(float(estimates.mean()) - full) <= 0.02 * full


def test_12_squared_objective_beats_the_vertex_centroid():
    ex = means_counterexample()
    segs = list(ex.curves)
    for center in (ex.centroid_center, ex.split_center):
        c0, c1 = center.vertices
        # the first two segments peak at their start vertex, the last
        # two at their end vertex, against both candidate centers
        for s in segs[:2]:
            assert euclidean(s.start, c0) >= euclidean(s.end, c1)
        for s in segs[2:]:
            assert euclidean(s.end, c1) >= euclidean(s.start, c0)
    assert not np.allclose(ex.centroid_center.vertices[0], ex.split_center.vertices[0])
    assert not np.allclose(ex.centroid_center.vertices[1], ex.split_center.vertices[1])
    assert ex.centroid_cost == pytest.approx(421.0, abs=1e-6)
    assert ex.split_cost == pytest.approx(400.0, abs=1e-6)
    assert ex.split_cost < ex.centroid_cost

    # and yet the vertex centroid is pointwise optimal for squared sums
    rng = np.random.default_rng(112)
    for _ in range(100):
        pts = rng.normal(0.0, 3.0, (int(rng.integers(2, 12)), int(rng.integers(1, 5))))
        c = centroid(pts)
        base = float(((pts - c) ** 2).sum())
        for _ in range(20):
            alt = c + rng.normal(0.0, 1.0, pts.shape[1])
            assert base <= float(((pts - alt) ** 2).sum()) + 1e-9
