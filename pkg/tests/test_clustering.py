import numpy as np
import pytest

from curveclust import Curve, CurveSet, simplify
from curveclust.clustering import (
    Clustering,
    Objective,
    PairwiseFrechet,
    cost,
    k_center_approx,
    k_median_approx,
    kl_center_approx,
    nearest_center,
)
from curveclust.oracle import (
    brute_force_discrete_center,
    brute_force_discrete_median,
)

from util import clustered_segments, random_curve, random_segments


def test_objective_validation():
    Objective("center", 1, 2)
    with pytest.raises(ValueError):
        Objective("minimax", 1, 2)
    with pytest.raises(ValueError):
        Objective("center", 0, 2)
    with pytest.raises(ValueError):
        Objective("center", 1, 1)


def test_nearest_center_prefers_lowest_index():
    t = Curve([[0.0, 0.0], [1.0, 0.0]])
    centers = [Curve([[0.0, 1.0], [1.0, 1.0]]), Curve([[0.0, -1.0], [1.0, -1.0]])]
    idx, val = nearest_center(t, centers)
    assert idx == 0
    assert val == pytest.approx(1.0, abs=1e-9)
    idx, val = nearest_center(t, [centers[0], t, t])
    assert idx == 1
    assert val == 0.0
    with pytest.raises(ValueError):
        nearest_center(t, [])


def test_cost_kinds():
    a = Curve([[0.0, 0.0], [1.0, 0.0]])
    b = Curve([[0.0, 2.0], [1.0, 2.0]])
    center = Curve([[0.0, 1.0], [1.0, 1.0]])
    assert cost([a, b], [a, b], "center") == 0.0
    assert cost([a, b], [center], "center") == pytest.approx(1.0, abs=1e-9)
    assert cost([a, b], [center], "median") == pytest.approx(2.0, abs=1e-9)
    assert cost([a, b], [center], "means") == pytest.approx(2.0, abs=1e-8)
    with pytest.raises(ValueError):
        cost([a, b], [center], "mode")


def test_pairwise_table():
    rng = np.random.default_rng(2)
    curves = random_segments(rng, 6, 2)
    tb = PairwiseFrechet(curves)
    M = tb.values()
    assert M.shape == (6, 6)
    assert np.allclose(M, M.T)
    assert np.all(np.diag(M) == 0.0)
    r = tb.tighten(0, 1, 1e-12)
    assert r.tolerance <= 1e-12
    assert M[0, 1] == r.value  # the buffer reflects tightening


def test_kl_center_k1_center_is_first_simplified():
    rng = np.random.default_rng(21)
    curves = [random_curve(rng, 6, 2) for _ in range(5)]
    clust = kl_center_approx(curves, 1, 3)
    want = simplify(curves[0], 3)
    assert np.array_equal(clust.centers[0].vertices, want.vertices)
    assert clust.objective == Objective("center", 1, 3)


def test_kl_center_covers_everyone_with_enough_centers():
    rng = np.random.default_rng(22)
    curves = [random_curve(rng, 3, 2) for _ in range(6)]
    clust = kl_center_approx(curves, 6, 3)
    assert clust.cost <= 1e-9
    assert sorted(clust.meta["picked_indices"]) == list(range(6))


def test_kl_center_radii_nonincreasing():
    rng = np.random.default_rng(24)
    cs = clustered_segments(rng, 16, 2, 4)
    clust = kl_center_approx(cs, 4, 2)
    radii = clust.meta["selection_radii"]
    for a, b in zip(radii, radii[1:]):
        assert b <= a + 1e-9
    assert clust.cost <= radii[-1] + 1e-9


def test_k_center_examples():
    rng = np.random.default_rng(25)
    curves = random_segments(rng, 7, 2)
    assert k_center_approx(curves, 7).cost == 0.0
    same = [curves[0]] * 5
    assert k_center_approx(same, 2).cost == 0.0
    with pytest.raises(ValueError):
        k_center_approx(curves, 8)


def test_k_center_within_factor_three():
    rng = np.random.default_rng(26)
    for _ in range(8):
        curves = random_segments(rng, 9, 2)
        k = int(rng.integers(1, 4))
        clust = k_center_approx(curves, k)
        report = brute_force_discrete_center(curves, k).against(clust.cost)
        if not report.exact:
            assert report.ratio <= 3.0 + 1e-9
        assert sorted(set(clust.meta["center_indices"])) == sorted(clust.meta["center_indices"])


def test_k_center_deterministic():
    rng = np.random.default_rng(27)
    curves = random_segments(rng, 10, 3)
    a = k_center_approx(curves, 3)
    b = k_center_approx(curves, 3)
    assert a.meta["center_indices"] == b.meta["center_indices"]
    assert a.assignment == b.assignment
    assert a.cost == b.cost


def test_k_median_seed_already_optimal_means_no_swaps():
    a = Curve([[0.0, 0.0], [1.0, 0.0]])
    b = Curve([[10.0, 0.0], [11.0, 0.0]])
    clust = k_median_approx([a, b, a, b], 2)
    assert clust.cost == 0.0
    assert clust.meta["swaps"] == []


def test_k_median_improves_on_seed_and_stops():
    rng = np.random.default_rng(28)
    cs = clustered_segments(rng, 12, 2, 2, jitter=1.5)
    clust = k_median_approx(cs, 2)
    n, k = 12, 2
    assert clust.cost <= clust.meta["seed_cost"] + 1e-9
    assert len(clust.meta["swaps"]) <= 3 * n * k - k
    # no single swap still beats the threshold
    M = clust.meta["distances"]
    C = clust.meta["center_indices"]
    margin = clust.meta["gamma"] * clust.meta["seed_cost"]
    for c in C:
        others = [x for x in C if x != c]
        for t in range(n):
            if t in C:
                continue
            cand = others + [t]
            cand_cost = M[:, cand].min(axis=1).sum()
            assert clust.cost - margin <= cand_cost + 1e-12


def test_k_median_within_factor_six():
    rng = np.random.default_rng(29)
    for _ in range(6):
        curves = random_segments(rng, 10, 2)
        k = int(rng.integers(1, 4))
        clust = k_median_approx(curves, k)
        report = brute_force_discrete_median(curves, k).against(clust.cost)
        if not report.exact:
            assert report.ratio <= 6.0 + 1e-9


def test_k_median_assignment_consistent():
    rng = np.random.default_rng(30)
    cs = clustered_segments(rng, 10, 3, 2)
    clust = k_median_approx(cs, 2)
    M = clust.meta["distances"]
    C = clust.meta["center_indices"]
    total = sum(M[i, C[a]] for i, a in enumerate(clust.assignment))
    assert clust.cost == pytest.approx(total, abs=1e-9)
    for i, a in enumerate(clust.assignment):
        best = min(M[i, c] for c in C)
        assert M[i, C[a]] <= best + 1e-9


def test_k_median_deterministic():
    rng = np.random.default_rng(31)
    cs = clustered_segments(rng, 11, 2, 3)
    a = k_median_approx(cs, 3)
    b = k_median_approx(cs, 3)
    assert a.meta["center_indices"] == b.meta["center_indices"]
    assert a.meta["swaps"] == b.meta["swaps"]
    assert a.cost == b.cost


def test_k_median_rejects_bad_arguments():
    rng = np.random.default_rng(32)
    curves = random_segments(rng, 4, 2)
    with pytest.raises(ValueError):
        k_median_approx(curves, 5)
    with pytest.raises(ValueError):
        k_median_approx(curves, 2, gamma=0.0)


def test_clustering_dataclass_holds_meta():
    obj = Objective("center", 1, 2)
    cl = Clustering([], [], 0.0, obj)
    assert cl.meta == {}
