"""Exhaustive reference computations for desk-scale verification.

Everything here trades speed for independence: couplings are
enumerated rather than tabulated, candidate center sets are tried one
by one, and guards reject inputs big enough to make enumeration
dishonest. The fast implementations are tested against these, never
the other way round.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .curves import Curve, CurveSet
from .frechet import DEFAULT_REL_TOL, _vertex_array, frechet_distance
from .clustering import PairwiseFrechet, cost as clustering_cost
from .geometry import centroid, euclidean

__all__ = [
    "GuardError",
    "OracleReport",
    "exhaustive_discrete_frechet",
    "exhaustive_simplify_value",
    "brute_force_discrete_center",
    "brute_force_discrete_median",
    "all_center_subsets",
    "random_center_subsets",
    "SandwichReport",
    "coreset_sandwich_check",
    "MeansCounterexample",
    "means_counterexample",
]

MAX_ORACLE_VERTICES = 7
MAX_ORACLE_CURVES = 14
MAX_ORACLE_K = 3


class GuardError(ValueError):
    """An oracle was asked for more than it can exhaustively enumerate."""


@dataclass
class OracleReport:
    """Optimum found by enumeration, optionally compared with a target."""

    instance: dict
    optimal_value: float
    optimal_argument: tuple
    exact: bool = False
    target_value: float | None = None
    ratio: float | None = None

    def against(self, target: float) -> "OracleReport":
        """Attach a target value; the ratio is left out when the optimum is 0."""
        if self.optimal_value > 0.0:
            return replace(self, target_value=target, ratio=target / self.optimal_value)
        return replace(self, target_value=target, exact=True)


def _coupling_min_max(P, Q) -> float:
    # walk every monotone coupling, tracking the worst pair on the way
    D = np.linalg.norm(P[:, None, :] - Q[None, :, :], axis=-1)
    np_, nq = D.shape
    best = [math.inf]

    def walk(i, j, worst):
        dij = D[i, j]
        if dij > worst:
            worst = dij
        if i == np_ - 1 and j == nq - 1:
            if worst < best[0]:
                best[0] = worst
            return
        if i + 1 < np_:
            walk(i + 1, j, worst)
        if j + 1 < nq:
            walk(i, j + 1, worst)
        if i + 1 < np_ and j + 1 < nq:
            walk(i + 1, j + 1, worst)

    walk(0, 0, 0.0)
    return float(best[0])


def exhaustive_discrete_frechet(p, q) -> float:
    """Discrete distance by direct enumeration of all monotone couplings."""
    P, Q = _vertex_array(p), _vertex_array(q)
    if len(P) > MAX_ORACLE_VERTICES or len(Q) > MAX_ORACLE_VERTICES:
        raise GuardError(
            f"exhaustive coupling enumeration is capped at "
            f"{MAX_ORACLE_VERTICES}x{MAX_ORACLE_VERTICES} vertices"
        )
    if P.shape[1] != Q.shape[1]:
        raise ValueError("dimension mismatch")
    return _coupling_min_max(P, Q)


def exhaustive_simplify_value(curve: Curve, l: int) -> float:
    """Best achievable summary error, trying every qualifying subsequence.

    The inner distances also come from coupling enumeration, so this
    shares nothing with the tabulated implementations it checks. The
    cap keeps the double enumeration honest in time.
    """
    m = len(curve)
    if m > 12 or l > MAX_ORACLE_VERTICES:
        raise GuardError("exhaustive subsequence search is capped at 12 vertices")
    if l < 2:
        raise ValueError("need at least two vertices to keep")
    if m <= l:
        return 0.0
    V = curve.vertices
    best = math.inf
    inner = range(1, m - 1)
    for take in range(min(l, m) - 1):
        for mid in itertools.combinations(inner, take):
            idx = (0,) + mid + (m - 1,)
            val = _coupling_min_max(V[list(idx)], V)
            if val < best:
                best = val
    return best


def _guard_instance(n, k):
    if n > MAX_ORACLE_CURVES or k > MAX_ORACLE_K:
        raise GuardError(
            f"brute force is capped at {MAX_ORACLE_CURVES} curves and k <= {MAX_ORACLE_K}"
        )


def brute_force_discrete_center(T, k: int, rel_tol: float = DEFAULT_REL_TOL) -> OracleReport:
    """Optimal max-radius cost over all k-subsets of input curves."""
    return _brute_force(T, k, "center", rel_tol)


def brute_force_discrete_median(T, k: int, rel_tol: float = DEFAULT_REL_TOL) -> OracleReport:
    """Optimal sum-of-distances cost over all k-subsets of input curves."""
    return _brute_force(T, k, "median", rel_tol)


def _brute_force(T, k, kind, rel_tol):
    curves = list(T)
    n = len(curves)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    _guard_instance(n, k)
    M = PairwiseFrechet(curves, rel_tol).values()
    best = math.inf
    arg = None
    for subset in itertools.combinations(range(n), k):
        nearest = M[:, subset].min(axis=1)
        val = float(nearest.max() if kind == "center" else nearest.sum())
        if val < best:
            best = val
            arg = subset
    return OracleReport(
        instance={"n": n, "k": k, "objective": kind},
        optimal_value=best,
        optimal_argument=arg,
        exact=best == 0.0,
    )


def all_center_subsets(n: int, k: int, limit: int | None = None):
    """All sorted k-subsets of 0..n-1, optionally guarded by a count limit."""
    total = math.comb(n, k)
    if limit is not None and total > limit:
        raise GuardError(f"{total} candidate sets exceed the limit of {limit}")
    return itertools.combinations(range(n), k)


def random_center_subsets(n: int, k: int, count: int, seed) -> list[tuple]:
    """Seeded sample of sorted k-subsets; repeats across draws are possible."""
    rng = np.random.default_rng(seed)
    return [tuple(sorted(rng.choice(n, size=k, replace=False))) for _ in range(count)]


@dataclass
class SandwichReport:
    """Outcome of comparing coreset cost against full cost per candidate."""

    checked: int
    passed: bool
    worst_margin: float
    violations: list = field(default_factory=list)
    records: list = field(default_factory=list)


def coreset_sandwich_check(
    T,
    coreset,
    eps: float,
    candidates,
    kind: str = "center",
    distances: np.ndarray | None = None,
    rel_tol: float = DEFAULT_REL_TOL,
    keep_records: bool = False,
) -> SandwichReport:
    """Check that the coreset cost brackets the full cost for every candidate.

    Candidates are either tuples of input indices or sequences of
    curves. For each one the full cost over ``T`` and the weighted
    coreset cost are compared: the coreset passes when its cost lies
    within (1 +- eps) of the full cost, up to rounding slack. With
    index candidates and a precomputed distance matrix everything is a
    table lookup; otherwise distances are computed on demand.
    """
    if kind not in ("center", "median"):
        raise ValueError("sandwich checks cover the center and median objectives")
    curves = list(T)
    n = len(curves)
    weights = np.asarray(coreset.weights, dtype=float)
    member_idx = coreset.meta.get("member_indices")
    member_idx = None if member_idx is None else np.asarray(member_idx, dtype=int)

    cache: dict[tuple[int, int], float] = {}

    def dist(i, c) -> float:
        # c is an input index when the matrix applies, else a curve
        if distances is not None and isinstance(c, (int, np.integer)):
            return float(distances[i, c])
        key = (i, id(c))
        v = cache.get(key)
        if v is None:
            v = frechet_distance(curves[i], c, rel_tol).value
            cache[key] = v
        return v

    def candidate_costs(cand):
        idx_cand = all(isinstance(c, (int, np.integer)) for c in cand)
        if distances is not None and idx_cand and member_idx is not None:
            cols = distances[:, list(cand)]
            nearest = cols.min(axis=1)
            full = nearest.max() if kind == "center" else nearest.sum()
            core_near = cols[member_idx].min(axis=1)
            core = (
                core_near.max()
                if kind == "center"
                else float(weights @ core_near)
            )
            return float(full), float(core)
        cc = [curves[c] if isinstance(c, (int, np.integer)) else c for c in cand]
        full_near = [min(dist(i, c) for c in cc) for i in range(n)]
        if member_idx is not None and distances is None:
            core_vals = []
            for w, mi in zip(weights, member_idx):
                core_vals.append((w, full_near[mi]))
        else:
            core_vals = []
            for w, member in zip(weights, coreset.members):
                r = min(
                    frechet_distance(member, c, rel_tol).value for c in cc
                )
                core_vals.append((w, r))
        full = max(full_near) if kind == "center" else sum(full_near)
        if kind == "center":
            core = max(v for _, v in core_vals)
        else:
            core = sum(w * v for w, v in core_vals)
        return float(full), float(core)

    worst = -math.inf
    violations = []
    records = []
    checked = 0
    for cand in candidates:
        full, core = candidate_costs(tuple(cand))
        lo = (1.0 - eps) * full
        hi = (1.0 + eps) * full
        slack = 1e-9 * max(1.0, full)
        margin = max(core - hi, lo - core)
        ok = margin <= slack
        if margin > worst:
            worst = margin
        rec = {
            "candidate": tuple(int(c) if isinstance(c, (int, np.integer)) else c for c in cand),
            "full": full,
            "coreset": core,
            "margin": margin,
            "ok": ok,
        }
        if not ok:
            violations.append(rec)
        if keep_records:
            records.append(rec)
        checked += 1
    return SandwichReport(
        checked=checked,
        passed=not violations,
        worst_margin=worst,
        violations=violations,
        records=records,
    )


@dataclass(frozen=True)
class MeansCounterexample:
    """A four-segment family where the per-vertex centroid center loses.

    ``centroid_center`` joins the centroids of all starts and all
    ends; ``split_center`` joins the centroid of the first half's
    starts with the centroid of the second half's ends. The instance
    is built so the split center has strictly smaller summed squared
    distance, with one center allowed.
    """

    curves: CurveSet
    centroid_center: Curve
    split_center: Curve
    centroid_cost: float
    split_cost: float


def means_counterexample(rel_tol: float = DEFAULT_REL_TOL) -> MeansCounterexample:
    """Fixed planar instance separating the two center constructions.

    The construction checks its own structure at runtime: the first
    two segments must attain their distance to either candidate center
    at the start vertex, the other two at the end vertex, and the two
    candidate centers must differ at both vertices. Any violation
    raises, since the cost comparison would then be meaningless.
    """
    segs = CurveSet(
        [
            Curve([[-10.0, 0.0], [0.0, 5.0]], label="left-up"),
            Curve([[10.0, 0.0], [0.0, 5.0]], label="right-up"),
            Curve([[0.0, -5.0], [-9.0, 1.0]], label="down-left"),
            Curve([[0.0, -5.0], [11.0, 1.0]], label="down-right"),
        ]
    )
    first_half = segs.curves[:2]
    second_half = segs.curves[2:]
    mu0 = centroid([c.start for c in segs])
    mu1 = centroid([c.end for c in segs])
    nu0 = centroid([c.start for c in first_half])
    nu1 = centroid([c.end for c in second_half])

    def attains(seg, p0, p1, at_start):
        ds = euclidean(seg.start, p0)
        de = euclidean(seg.end, p1)
        return ds >= de if at_start else de >= ds

    for seg in first_half:
        if not (attains(seg, mu0, mu1, True) and attains(seg, nu0, nu1, True)):
            raise RuntimeError("first-half segment does not peak at its start")
    for seg in second_half:
        if not (attains(seg, mu0, mu1, False) and attains(seg, nu0, nu1, False)):
            raise RuntimeError("second-half segment does not peak at its end")
    if np.allclose(mu0, nu0) or np.allclose(mu1, nu1):
        raise RuntimeError("candidate centers coincide at a vertex")

    centroid_center = Curve(np.vstack([mu0, mu1]), label="centroid")
    split_center = Curve(np.vstack([nu0, nu1]), label="split")
    c_cost = clustering_cost(segs, [centroid_center], "means", rel_tol)
    s_cost = clustering_cost(segs, [split_center], "means", rel_tol)
    return MeansCounterexample(segs, centroid_center, split_center, c_cost, s_cost)
