"""Clustering of curve families: farthest-first selection and local search.

Two selection strategies cover the three objectives. Farthest-first
picks curves greedily by distance, either summarizing each pick down
to a vertex budget (for the low-complexity max-radius objective) or
keeping it verbatim (for the input-restricted variants). The
sum-of-distances objective then improves the farthest-first seed by
single-center swaps until no swap wins by a margin.

Comparisons between bracketed distances are interval-aware: whenever
brackets overlap enough to make an argmin or argmax ambiguous, the
contenders are re-solved at tighter tolerance before the tie falls
back to the lowest index. Costs and sums always use the midpoint
values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import Curve
from .frechet import DEFAULT_REL_TOL, FrechetResult, frechet_distance, simplify

__all__ = [
    "Objective",
    "Clustering",
    "PairwiseFrechet",
    "nearest_center",
    "cost",
    "kl_center_approx",
    "k_center_approx",
    "k_median_approx",
]

KINDS = ("center", "median", "means")

# tolerance floor for tie refinement; below this we accept the lowest index
_TIE_FLOOR = 1e-12


@dataclass(frozen=True)
class Objective:
    """What a clustering minimizes.

    ``kind`` selects the aggregate: "center" takes the max distance,
    "median" the sum, "means" the sum of squares. ``k`` is the number
    of centers and ``l`` the vertex budget per center; the variants
    whose centers are input curves carry their input complexity here.
    """

    kind: str
    k: int
    l: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.l < 2:
            raise ValueError("l must be at least 2")


@dataclass
class Clustering:
    """Centers plus the induced assignment and its cost."""

    centers: list
    assignment: list
    cost: float
    objective: Objective
    meta: dict = field(default_factory=dict)


def _argmin_results(results, refine=None):
    """Index of the smallest value; near-ties re-solve before index order wins.

    ``results`` is a mutable list of FrechetResult. ``refine(i, tol)``
    recomputes entry i at tolerance ``tol``; the list is updated in
    place so callers see the tightened brackets.
    """
    n = len(results)
    tol = max(r.tolerance for r in results)
    while True:
        best = min(range(n), key=lambda i: (results[i].value, i))
        if refine is None or tol <= _TIE_FLOOR:
            return best
        rivals = [
            i
            for i in range(n)
            if i != best and results[i].lower < results[best].upper
        ]
        if not rivals:
            return best
        tol = max(tol / 10.0, _TIE_FLOOR)
        for i in rivals + [best]:
            results[i] = refine(i, tol)


def _argmax_results(results, refine=None):
    """Index of the largest value, refining overlaps like _argmin_results."""
    n = len(results)
    tol = max(r.tolerance for r in results)
    while True:
        best = max(range(n), key=lambda i: (results[i].value, -i))
        if refine is None or tol <= _TIE_FLOOR:
            return best
        rivals = [
            i
            for i in range(n)
            if i != best and results[i].upper > results[best].lower
        ]
        if not rivals:
            return best
        tol = max(tol / 10.0, _TIE_FLOOR)
        for i in rivals + [best]:
            results[i] = refine(i, tol)


class PairwiseFrechet:
    """Lazily computed symmetric distance table with per-entry tightening.

    Entries are computed on first access at the table's base tolerance
    and can be re-solved tighter later. ``values`` materializes the
    full midpoint matrix; the returned array is the table's own buffer
    and reflects subsequent tightening.
    """

    def __init__(self, curves, rel_tol: float = DEFAULT_REL_TOL):
        self.curves = list(curves)
        self.rel_tol = rel_tol
        self._res: dict[tuple[int, int], FrechetResult] = {}
        self._matrix = None

    def __len__(self):
        return len(self.curves)

    def result(self, i: int, j: int) -> FrechetResult:
        if i == j:
            return FrechetResult(0.0, 0.0, 0.0, self.rel_tol)
        key = (i, j) if i < j else (j, i)
        r = self._res.get(key)
        if r is None:
            r = frechet_distance(self.curves[key[0]], self.curves[key[1]], self.rel_tol)
            self._store(key, r)
        return r

    def value(self, i: int, j: int) -> float:
        return self.result(i, j).value

    def tighten(self, i: int, j: int, tol: float) -> FrechetResult:
        if i == j:
            return FrechetResult(0.0, 0.0, 0.0, tol)
        key = (i, j) if i < j else (j, i)
        r = self._res.get(key)
        if r is None or r.tolerance > tol:
            r = frechet_distance(self.curves[key[0]], self.curves[key[1]], tol)
            self._store(key, r)
        return r

    def _store(self, key, r):
        self._res[key] = r
        if self._matrix is not None:
            self._matrix[key[0], key[1]] = r.value
            self._matrix[key[1], key[0]] = r.value

    def values(self) -> np.ndarray:
        if self._matrix is None:
            n = len(self.curves)
            m = np.zeros((n, n))
            for i in range(n):
                for j in range(i + 1, n):
                    m[i, j] = m[j, i] = self.result(i, j).value
            self._matrix = m
        return self._matrix


def nearest_center(curve, centers, rel_tol: float = DEFAULT_REL_TOL):
    """Index and distance of the closest center, ties to the lowest index."""
    centers = list(centers)
    if not centers:
        raise ValueError("no centers given")
    res = [frechet_distance(curve, c, rel_tol) for c in centers]
    i = _argmin_results(res, lambda j, tol: frechet_distance(curve, centers[j], tol))
    return i, res[i].value


def cost(T, centers, kind: str, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Aggregate distance of every curve to its nearest center."""
    if kind not in KINDS:
        raise ValueError(f"unknown objective kind {kind!r}")
    vals = [nearest_center(t, centers, rel_tol)[1] for t in T]
    if kind == "center":
        return float(max(vals))
    if kind == "median":
        return float(sum(vals))
    return float(sum(v * v for v in vals))


def _farthest_first(curves, k, rel_tol, summarize):
    """Greedy max-distance selection; returns centers and bookkeeping.

    ``summarize`` maps a chosen input curve to the stored center. The
    first center always summarizes curve 0; each later round picks the
    curve farthest from its nearest center.
    """
    n = len(curves)
    centers = [summarize(curves[0])]
    picked = [0]
    radii = []
    # rows[c][i] brackets the distance from curve i to center c
    rows = [[frechet_distance(t, centers[0], rel_tol) for t in curves]]

    def tighten_all(i, tol):
        for c in range(len(centers)):
            r = rows[c][i]
            if r.tolerance > tol:
                rows[c][i] = frechet_distance(curves[i], centers[c], tol)

    def nearest_of(i):
        col = [rows[c][i] for c in range(len(centers))]

        def refine(c, tol):
            r = rows[c][i]
            if r.tolerance > tol:
                rows[c][i] = frechet_distance(curves[i], centers[c], tol)
            return rows[c][i]

        c = _argmin_results(col, refine)
        return c, rows[c][i]

    while True:
        assignment = []
        near = []
        for i in range(n):
            c, r = nearest_of(i)
            assignment.append(c)
            near.append(r)
        if len(centers) == k:
            break

        def refine_far(i, tol):
            tighten_all(i, tol)
            c, r = nearest_of(i)
            assignment[i] = c
            return r

        far = _argmax_results(near, refine_far)
        radii.append(near[far].value)
        centers.append(summarize(curves[far]))
        picked.append(far)
        rows.append([frechet_distance(t, centers[-1], rel_tol) for t in curves])

    worst = _argmax_results(near, lambda i, tol: (tighten_all(i, tol), nearest_of(i)[1])[1])
    radius = near[worst].value
    upper = np.array([r.upper for r in near])
    return centers, picked, radii, assignment, radius, upper


def kl_center_approx(T, k: int, l: int, rel_tol: float = DEFAULT_REL_TOL) -> Clustering:
    """Farthest-first max-radius clustering with centers summarized to ``l`` vertices.

    Every chosen curve is simplified before it becomes a center, so the
    centers have complexity at most ``l`` regardless of the input.
    Ties, both for the nearest center and for the farthest curve, go to
    the lowest input index, which makes the outcome deterministic.
    """
    curves = list(T)
    if not curves:
        raise ValueError("cannot cluster an empty family")
    if k < 1:
        raise ValueError("k must be at least 1")
    centers, picked, radii, assignment, radius, upper = _farthest_first(
        curves, k, rel_tol, lambda c: simplify(c, l)
    )
    meta = {
        "picked_indices": picked,
        "selection_radii": radii,
        "nearest_upper": upper,
        "duplicate_centers": bool(any(r == 0.0 for r in radii)),
    }
    return Clustering(centers, assignment, radius, Objective("center", k, l), meta)


def k_center_approx(T, k: int, rel_tol: float = DEFAULT_REL_TOL) -> Clustering:
    """Farthest-first max-radius clustering with centers drawn from the input."""
    curves = list(T)
    if not curves:
        raise ValueError("cannot cluster an empty family")
    if not 1 <= k <= len(curves):
        raise ValueError(f"k must be in 1..{len(curves)}, got {k}")
    centers, picked, radii, assignment, radius, upper = _farthest_first(
        curves, k, rel_tol, lambda c: c
    )
    l = max(len(c) for c in curves)
    meta = {
        "center_indices": picked,
        "selection_radii": radii,
        "nearest_upper": upper,
    }
    return Clustering(centers, assignment, radius, Objective("center", k, l), meta)


def k_median_approx(
    T, k: int, gamma: float | None = None, rel_tol: float = DEFAULT_REL_TOL
) -> Clustering:
    """Sum-of-distances clustering over input curves by seeded local search.

    Seeds with the farthest-first centers, then repeatedly applies the
    first swap of one center for one non-center that improves the cost
    by more than ``gamma`` times the seed cost. Swap candidates are
    scanned by ascending center index, then ascending replacement
    index, restarting from the top after every swap, so the result is
    deterministic. ``gamma`` defaults to 1/(3 k n).
    """
    curves = list(T)
    n = len(curves)
    if not curves:
        raise ValueError("cannot cluster an empty family")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    if gamma is None:
        gamma = 1.0 / (3.0 * k * n)
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")

    table = PairwiseFrechet(curves, rel_tol)
    M = table.values()

    seed = k_center_approx(curves, k, rel_tol)
    chosen = seed.meta["center_indices"]
    C = sorted(chosen)
    seed_cost = float(M[:, C].min(axis=1).sum())
    margin = gamma * seed_cost
    swaps = []
    cost_now = seed_cost

    while True:
        found = False
        for c in list(C):
            others = [x for x in C if x != c]
            base = M[:, others].min(axis=1) if others else None
            for t in range(n):
                if t in C:
                    continue
                if base is None:
                    cand_cost = float(M[:, t].sum())
                else:
                    cand_cost = float(np.minimum(base, M[:, t]).sum())
                if cost_now - margin > cand_cost:
                    C = sorted(others + [t])
                    cost_now = cand_cost
                    swaps.append((c, t))
                    found = True
                    break
            if found:
                break
        if not found:
            break

    assignment = []
    for i in range(n):
        col = [table.result(i, c) for c in C]
        pos = _argmin_results(col, lambda p, tol, i=i: table.tighten(i, C[p], tol))
        assignment.append(pos)
    final_cost = float(sum(M[i, C[a]] for i, a in enumerate(assignment)))
    l = max(len(c) for c in curves)
    meta = {
        "center_indices": list(C),
        "seed_indices": sorted(chosen),
        "seed_cost": seed_cost,
        "gamma": gamma,
        "swaps": swaps,
        "distances": M,
        "table": table,
    }
    return Clustering(
        [curves[i] for i in C],
        assignment,
        final_cost,
        Objective("median", k, l),
        meta,
    )
