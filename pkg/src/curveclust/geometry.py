"""Low-level geometric primitives: distances, planar rotations, grids.

Points and vectors are plain 1-d float arrays; the distinction between
the two is purely conceptual. Every rotation acts on a pair of adjacent
coordinate axes. Chaining such rotations is enough to align any vector
with the last axis, which is the only alignment the curve machinery
ever needs, so no general rotation matrices appear anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "as_point",
    "euclidean",
    "rotate",
    "translate",
    "axisangle",
    "align_to_last_axis",
    "Motion",
    "Cube",
    "Grid",
    "grid_cell_of",
    "centroid",
]


def as_point(p) -> np.ndarray:
    """Coerce ``p`` to a finite 1-d float array.

    Raises ValueError if the input is empty, not one-dimensional, or
    contains NaN or infinite coordinates.
    """
    q = np.asarray(p, dtype=float)
    if q.ndim != 1 or q.size == 0:
        raise ValueError("a point needs at least one coordinate")
    if not np.isfinite(q).all():
        raise ValueError("coordinates must be finite")
    return q


def euclidean(p, q) -> float:
    """Euclidean distance between two points of equal dimension."""
    p = as_point(p)
    q = as_point(q)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.size} vs {q.size}")
    return float(np.linalg.norm(p - q))


def rotate(p, axis: int, alpha: float) -> np.ndarray:
    """Rotate ``p`` by angle ``alpha`` in the plane of ``axis`` and ``axis + 1``.

    Axes are numbered from 1, so ``axis`` ranges over 1..d-1 and the
    rotation mixes coordinates ``axis`` and ``axis + 1`` while leaving
    all others untouched.
    """
    p = as_point(p)
    d = p.size
    if not 1 <= axis <= d - 1:
        raise ValueError(f"axis must be in 1..{d - 1}, got {axis}")
    i = axis - 1
    c, s = math.cos(alpha), math.sin(alpha)
    q = p.copy()
    q[i] = p[i] * c - p[i + 1] * s
    q[i + 1] = p[i] * s + p[i + 1] * c
    return q


def translate(p, shift) -> np.ndarray:
    """Shift ``p`` by the vector ``shift``."""
    p = as_point(p)
    shift = as_point(shift)
    if p.shape != shift.shape:
        raise ValueError(f"dimension mismatch: {p.size} vs {shift.size}")
    return p + shift


def axisangle(x, axis: int) -> float:
    """Angle whose rotation in the (axis, axis+1) plane zeroes component ``axis``.

    Rotating ``x`` by the returned angle makes coordinate ``axis``
    vanish and coordinate ``axis + 1`` nonnegative; the other
    coordinates are untouched. When ``x`` projects to the origin of
    that plane there is nothing to rotate and the angle is 0. The zero
    vector has no direction at all and is rejected.
    """
    x = as_point(x)
    d = x.size
    if not 1 <= axis <= d - 1:
        raise ValueError(f"axis must be in 1..{d - 1}, got {axis}")
    if not x.any():
        raise ValueError("angle of the zero vector is undefined")
    xi, xj = x[axis - 1], x[axis]
    norm = math.hypot(xi, xj)
    if norm == 0.0:
        return 0.0
    # clamp absorbs rounding when x lies on the plane axis
    ang = math.acos(max(-1.0, min(1.0, xi / norm)))
    if xj >= 0.0:
        return math.pi / 2 - ang
    return math.pi / 2 + ang


def align_to_last_axis(p) -> tuple[list[float], np.ndarray]:
    """Planar rotations taking ``p`` onto the nonnegative last coordinate axis.

    Returns the angle per plane, in application order, together with
    the rotated point. The rotated point has its first d-1 components
    equal to zero up to rounding and its last component equal to the
    norm of ``p``. For d = 1 no rotation exists, so only points that
    already lie on the nonnegative axis are accepted.
    """
    q = as_point(p).copy()
    if not q.any():
        raise ValueError("cannot align the origin")
    if q.size == 1:
        if q[0] < 0.0:
            raise ValueError("cannot align a negative direction in one dimension")
        return [], q
    angles = []
    for axis in range(1, q.size):
        a = axisangle(q, axis)
        angles.append(a)
        q = rotate(q, axis, a)
    return angles, q


@dataclass(frozen=True)
class Motion:
    """A translation followed by planar rotations; an invertible isometry.

    ``transform`` carries world coordinates into the frame the motion
    was built for and ``untransform`` is its exact inverse: first the
    rotations are undone in reverse order, then the shift is removed.
    """

    shift: tuple
    angles: tuple

    def transform(self, p) -> np.ndarray:
        q = translate(p, self.shift)
        for axis, a in enumerate(self.angles, start=1):
            if a != 0.0:
                q = rotate(q, axis, a)
        return q

    def untransform(self, p) -> np.ndarray:
        q = as_point(p).copy()
        for axis in range(len(self.angles), 0, -1):
            a = self.angles[axis - 1]
            if a != 0.0:
                q = rotate(q, axis, -a)
        return q - np.asarray(self.shift, dtype=float)


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube given by its center and edge length."""

    center: tuple
    edge_length: float

    def __post_init__(self):
        if self.edge_length <= 0.0:
            raise ValueError("edge length must be positive")


@dataclass(frozen=True)
class Grid:
    """A cube split into half-open cells of uniform side length.

    Cell ids are d-tuples of nonzero integers relative to the cube
    center: positive index i covers [(i-1)*cell, i*cell) along its
    axis, negative index i covers [i*cell, (i+1)*cell), and the
    outermost positive boundary is closed so the whole cube is
    covered. Index 0 never occurs. An optional motion maps world
    coordinates into the frame the cube lives in, which keeps rotated
    grids symbolic: cells are only ever materialized through lookups.
    """

    cube: Cube
    cell_length: float
    motion: Motion | None = None

    def __post_init__(self):
        if self.cell_length <= 0.0:
            raise ValueError("cell length must be positive")

    @property
    def cells_per_side(self) -> int:
        """Number of cells on each side of the center, per axis."""
        return math.ceil(self.cube.edge_length / (2.0 * self.cell_length))


def grid_cell_of(grid: Grid, p) -> tuple[int, ...] | None:
    """Cell id of ``p`` in ``grid``, or None when ``p`` falls outside.

    The point is first carried into the grid frame by the grid's
    motion, if any. Boundary ties resolve downward by the half-open
    cell convention, except at the outermost positive face which is
    closed.
    """
    q = as_point(p)
    if grid.motion is not None:
        q = grid.motion.transform(q)
    center = np.asarray(grid.cube.center, dtype=float)
    if q.shape != center.shape:
        raise ValueError(f"dimension mismatch: {q.size} vs {center.size}")
    h = grid.cells_per_side
    cell = grid.cell_length
    half = h * cell
    out = []
    for y in q - center:
        if y > half or y < -half:
            return None
        if y >= 0.0:
            i = int(math.floor(y / cell)) + 1
            if i > h:
                i = h  # the outermost positive face is closed
        else:
            i = int(math.floor(y / cell))
            if i < -h:
                i = -h  # division rounding at the negative face
        out.append(i)
    return tuple(out)


def centroid(points) -> np.ndarray:
    """Coordinate-wise mean of a nonempty collection of points."""
    pts = np.atleast_2d(np.asarray(list(points), dtype=float))
    if pts.size == 0:
        raise ValueError("centroid of an empty collection is undefined")
    if pts.ndim != 2:
        raise ValueError("points must share one dimension")
    if not np.isfinite(pts).all():
        raise ValueError("coordinates must be finite")
    return pts.mean(axis=0)
