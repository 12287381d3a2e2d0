"""Value types and geometric predicates for the sweep-hull builder.

Everything here is plain data and pure functions. The hot incremental loop in
``hull``/``_kernel`` inlines these formulas for speed; the definitions below
are the reference semantics and are what the tests exercise. Keep the
floating-point evaluation order here in sync with both builders: the engines
are required to produce bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

# Tolerance scale factors. Each multiplies a power of the coordinate scale
# matching the algebraic degree of the guarded expression: cross products are
# degree 2 in the coordinates, plane offsets degree 2 (unnormalized normal
# times length), lifted-determinant circumcircle tests degree 4.
COLLINEAR_EPS_FACTOR = 1e-12
CONTAIN_EPS_FACTOR = 1e-9
CIRCUMCIRCLE_EPS_FACTOR = 1e-9
COPLANAR_BAND_FACTOR = 1e-12

# EdgeRecord slot flags. AC sorts before AB so that a facet's two records for
# the same vertex keep a fixed relative order under the stable sort.
SLOT_AC = 0
SLOT_AB = 1


class FacetState(IntEnum):
    """Lifecycle of a facet in the growing store."""

    DEAD = 0    # struck out; stays in the array until compaction
    LIVE = 1    # part of the current hull surface
    FRESH = 2   # just spawned, rim adjacencies not patched yet


@dataclass
class Point3:
    """A 3D point tagged with its original input index (-1 = unassigned)."""

    x: float
    y: float
    z: float
    id: int = -1

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


@dataclass
class Point2:
    """A 2D site tagged with its original input index (-1 = unassigned)."""

    x: float
    y: float
    id: int = -1

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


@dataclass
class Facet:
    """One triangle of the hull.

    ``a``, ``b``, ``c`` index the builder's point array. ``nab``, ``nac``,
    ``nbc`` name the neighboring facet across the corresponding edge (-1 while
    unassigned). ``(nx, ny, nz)`` is the unnormalized outward normal; its
    magnitude is twice the triangle area, which several consumers rely on.
    """

    id: int
    a: int
    b: int
    c: int
    nab: int = -1
    nac: int = -1
    nbc: int = -1
    nx: float = 0.0
    ny: float = 0.0
    nz: float = 0.0
    state: FacetState = FacetState.LIVE

    def vertices(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def neighbors(self) -> tuple[int, int, int]:
        return (self.nab, self.nac, self.nbc)


@dataclass(frozen=True)
class EdgeRecord:
    """A pending rim adjacency: (facet, one rim vertex, which slot to fill).

    During patching, records are stably sorted by (vertex, slot); adjacent
    equal-vertex records identify the two facets sharing that rim edge.
    """

    vertex: int
    slot: int   # SLOT_AB fills nab, SLOT_AC fills nac
    facet: int

    def key(self) -> tuple[int, int]:
        return (self.vertex, self.slot)


def sort_key(p: Point3) -> tuple[float, float, float]:
    """Sweep order: ascending z, ties by x, then y."""
    return (p.z, p.x, p.y)


def compare_points(p: Point3, q: Point3) -> int:
    """Three-way comparison under the sweep order. Returns -1, 0 or 1."""
    kp, kq = sort_key(p), sort_key(q)
    if kp < kq:
        return -1
    if kp > kq:
        return 1
    return 0


def triangle_normal(a: Point3, b: Point3, c: Point3) -> tuple[float, float, float]:
    """Unnormalized normal (B-A) x (C-A); magnitude is twice the area."""
    ux = b.x - a.x
    uy = b.y - a.y
    uz = b.z - a.z
    vx = c.x - a.x
    vy = c.y - a.y
    vz = c.z - a.z
    return (uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx)


def facet_visibility(facet: Facet, p: Point3, points: Sequence[Point3]) -> float:
    """Signed offset of ``p`` against the facet's plane: (p - A) . n.

    Positive means the facet is visible from ``p`` in the direction of its
    stored normal. Exactly zero is *not* visible; the builder routes coplanar
    points through the flat-growth path instead.
    """
    anchor = points[facet.a]
    return (
        (p.x - anchor.x) * facet.nx
        + (p.y - anchor.y) * facet.ny
        + (p.z - anchor.z) * facet.nz
    )


def cross_test(
    points: Sequence[Point3],
    a: int,
    b: int,
    c: int,
    x: int,
    eps: float = 0.0,
) -> tuple[int, tuple[float, float, float]]:
    """Which side of directed edge A->B (within plane ABC) does X fall on?

    Returns (sign, e) where e = AB x AX. The sign is that of (AB x AC) . e:
    +1 when X lies on C's side of the edge, -1 on the far side, 0 within
    ``eps`` of the edge line. The flat-growth path spawns new facets only for
    sign < 0, and reuses e as the normal of the spawned pair.
    """
    A, B, C, X = points[a], points[b], points[c], points[x]
    abx = B.x - A.x
    aby = B.y - A.y
    abz = B.z - A.z
    acx = C.x - A.x
    acy = C.y - A.y
    acz = C.z - A.z
    axx = X.x - A.x
    axy = X.y - A.y
    axz = X.z - A.z
    ex = aby * axz - abz * axy
    ey = abz * axx - abx * axz
    ez = abx * axy - aby * axx
    kx = aby * acz - abz * acy
    ky = abz * acx - abx * acz
    kz = abx * acy - aby * acx
    globit = kx * ex + ky * ey + kz * ez
    if globit > eps:
        return 1, (ex, ey, ez)
    if globit < -eps:
        return -1, (ex, ey, ez)
    return 0, (ex, ey, ez)


def coordinate_scale(points) -> float:
    """Largest absolute coordinate in the set (0.0 for an empty set)."""
    try:
        import numpy as np

        arr = np.asarray(points, dtype=np.float64)
        if arr.size == 0:
            return 0.0
        return float(np.max(np.abs(arr)))
    except (TypeError, ValueError):
        scale = 0.0
        for p in points:
            scale = max(scale, abs(p.x), abs(p.y), abs(p.z))
        return scale


def collinearity_test(a: Point3, b: Point3, c: Point3, tolerance: float | None = None) -> bool:
    """True when a, b, c span (numerically) no triangle.

    ``tolerance`` bounds the largest cross-product component. ``None`` selects
    the scaled default COLLINEAR_EPS_FACTOR * scale**2; pass 0.0 for the exact
    test the strict-compatibility mode uses.
    """
    nx, ny, nz = triangle_normal(a, b, c)
    if tolerance is None:
        scale = max(abs(a.x), abs(a.y), abs(a.z),
                    abs(b.x), abs(b.y), abs(b.z),
                    abs(c.x), abs(c.y), abs(c.z))
        tolerance = COLLINEAR_EPS_FACTOR * scale * scale
    return max(abs(nx), abs(ny), abs(nz)) <= tolerance
