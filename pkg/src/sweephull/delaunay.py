"""2D Delaunay triangulation via the paraboloid lift.

Sites (x, y) are lifted to (x, y, x^2 + y^2); the lower surface of the lifted
points' 3D convex hull, projected back down, is exactly the Delaunay
triangulation. "Lower" is decided by the unnormalized facet normal's strict
nz < 0 (an exactly vertical facet belongs to neither surface).

Cocircular inputs make the lifted points coplanar, so the 3D hull never gains
volume. The flat sandwich the builder grows in that situation is still the
right answer: its downward sheet is a valid (non-unique) Delaunay
triangulation, and this module returns it rather than failing.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DegenerateCoplanarSet, LiftOverflow, TooFewPoints
from .geometry import COLLINEAR_EPS_FACTOR, Point2, Point3
from .hull import LIVE, BuildStats, Triangulation, compact, raw_pipeline


def lift(points: Sequence[Point2]) -> list[Point3]:
    """Lift 2D sites onto the paraboloid, preserving ids."""
    out = []
    for p in points:
        z = p.x * p.x + p.y * p.y
        if not math.isfinite(z):
            raise LiftOverflow("x*x + y*y overflowed", id=p.id, x=p.x, y=p.y)
        out.append(Point3(p.x, p.y, z, p.id))
    return out


def dedup(points: Sequence[Point3]) -> tuple[list[Point3], list[int]]:
    """Drop exact duplicates, keeping each run's first point in input order.

    Returns (unique, removed): ``unique`` is sorted in sweep order and re-id'd
    densely 0..u-1; ``removed`` holds the original ids of dropped points, in
    sorted-scan order. Equality is exact coordinate equality; nothing is
    snapped.
    """
    coords = np.array([(p.x, p.y, p.z) for p in points], dtype=np.float64)
    ids = np.array([p.id if p.id >= 0 else i for i, p in enumerate(points)],
                   dtype=np.int64)
    ucoords, usrc, removed = _dedup_arrays(coords, ids)
    unique = [Point3(float(x), float(y), float(z), i)
              for i, (x, y, z) in enumerate(ucoords)]
    return unique, [int(r) for r in removed]


def _dedup_arrays(coords: np.ndarray, ids: np.ndarray):
    """Array-level dedup: returns (sorted unique coords, source ids, removed ids)."""
    if len(coords) == 0:
        return coords, ids, np.empty(0, dtype=np.int64)
    order = np.lexsort((coords[:, 1], coords[:, 0], coords[:, 2]))
    sc = coords[order]
    sids = ids[order]
    keep = np.empty(len(sc), dtype=bool)
    keep[0] = True
    keep[1:] = np.any(sc[1:] != sc[:-1], axis=1)
    return sc[keep], sids[keep], sids[~keep]


def _as_site_array(points, dtype) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(points, np.ndarray):
        coords = np.ascontiguousarray(points, dtype=dtype)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError("expected an (n, 2) site array")
        return coords, np.arange(len(coords), dtype=np.int64)
    pts = list(points)
    coords = np.empty((len(pts), 2), dtype=dtype)
    ids = np.empty(len(pts), dtype=np.int64)
    for i, p in enumerate(pts):
        if isinstance(p, Point2):
            coords[i, 0] = p.x
            coords[i, 1] = p.y
            ids[i] = p.id if p.id >= 0 else i
        else:
            coords[i, 0] = p[0]
            coords[i, 1] = p[1]
            ids[i] = i
    return coords, ids


def _lift_arrays(sites: np.ndarray) -> np.ndarray:
    x = sites[:, 0]
    y = sites[:, 1]
    with np.errstate(over="ignore"):
        z = x * x + y * y
    if not np.all(np.isfinite(z)):
        bad = int(np.flatnonzero(~np.isfinite(z))[0])
        raise LiftOverflow("x*x + y*y overflowed", index=bad)
    return np.stack([x, y, z], axis=1)


def prepare_sites(points, *, precision: str = "float64"):
    """Lift and de-duplicate; everything before the timed triangulation core.

    Returns (lifted unique coords sorted in sweep order, kept source ids,
    removed source ids).
    """
    dtype = np.float64 if precision == "float64" else np.float32
    sites, ids = _as_site_array(points, dtype)
    if not np.all(np.isfinite(sites)):
        raise ValueError("non-finite coordinate in input")
    lifted = _lift_arrays(sites)
    return _dedup_arrays(lifted, ids)


def _collinear_sites(coords: np.ndarray) -> bool:
    """Toleranced all-sites-on-one-line test on lifted (sorted) coordinates."""
    if len(coords) < 3:
        return True
    x = coords[:, 0].astype(np.float64)
    y = coords[:, 1].astype(np.float64)
    scale = max(float(np.max(np.abs(x))), float(np.max(np.abs(y))), 0.0)
    tol = COLLINEAR_EPS_FACTOR * scale * scale
    cr = (x[1] - x[0]) * (y[2:] - y[0]) - (y[1] - y[0]) * (x[2:] - x[0])
    return bool(np.all(np.abs(cr) <= tol))


def _canonicalize_ccw(tri: Triangulation) -> Triangulation:
    """Flip windings so every triangle is counter-clockwise in the plane.

    Swapping b and c renames edge (a,b) to (a,c), so the neighbor slots swap
    with the vertices. Normals are then recomputed from the final vertex
    order (the build stores outward normals, whose sign is independent of the
    stored order), so afterwards every normal is exactly
    (B - A) x (C - A) of the lifted triangle and has nz > 0.
    """
    x = tri.points[:, 0]
    y = tri.points[:, 1]
    ax = x[tri.va]
    ay = y[tri.va]
    area2 = (x[tri.vb] - ax) * (y[tri.vc] - ay) - (y[tri.vb] - ay) * (x[tri.vc] - ax)
    swap = area2 < 0.0
    vb = tri.vb[swap].copy()
    tri.vb[swap] = tri.vc[swap]
    tri.vc[swap] = vb
    nab = tri.nab[swap].copy()
    tri.nab[swap] = tri.nac[swap]
    tri.nac[swap] = nab
    a = tri.points[tri.va]
    tri.normals = np.cross(tri.points[tri.vb] - a, tri.points[tri.vc] - a)
    return tri


def triangulate_prepared(
    lifted: np.ndarray,
    source_ids: np.ndarray,
    removed_ids: np.ndarray,
    *,
    engine: str = "auto",
    strict: bool = False,
    precision: str = "float64",
    collect_struck: bool = False,
) -> Triangulation:
    """Triangulation core over lifted, de-duplicated sites; this is the part
    benchmarks time (sort + hull build + facet filter + compaction)."""
    u = len(lifted)
    if u < 3:
        raise TooFewPoints("need at least 3 distinct sites", count=u)
    if u == 3:
        if _collinear_sites(lifted):
            raise DegenerateCoplanarSet("the 3 distinct sites are collinear")
        return _triangle_only(lifted, source_ids, removed_ids, precision)

    raw, coords, ids, stats = raw_pipeline(lifted, source_ids, strict=strict,
                                           engine=engine,
                                           collect_struck=collect_struck)
    if not raw.has_volume and _collinear_sites(coords):
        raise DegenerateCoplanarSet("all distinct sites are collinear")
    # Downward facets only. Without volume this selects the flat sandwich's
    # lower sheet, which is a valid triangulation of a cocircular site set.
    keep = (raw.state == LIVE) & (np.asarray(raw.nz) < 0.0)
    tri = compact(raw, coords.astype(np.float64, copy=False), ids,
                  keep=keep, dangling="boundary", stats=stats,
                  removed_ids=removed_ids, precision=precision)
    if len(tri) == 0:
        raise DegenerateCoplanarSet("no downward facets survived the filter")
    return _canonicalize_ccw(tri)


def _triangle_only(lifted, source_ids, removed_ids, precision) -> Triangulation:
    pts = lifted.astype(np.float64, copy=False)
    u = pts[1] - pts[0]
    v = pts[2] - pts[0]
    n = np.cross(u, v)
    tri = Triangulation(
        va=np.array([0], dtype=np.int64),
        vb=np.array([1], dtype=np.int64),
        vc=np.array([2], dtype=np.int64),
        nab=np.array([-1], dtype=np.int64),
        nac=np.array([-1], dtype=np.int64),
        nbc=np.array([-1], dtype=np.int64),
        normals=n.reshape(1, 3).astype(np.float64),
        points=pts,
        source_ids=np.asarray(source_ids, dtype=np.int64),
        removed_ids=np.asarray(removed_ids, dtype=np.int64),
        stats=BuildStats(point_index=np.empty(0, dtype=np.int64),
                         visible=np.empty(0, dtype=np.int64),
                         scan_length=np.empty(0, dtype=np.int64)),
        precision=precision,
    )
    return _canonicalize_ccw(tri)


def delaunay_triangulate(
    points,
    *,
    engine: str = "auto",
    strict: bool = False,
    precision: str = "float64",
    collect_struck: bool = False,
) -> Triangulation:
    """Delaunay triangulation of 2D sites (Point2 sequence or (n, 2) array).

    Exact duplicate sites are dropped first (``removed_ids`` on the result
    says which). Raises TooFewPoints below 3 distinct sites and
    DegenerateCoplanarSet when all distinct sites are collinear. The result's
    triangles are wound counter-clockwise; ``nab/nac/nbc`` of -1 marks a
    convex-boundary edge.
    """
    if precision not in ("float64", "float32"):
        raise ValueError(f"unknown precision {precision!r}")
    lifted, source_ids, removed_ids = prepare_sites(points, precision=precision)
    return triangulate_prepared(lifted, source_ids, removed_ids, engine=engine,
                                strict=strict, precision=precision,
                                collect_struck=collect_struck)
