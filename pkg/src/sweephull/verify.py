"""Independent oracles and structural auditors.

Nothing here shares code with the builder: the brute-force hull enumerates
supporting planes in O(n^4), the circumcircle test evaluates the lifted
determinant directly (with an exact-rational fallback inside a rounding band),
and the audits re-derive every property they check from the output arrays.

On integer-grid inputs every quantity these oracles compare is exact: all
intermediate products stay far below 2**53, so float64 arithmetic introduces
no rounding and set comparisons can use equality with eps=0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    CapExceeded,
    CollinearTriangle,
    DegenerateCoplanarSet,
    TooFewPoints,
)
from .geometry import (
    CIRCUMCIRCLE_EPS_FACTOR,
    COLLINEAR_EPS_FACTOR,
    CONTAIN_EPS_FACTOR,
    Point2,
    Point3,
)
from .hull import Triangulation


@dataclass
class Violation:
    kind: str
    ids: tuple
    magnitude: float = 0.0

    def __str__(self) -> str:
        return f"{self.kind}{self.ids}: {self.magnitude:g}"


@dataclass
class AuditReport:
    """Outcome of a structural audit. Empty ``violations`` means clean."""

    violations: list[Violation] = field(default_factory=list)
    worst_excess: float = 0.0
    euler_ok: bool = True
    adjacency_ok: bool = True
    checked_pairs: int = 0

    @property
    def clean(self) -> bool:
        return not self.violations and self.euler_ok and self.adjacency_ok

    def add(self, kind: str, ids: tuple, magnitude: float = 0.0) -> None:
        self.violations.append(Violation(kind, ids, magnitude))
        if magnitude > self.worst_excess:
            self.worst_excess = magnitude

    def summary(self) -> str:
        state = "clean" if self.clean else f"{len(self.violations)} violation(s)"
        return (f"{state}; worst excess {self.worst_excess:g}; "
                f"euler_ok={self.euler_ok} adjacency_ok={self.adjacency_ok}; "
                f"{self.checked_pairs} pairs checked")


def _as_points3(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return np.asarray(points, dtype=np.float64)
    return np.array([(p.x, p.y, p.z) for p in points], dtype=np.float64)


def _as_points2(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
        return arr[:, :2]
    return np.array([(p.x, p.y) for p in points], dtype=np.float64)


# -- brute-force 3D hull ------------------------------------------------------


@dataclass
class BruteHull:
    """Canonical hull description from exhaustive plane enumeration.

    ``faces`` are plane-support sets: for each supporting plane, the frozenset
    of point ids lying exactly on it (each maximal coplanar face appears once,
    however many triples span it). ``vertices`` are the polytope corners,
    ``boundary`` every point on any face, and ``triangles`` a fan
    triangulation of each face from its sweep-order-smallest corner, wound
    outward.
    """

    faces: set[frozenset[int]]
    vertices: frozenset[int]
    boundary: frozenset[int]
    triangles: list[tuple[int, int, int]]


def brute_hull(points, *, cap: int = 60, eps: float = 0.0) -> BruteHull:
    """O(n^4) convex hull oracle.

    A triple spans a hull plane iff every other point lies weakly on one side.
    ``eps`` widens "on the plane" for float inputs; the default exact test is
    the right one for integer coordinates. Points must be de-duplicated.
    """
    coords = _as_points3(points)
    n = len(coords)
    if n > cap:
        raise CapExceeded("brute_hull is O(n^4)", n=n, cap=cap)
    if n < 4:
        raise TooFewPoints("need at least 4 points", count=n)

    combos = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)
    A = coords[combos[:, 0]]
    normals = np.cross(coords[combos[:, 1]] - A, coords[combos[:, 2]] - A)
    nonzero = np.any(normals != 0.0, axis=1)
    # signed offsets of every point against every triple's plane
    D = normals @ coords.T - np.einsum("ij,ij->i", normals, A)[:, None]
    upper = np.all(D <= eps, axis=1)
    lower = np.all(D >= -eps, axis=1)
    supporting = nonzero & (upper | lower)

    faces: dict[frozenset[int], np.ndarray] = {}
    for t in np.flatnonzero(supporting):
        support = frozenset(np.flatnonzero(np.abs(D[t]) <= eps).tolist())
        if len(support) == n:
            raise DegenerateCoplanarSet("all points are coplanar", count=n)
        if support not in faces:
            # outward normal: flip so the cloud is on the negative side
            faces[support] = normals[t] if upper[t] else -normals[t]

    triangles: list[tuple[int, int, int]] = []
    corners: set[int] = set()
    boundary: set[int] = set()
    for support, outward in sorted(faces.items(), key=lambda kv: sorted(kv[0])):
        boundary.update(support)
        poly = _face_polygon(coords, sorted(support), outward)
        corners.update(poly)
        lo = min(range(len(poly)), key=lambda i: _sweep_key(coords[poly[i]]))
        poly = poly[lo:] + poly[:lo]
        for i in range(1, len(poly) - 1):
            triangles.append((poly[0], poly[i], poly[i + 1]))

    return BruteHull(
        faces=set(faces.keys()),
        vertices=frozenset(corners),
        boundary=frozenset(boundary),
        triangles=triangles,
    )


def _sweep_key(row) -> tuple[float, float, float]:
    return (float(row[2]), float(row[0]), float(row[1]))


def _face_polygon(coords: np.ndarray, support: list[int], outward: np.ndarray) -> list[int]:
    """Corner cycle of one coplanar face, counter-clockwise seen from outside."""
    drop = int(np.argmax(np.abs(outward)))
    keep_axes = [ax for ax in range(3) if ax != drop]
    pts2 = coords[np.asarray(support)][:, keep_axes]
    order = _convex_polygon_ccw(pts2)
    poly = [support[i] for i in order]
    if len(poly) >= 3:
        a, b, c = coords[poly[0]], coords[poly[1]], coords[poly[2]]
        nrm = np.cross(b - a, c - a)
        if float(nrm @ outward) < 0:
            poly.reverse()
    return poly


def _convex_polygon_ccw(pts2: np.ndarray) -> list[int]:
    """Strict 2D hull (no collinear boundary points), CCW, by monotone chain."""
    order = sorted(range(len(pts2)), key=lambda i: (pts2[i, 0], pts2[i, 1]))

    def cross(o, a, b) -> float:
        return ((pts2[a, 0] - pts2[o, 0]) * (pts2[b, 1] - pts2[o, 1])
                - (pts2[a, 1] - pts2[o, 1]) * (pts2[b, 0] - pts2[o, 0]))

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


# -- canonical hull comparison ------------------------------------------------


def facet_support_sets(points, triangles, eps: float = 0.0):
    """Plane-support sets of a triangle list, plus the worst outward excess.

    For every triangle's plane, collect the ids of points exactly on it (within
    ``eps``); a flat patch triangulated into several facets collapses to one
    support set. Also reports how far any point sticks out on the outward side
    (0 for a genuinely supporting plane).
    """
    coords = _as_points3(points)
    supports: set[frozenset[int]] = set()
    worst = 0.0
    for (a, b, c) in triangles:
        A = coords[a]
        nrm = np.cross(coords[b] - A, coords[c] - A)
        d = (coords - A) @ nrm
        hi = float(d.max())
        lo = float(d.min())
        # orient outward: the smaller side overhang is the violation measure
        worst = max(worst, min(hi, -lo))
        supports.add(frozenset(np.flatnonzero(np.abs(d) <= eps).tolist()))
    return supports, worst


def hull_corners_from_supports(supports: set[frozenset[int]]) -> frozenset[int]:
    """Polytope corners: points lying on at least three distinct face planes."""
    count: dict[int, int] = {}
    for s in supports:
        for i in s:
            count[i] = count.get(i, 0) + 1
    return frozenset(i for i, k in count.items() if k >= 3)


@dataclass
class HullComparison:
    ok: bool
    errors: list[str] = field(default_factory=list)


def compare_hull_to_oracle(points, tri: Triangulation, oracle: BruteHull,
                           eps: float = 0.0) -> HullComparison:
    """Equivalence of a built hull against the brute-force oracle.

    Plane-support face sets must match exactly, the corner sets derived from
    them must match, and every vertex the build actually used must lie on the
    oracle's boundary (flat faces may be triangulated through non-corner
    boundary points; that is the only allowed difference).
    """
    errors: list[str] = []
    triangles = list(zip(tri.va.tolist(), tri.vb.tolist(), tri.vc.tolist()))
    supports, worst = facet_support_sets(points, triangles, eps)
    if supports != oracle.faces:
        missing = oracle.faces - supports
        extra = supports - oracle.faces
        errors.append(f"face support sets differ: missing={missing} extra={extra}")
    if worst > eps:
        errors.append(f"a built facet's plane is not supporting (excess {worst:g})")
    built_corners = hull_corners_from_supports(supports)
    if built_corners != oracle.vertices:
        errors.append(
            f"corner sets differ: only_oracle={sorted(oracle.vertices - built_corners)} "
            f"only_built={sorted(built_corners - oracle.vertices)}")
    used = set(tri.va.tolist()) | set(tri.vb.tolist()) | set(tri.vc.tolist())
    if not used <= set(oracle.boundary):
        errors.append(f"built hull uses non-boundary points {sorted(used - set(oracle.boundary))}")
    if not set(oracle.vertices) <= used:
        errors.append(f"built hull omits corners {sorted(set(oracle.vertices) - used)}")
    return HullComparison(ok=not errors, errors=errors)


# -- circumcircle predicate ---------------------------------------------------


def _incircle_det(ax, ay, bx, by, cx, cy, px, py):
    adx = ax - px
    ady = ay - py
    bdx = bx - px
    bdy = by - py
    cdx = cx - px
    cdy = cy - py
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    return (adx * (bdy * cd - bd * cdy)
            - ady * (bdx * cd - bd * cdx)
            + ad * (bdx * cdy - bdy * cdx))


def in_circumcircle(a, b, c, p) -> float:
    """Signed circumcircle test: positive iff p is strictly inside circle(a,b,c).

    Arguments are Point2-like or (x, y) pairs. Evaluated in float64; when the
    result falls inside a magnitude-scaled rounding band it is re-evaluated in
    exact rational arithmetic, so a zero return really means cocircular.
    Winding of (a,b,c) does not affect the sign. Raises CollinearTriangle when
    a, b, c have exactly zero area.
    """
    a, b, c, p = (q if hasattr(q, "x") else Point2(float(q[0]), float(q[1]))
                  for q in (a, b, c, p))
    scale = max(abs(a.x), abs(a.y), abs(b.x), abs(b.y),
                abs(c.x), abs(c.y), abs(p.x), abs(p.y))
    orient = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    orient_band = COLLINEAR_EPS_FACTOR * scale * scale
    if abs(orient) <= orient_band:
        exact_orient = ((Fraction(b.x) - Fraction(a.x)) * (Fraction(c.y) - Fraction(a.y))
                        - (Fraction(b.y) - Fraction(a.y)) * (Fraction(c.x) - Fraction(a.x)))
        if exact_orient == 0:
            raise CollinearTriangle("circumcircle of a zero-area triangle",
                                    a=(a.x, a.y), b=(b.x, b.y), c=(c.x, c.y))
        orient_sign = 1.0 if exact_orient > 0 else -1.0
    else:
        orient_sign = 1.0 if orient > 0 else -1.0

    det = _incircle_det(a.x, a.y, b.x, b.y, c.x, c.y, p.x, p.y)
    band = CIRCUMCIRCLE_EPS_FACTOR * scale ** 4
    if abs(det) <= band:
        exact = _incircle_det(Fraction(a.x), Fraction(a.y), Fraction(b.x), Fraction(b.y),
                              Fraction(c.x), Fraction(c.y), Fraction(p.x), Fraction(p.y))
        if exact == 0:
            return 0.0
        return float(exact) * orient_sign
    return det * orient_sign


# -- 2D hull oracle -----------------------------------------------------------


def hull2d(points2d) -> tuple[list[int], int]:
    """Strict 2D convex hull corners (CCW) and the boundary point count.

    The boundary count includes collinear points lying exactly on hull edges;
    it is the ``h`` in the Delaunay triangle-count identity t = 2u - 2 - h.
    """
    pts = _as_points2(points2d)
    if len(pts) < 3:
        return list(range(len(pts))), len(pts)
    corners = _convex_polygon_ccw(pts)
    corner_set = set(corners)
    on_boundary = set(corners)
    for i in range(len(corners)):
        a = pts[corners[i]]
        b = pts[corners[(i + 1) % len(corners)]]
        e = b - a
        d = pts - a
        cr = e[0] * d[:, 1] - e[1] * d[:, 0]
        t = d @ e
        ee = float(e @ e)
        on_edge = (cr == 0.0) & (t > 0.0) & (t < ee)
        for j in np.flatnonzero(on_edge):
            if int(j) not in corner_set:
                on_boundary.add(int(j))
    return corners, len(on_boundary)


# -- structural audits --------------------------------------------------------


_EDGE_SLOTS = (("nab", "a", "b"), ("nac", "a", "c"), ("nbc", "b", "c"))


def _check_adjacency(tri: Triangulation, report: AuditReport, allow_boundary: bool) -> None:
    va, vb, vc = tri.va, tri.vb, tri.vc
    nbs = {"nab": tri.nab, "nac": tri.nac, "nbc": tri.nbc}
    verts = {"a": va, "b": vb, "c": vc}
    nfac = len(tri)
    for i in range(nfac):
        for slot, e1, e2 in _EDGE_SLOTS:
            g = int(nbs[slot][i])
            if g < 0:
                if not allow_boundary:
                    report.add("open_edge", (i, slot))
                    report.adjacency_ok = False
                continue
            if g >= nfac:
                report.add("bad_neighbor_id", (i, slot, g))
                report.adjacency_ok = False
                continue
            edge = {int(verts[e1][i]), int(verts[e2][i])}
            gverts = {int(va[g]), int(vb[g]), int(vc[g])}
            if not edge <= gverts:
                report.add("edge_vertices_not_shared", (i, slot, g))
                report.adjacency_ok = False
                continue
            back = (int(tri.nab[g]), int(tri.nac[g]), int(tri.nbc[g]))
            gv = (int(va[g]), int(vb[g]), int(vc[g]))
            gedges = ({gv[0], gv[1]}, {gv[0], gv[2]}, {gv[1], gv[2]})
            mutual = any(back[s] == i and gedges[s] == edge for s in range(3))
            if not mutual:
                report.add("adjacency_not_mutual", (i, slot, g))
                report.adjacency_ok = False


def audit_hull(tri: Triangulation, points=None, *, eps: float | None = None,
               eps_factor: float | None = None) -> AuditReport:
    """Structural audit of a closed hull: containment, adjacency, Euler count.

    Containment: no point may lie outside any facet plane by more than
    eps (default CONTAIN_EPS_FACTOR * scale^2; ``eps_factor`` overrides the
    factor). Adjacency: every neighbor reference mutual, across the shared
    edge, no open edges. Euler: F = 2V - 4 for a closed triangulated sphere.
    """
    report = AuditReport()
    coords = _as_points3(points if points is not None else tri.points)
    if len(tri) == 0:
        report.euler_ok = False
        return report
    scale = float(np.max(np.abs(coords))) if coords.size else 0.0
    if eps is None:
        factor = CONTAIN_EPS_FACTOR if eps_factor is None else eps_factor
        eps = factor * scale * scale

    anchors = coords[tri.va]
    offsets = np.einsum("ij,ij->i", tri.normals, anchors)
    # chunk facets so the (facets x points) matrix stays modest
    step = max(1, int(4_000_000 // max(len(coords), 1)))
    worst = -math.inf
    worst_ids = (0, 0)
    for lo in range(0, len(tri), step):
        hi = min(lo + step, len(tri))
        d = tri.normals[lo:hi] @ coords.T - offsets[lo:hi, None]
        report.checked_pairs += d.size
        mx = float(d.max())
        if mx > worst:
            fi, pi = np.unravel_index(np.argmax(d), d.shape)
            worst = mx
            worst_ids = (int(fi) + lo, int(pi))
    if worst > eps:
        report.add("containment", worst_ids, worst)
    report.worst_excess = max(report.worst_excess, worst if worst > eps else 0.0)

    _check_adjacency(tri, report, allow_boundary=False)

    used = np.unique(np.concatenate([tri.va, tri.vb, tri.vc]))
    report.euler_ok = len(tri) == 2 * len(used) - 4
    if not report.euler_ok:
        report.add("euler", (len(tri), len(used)))
    return report


def audit_delaunay(tri: Triangulation, points2d=None, *, eps: float | None = None,
                   eps_factor: float | None = None,
                   pair_cap: int = 40_000_000, sample_seed: int = 1) -> AuditReport:
    """Audit of a Delaunay triangulation.

    Empty-circumcircle: no site strictly inside any triangle's circumcircle
    beyond eps (default CIRCUMCIRCLE_EPS_FACTOR * scale^4); all (triangle,
    site) pairs when their product is within ``pair_cap``, a deterministic
    sample otherwise. Near-zero determinants are confirmed in exact rational
    arithmetic. Also: triangle-count identity t = 2u - 2 - h (reported via
    ``euler_ok``), boundary-edge count equal to h's corner cycle, winding
    consistency, and neighbor mutuality.
    """
    report = AuditReport()
    sites = _as_points2(points2d if points2d is not None else tri.points)
    t = len(tri)
    u = len(sites)
    if t == 0:
        report.euler_ok = False
        return report
    scale = float(np.max(np.abs(sites))) if sites.size else 0.0
    if eps is None:
        factor = CIRCUMCIRCLE_EPS_FACTOR if eps_factor is None else eps_factor
        eps = factor * scale ** 4

    x = sites[:, 0]
    y = sites[:, 1]
    ax, ay = x[tri.va], y[tri.va]
    bx, by = x[tri.vb], y[tri.vb]
    cx, cy = x[tri.vc], y[tri.vc]
    orient = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    for i in np.flatnonzero(orient <= 0.0):
        report.add("winding", (int(i),), float(-orient[i]))

    orient_sign = np.where(orient >= 0.0, 1.0, -1.0)

    if t * u <= pair_cap:
        tri_idx = np.arange(t)
    else:
        # deterministic subsample of triangles; all sites still checked
        rng = np.random.default_rng(sample_seed)
        keep_t = max(1, pair_cap // max(u, 1))
        tri_idx = np.sort(rng.choice(t, size=min(keep_t, t), replace=False))

    step = max(1, int(500_000 // max(u, 1)))
    suspect: list[tuple[int, int]] = []
    for lo in range(0, len(tri_idx), step):
        idx = tri_idx[lo:lo + step]
        adx = ax[idx][:, None] - x[None, :]
        ady = ay[idx][:, None] - y[None, :]
        bdx = bx[idx][:, None] - x[None, :]
        bdy = by[idx][:, None] - y[None, :]
        cdx = cx[idx][:, None] - x[None, :]
        cdy = cy[idx][:, None] - y[None, :]
        ad = adx * adx + ady * ady
        bd = bdx * bdx + bdy * bdy
        cd = cdx * cdx + cdy * cdy
        det = (adx * (bdy * cd - bd * cdy)
               - ady * (bdx * cd - bd * cdx)
               + ad * (bdx * cdy - bdy * cdx))
        det *= orient_sign[idx][:, None]
        report.checked_pairs += det.size
        over = det > eps
        if np.any(over):
            for fi, pi in zip(*np.nonzero(over)):
                suspect.append((int(idx[fi]), int(pi)))

    for fi, pi in suspect:
        pa = Point2(float(x[tri.va[fi]]), float(y[tri.va[fi]]))
        pb = Point2(float(x[tri.vb[fi]]), float(y[tri.vb[fi]]))
        pc = Point2(float(x[tri.vc[fi]]), float(y[tri.vc[fi]]))
        pp = Point2(float(x[pi]), float(y[pi]))
        try:
            val = in_circumcircle(pa, pb, pc, pp)
        except CollinearTriangle:
            # already reported as a winding violation
            continue
        if val > eps:
            report.add("circumcircle", (fi, pi), float(val))

    _check_adjacency(tri, report, allow_boundary=True)

    _, h = hull2d(sites)
    report.euler_ok = t == 2 * u - 2 - h
    if not report.euler_ok:
        report.add("triangle_count", (t, u, h))
    boundary_edges = int((tri.nab < 0).sum() + (tri.nac < 0).sum() + (tri.nbc < 0).sum())
    if boundary_edges != h:
        report.add("boundary_edges", (boundary_edges, h))
        report.adjacency_ok = False
    return report
