"""Incremental sweep-hull builder for 3D convex hulls.

Points are sorted ascending by (z, x, y) and inserted one at a time. Each new
point either sees at least one facet of the current hull (the normal case: the
visible set is flood-filled, struck out, and the horizon ring is re-capped
with a fan of fresh facets) or lies in the hull's plane while the "hull" is
still flat (the startup case: a two-sided planar sandwich grows until some
point finally leaves the plane and gives the hull volume).

Struck (DEAD) facets stay in the store untouched until :func:`compact`; facet
ids are therefore stable during the build, and the per-insertion scan can walk
the array newest-to-oldest without an index layer.

Two interchangeable engines implement the loop: this module's pure-python one
(the semantic reference) and the compiled kernel in ``_kernel``. They are held
to bit-identical float64 output; see tests/test_engines.py.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    AllCollinear,
    BrokenHull,
    DegenerateCoplanarSet,
    FirstTripleCollinear,
    NeighborSlotMismatch,
    TooFewPoints,
    UnmatchedEdge,
)
from .geometry import (
    COLLINEAR_EPS_FACTOR,
    COPLANAR_BAND_FACTOR,
    SLOT_AB,
    SLOT_AC,
    Facet,
    FacetState,
    Point3,
)

DEAD = int(FacetState.DEAD)
LIVE = int(FacetState.LIVE)
FRESH = int(FacetState.FRESH)


@dataclass
class InsertionStats:
    """What one insertion did: facets struck out and how far the scan went.

    ``visible`` is 0 for insertions that took the flat-growth path. ``struck``
    carries the struck facet ids when the builder was asked to collect them.
    """

    point_index: int
    visible: int
    scan_length: int
    struck: tuple[int, ...] | None = None


@dataclass
class BuildStats:
    """Per-insertion series for a whole build (insertions 3..n-1, in order)."""

    point_index: np.ndarray
    visible: np.ndarray
    scan_length: np.ndarray
    struck: list[tuple[int, ...]] | None = None

    def mean_visible(self) -> float:
        """Mean visible-set size over insertions that struck anything."""
        hit = self.visible[self.visible > 0]
        return float(hit.mean()) if hit.size else 0.0

    def max_visible(self) -> int:
        return int(self.visible.max()) if self.visible.size else 0

    def mean_scan(self) -> float:
        """Mean facets tested before the first strike (hit insertions only)."""
        hit = self.scan_length[self.visible > 0]
        return float(hit.mean()) if hit.size else 0.0


class HullState:
    """The growing hull: sorted points plus an append-only facet store.

    Facet fields live in parallel lists (fa/fb/fc vertices, nab/nac/nbc
    neighbor ids, nx/ny/nz unnormalized outward normal, fstate lifecycle).
    ``sum_x/y/z`` accumulate inserted coordinates so orientation tests can use
    the running mean as a guaranteed-interior witness once the hull has
    volume; while flat it still breaks the tie correctly because the mean lies
    in the shared plane only when every point does.
    """

    __slots__ = (
        "pxs", "pys", "pzs", "pids",
        "fa", "fb", "fc", "nab", "nac", "nbc", "nx", "ny", "nz", "fstate",
        "sum_x", "sum_y", "sum_z",
        "inserted", "has_volume", "cross_band", "collect_struck",
        "_points_cache",
    )

    def __init__(self, pxs, pys, pzs, pids, cross_band=0.0, collect_struck=False):
        self.pxs = pxs
        self.pys = pys
        self.pzs = pzs
        self.pids = pids
        self.fa: list[int] = []
        self.fb: list[int] = []
        self.fc: list[int] = []
        self.nab: list[int] = []
        self.nac: list[int] = []
        self.nbc: list[int] = []
        self.nx: list[float] = []
        self.ny: list[float] = []
        self.nz: list[float] = []
        self.fstate: list[int] = []
        self.sum_x = (pxs[0] + pxs[1]) + pxs[2]
        self.sum_y = (pys[0] + pys[1]) + pys[2]
        self.sum_z = (pzs[0] + pzs[1]) + pzs[2]
        self.inserted = 3
        self.has_volume = False
        self.cross_band = cross_band
        self.collect_struck = collect_struck
        self._points_cache = None

    # -- read access -------------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.pxs)

    @property
    def n_facets(self) -> int:
        return len(self.fa)

    def point(self, i: int) -> Point3:
        return Point3(float(self.pxs[i]), float(self.pys[i]), float(self.pzs[i]),
                      int(self.pids[i]))

    @property
    def points(self) -> list[Point3]:
        if self._points_cache is None or len(self._points_cache) != len(self.pxs):
            self._points_cache = [self.point(i) for i in range(len(self.pxs))]
        return self._points_cache

    def facet(self, i: int) -> Facet:
        return Facet(
            id=i, a=self.fa[i], b=self.fb[i], c=self.fc[i],
            nab=self.nab[i], nac=self.nac[i], nbc=self.nbc[i],
            nx=float(self.nx[i]), ny=float(self.ny[i]), nz=float(self.nz[i]),
            state=FacetState(self.fstate[i]),
        )

    def facets(self) -> list[Facet]:
        return [self.facet(i) for i in range(len(self.fa))]

    def live_count(self) -> int:
        return sum(1 for s in self.fstate if s == LIVE)

    # -- mutation ----------------------------------------------------------

    def append_facet(self, a, b, c, nab, nac, nbc, nx, ny, nz, state) -> int:
        fid = len(self.fa)
        self.fa.append(a)
        self.fb.append(b)
        self.fc.append(c)
        self.nab.append(nab)
        self.nac.append(nac)
        self.nbc.append(nbc)
        self.nx.append(nx)
        self.ny.append(ny)
        self.nz.append(nz)
        self.fstate.append(state)
        return fid


def _seed_normal(pxs, pys, pzs):
    # (p1 - p0) x (p2 - p0), componentwise; shared by both engines.
    ux = pxs[1] - pxs[0]
    uy = pys[1] - pys[0]
    uz = pzs[1] - pzs[0]
    vx = pxs[2] - pxs[0]
    vy = pys[2] - pys[0]
    vz = pzs[2] - pzs[0]
    return (uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx)


def init_seed(points: Sequence[Point3], *, strict: bool = False,
              cross_band: float = 0.0, collect_struck: bool = False) -> HullState:
    """Seed the hull with two opposite-orientation copies of triangle (0,1,2).

    ``points`` must already be in sweep order. The zero-volume twin pair lets
    the generic machinery run before any point leaves the plane: one twin
    faces each half-space, and each names the other across all three edges.

    Strict mode insists the first three points span a triangle exactly, like
    the reference implementation. Otherwise a toleranced scan finds the first
    point k that is not collinear with points 0 and 1 and moves it to index 2
    (shifting 2..k-1 up one slot). The shifted points stay valid for the sweep
    because sorted collinear points are monotone along their line, so each
    still arrives outside the hull built before it; the state's point order is
    then no longer globally sorted, which downstream consumers must tolerate.
    """
    if len(points) < 4:
        raise TooFewPoints("need at least 4 points", count=len(points))
    pxs = [p.x for p in points]
    pys = [p.y for p in points]
    pzs = [p.z for p in points]
    pids = [p.id for p in points]

    if strict:
        e = _seed_normal(pxs, pys, pzs)
        if e[0] == 0 and e[1] == 0 and e[2] == 0:
            raise FirstTripleCollinear("seed triangle has exact zero area")
    else:
        scale = 0.0
        for vs in (pxs, pys, pzs):
            for v in vs:
                a = abs(v)
                if a > scale:
                    scale = a
        tol = COLLINEAR_EPS_FACTOR * scale * scale
        k = -1
        for j in range(2, len(points)):
            ux = pxs[1] - pxs[0]
            uy = pys[1] - pys[0]
            uz = pzs[1] - pzs[0]
            vx = pxs[j] - pxs[0]
            vy = pys[j] - pys[0]
            vz = pzs[j] - pzs[0]
            ex = uy * vz - uz * vy
            ey = uz * vx - ux * vz
            ez = ux * vy - uy * vx
            if max(abs(ex), abs(ey), abs(ez)) > tol:
                k = j
                break
        if k < 0:
            raise AllCollinear("all points lie on one line", count=len(points))
        if k != 2:
            for vs in (pxs, pys, pzs, pids):
                vs.insert(2, vs.pop(k))

    state = HullState(pxs, pys, pzs, pids,
                      cross_band=cross_band, collect_struck=collect_struck)
    ex, ey, ez = _seed_normal(pxs, pys, pzs)
    state.append_facet(0, 1, 2, 1, 1, 1, ex, ey, ez, LIVE)
    state.append_facet(0, 1, 2, 0, 0, 0, -ex, -ey, -ez, LIVE)
    return state


def insert_point(state: HullState, p: int) -> InsertionStats:
    """Insert sorted point ``p``; the state must hold a hull over points < p.

    Scans facets newest-to-oldest (dead ones included; the scan is what makes
    fresh-first ordering pay off) for the first one visible from ``p``, flood
    fills the visible set across adjacencies, and spawns a fresh facet on every
    horizon edge. New facets get their outward orientation by testing against
    the running mean and their bc-neighbor immediately; ab/ac rim links are
    patched afterwards. If nothing is visible the point is coplanar with a
    still-flat hull and is handed to :func:`add_coplanar`.
    """
    if p != state.inserted:
        raise ValueError(f"points must be inserted in order; expected {state.inserted}, got {p}")
    pxs = state.pxs
    pys = state.pys
    pzs = state.pzs
    fa = state.fa
    fb = state.fb
    fc = state.fc
    nab = state.nab
    nac = state.nac
    nbc = state.nbc
    nxl = state.nx
    nyl = state.ny
    nzl = state.nz
    fstate = state.fstate

    x = pxs[p]
    y = pys[p]
    z = pzs[p]
    state.sum_x += x
    state.sum_y += y
    state.sum_z += z
    count = p + 1
    mx = state.sum_x / count
    my = state.sum_y / count
    mz = state.sum_z / count

    numh = len(fa)
    hvis = -1
    for h in range(numh - 1, -1, -1):
        va = fa[h]
        d = (x - pxs[va]) * nxl[h] + (y - pys[va]) * nyl[h] + (z - pzs[va]) * nzl[h]
        if d > 0.0:
            hvis = h
            fstate[h] = DEAD
            break

    if hvis < 0:
        # Nothing visible: the hull is still flat and p lies in its plane.
        add_coplanar(state, p)
        state.inserted = p + 1
        return InsertionStats(p, 0, numh, () if state.collect_struck else None)

    scan_length = numh - hvis
    xlist = [hvis]
    xi = 0
    while xi < len(xlist):
        xid = xlist[xi]
        xa = fa[xid]
        xb = fb[xid]
        xc = fc[xid]
        for edge in range(3):
            if edge == 0:
                nb = nab[xid]
                ea, eb = xa, xb
            elif edge == 1:
                nb = nac[xid]
                ea, eb = xa, xc
            else:
                nb = nbc[xid]
                ea, eb = xb, xc
            va = fa[nb]
            d = (x - pxs[va]) * nxl[nb] + (y - pys[va]) * nyl[nb] + (z - pzs[va]) * nzl[nb]
            if d > 0.0:
                if fstate[nb] == LIVE:
                    fstate[nb] = DEAD
                    xlist.append(nb)
                continue
            # nb stays: (ea, eb) is a horizon edge; cap it with a fresh facet.
            ux = pxs[ea] - x
            uy = pys[ea] - y
            uz = pzs[ea] - z
            vx = pxs[eb] - x
            vy = pys[eb] - y
            vz = pzs[eb] - z
            ex = uy * vz - uz * vy
            ey = uz * vx - ux * vz
            ez = ux * vy - uy * vx
            if (mx - x) * ex + (my - y) * ey + (mz - z) * ez > 0.0:
                ex = -ex
                ey = -ey
                ez = -ez
            new_id = len(fa)
            if (fa[nb] == ea and fb[nb] == eb) or (fa[nb] == eb and fb[nb] == ea):
                nab[nb] = new_id
            elif (fa[nb] == ea and fc[nb] == eb) or (fa[nb] == eb and fc[nb] == ea):
                nac[nb] = new_id
            elif (fb[nb] == ea and fc[nb] == eb) or (fb[nb] == eb and fc[nb] == ea):
                nbc[nb] = new_id
            else:
                raise NeighborSlotMismatch(
                    "live facet shares no edge with its horizon neighbor",
                    point=p, facet=nb, edge=(ea, eb))
            state.append_facet(p, ea, eb, -1, -1, nb, ex, ey, ez, FRESH)
        xi += 1

    patch_new_adjacencies(state, range(numh, len(fa)))
    state.has_volume = True
    state.inserted = p + 1
    return InsertionStats(p, len(xlist), scan_length,
                          tuple(xlist) if state.collect_struck else None)


def patch_new_adjacencies(state: HullState, fresh_range) -> None:
    """Link the rim (ab/ac) adjacencies of the facets spawned by one insertion.

    All fresh facets share apex ``a``; their unassigned edges are (a, b) and
    (a, c), so the far vertex alone identifies an edge. Two records per facet,
    emitted newest-first, stably sorted by (vertex, slot): equal-vertex records
    land adjacent and are linked pairwise.
    """
    fb = state.fb
    fc = state.fc
    fstate = state.fstate
    lo = fresh_range.start if isinstance(fresh_range, range) else 0
    records: list[tuple[int, int, int]] = []
    for q in range(len(state.fa) - 1, lo - 1, -1):
        if fstate[q] == FRESH:
            records.append((fb[q], SLOT_AB, q))
            records.append((fc[q], SLOT_AC, q))
            fstate[q] = LIVE
    records.sort(key=lambda r: (r[0], r[1]))
    nab = state.nab
    nac = state.nac
    s = 0
    last = len(records) - 1
    while s < last:
        va, slot_a, qa = records[s]
        vb, slot_b, qb = records[s + 1]
        if va == vb:
            if slot_a == SLOT_AB:
                nab[qa] = qb
            else:
                nac[qa] = qb
            if slot_b == SLOT_AB:
                nab[qb] = qa
            else:
                nac[qb] = qa
            s += 1
        s += 1
    for q in fresh_range:
        if nab[q] < 0 or nac[q] < 0:
            raise UnmatchedEdge("fresh facet rim edge found no partner",
                                facet=q, nab=nab[q], nac=nac[q])


def add_coplanar(state: HullState, p: int) -> None:
    """Grow a still-flat hull by a point in its plane.

    The flat hull is a sandwich: every planar triangle exists twice with
    opposite normals. For every boundary edge of the sandwich that ``p`` falls
    strictly outside of, spawn an up/down pair of fresh facets over that edge,
    wire each to the old facet of matching orientation, then patch the
    remaining rim adjacencies. Rim vertices interior to the new fan join four
    fresh facets at once; that junction is disambiguated by normal direction.

    A boundary edge is recognized adjacency-only: across it the sandwich
    neighbor has the same vertex triple (it is the twin, not a lateral
    neighbor). ``state.cross_band`` widens the "on the edge line" verdict for
    robust runs; the reference behavior is the exact band 0.0.
    """
    pxs = state.pxs
    pys = state.pys
    pzs = state.pzs
    fa = state.fa
    fb = state.fb
    fc = state.fc
    nab = state.nab
    nac = state.nac
    nbc = state.nbc
    nxl = state.nx
    nyl = state.ny
    nzl = state.nz
    fstate = state.fstate
    band = state.cross_band

    px = pxs[p]
    py = pys[p]
    pz = pzs[p]

    def spawn(k: int, A: int, B: int, C: int, slot: int) -> None:
        # cross_test against directed edge A->B with C the inside witness
        abx = pxs[B] - pxs[A]
        aby = pys[B] - pys[A]
        abz = pzs[B] - pzs[A]
        acx = pxs[C] - pxs[A]
        acy = pys[C] - pys[A]
        acz = pzs[C] - pzs[A]
        axx = px - pxs[A]
        axy = py - pys[A]
        axz = pz - pzs[A]
        ex = aby * axz - abz * axy
        ey = abz * axx - abx * axz
        ez = abx * axy - aby * axx
        kx = aby * acz - abz * acy
        ky = abz * acx - abx * acz
        kz = abx * acy - aby * acx
        globit = kx * ex + ky * ey + kz * ez
        if globit >= -band:
            return
        up_id = len(fa)
        down_id = up_id + 1
        xx = nxl[k] * ex + nyl[k] * ey + nzl[k] * ez
        if slot == 0:
            old = nab[k]
        elif slot == 1:
            old = nac[k]
        else:
            old = nbc[k]
        if xx > 0.0:
            up_bc, down_bc = k, old
            k_new, old_new = up_id, down_id
        else:
            up_bc, down_bc = old, k
            k_new, old_new = down_id, up_id
        if slot == 0:
            nab[k] = k_new
            nab[old] = old_new
        elif slot == 1:
            nac[k] = k_new
            nac[old] = old_new
        else:
            nbc[k] = k_new
            nbc[old] = old_new
        state.append_facet(p, A, B, -1, -1, up_bc, ex, ey, ez, FRESH)
        state.append_facet(p, A, B, -1, -1, down_bc, -ex, -ey, -ez, FRESH)

    numh = len(fa)
    for k in range(numh):
        j = nab[k]
        if j >= 0 and fc[k] == fc[j]:
            spawn(k, fa[k], fb[k], fc[k], 0)
        j = nbc[k]
        if j >= 0 and fa[k] == fa[j]:
            spawn(k, fb[k], fc[k], fa[k], 2)
        j = nac[k]
        if j >= 0 and fb[k] == fb[j]:
            spawn(k, fa[k], fc[k], fb[k], 1)

    # Patch rim adjacencies of the spawned pairs. Same record scheme as
    # patch_new_adjacencies plus the four-record junction case; two sentinel
    # records guard the lookahead at the end.
    records: list[tuple[int, int, int]] = []
    for q in range(len(fa) - 1, numh - 1, -1):
        if fstate[q] == FRESH:
            records.append((fb[q], SLOT_AB, q))
            records.append((fc[q], SLOT_AC, q))
            fstate[q] = LIVE
    records.sort(key=lambda r: (r[0], r[1]))
    nums = len(records)
    records.append((-1, -1, -1))
    records.append((-2, -2, -2))

    def link(rec, partner_id):
        _, slot, q = rec
        if slot == SLOT_AB:
            nab[q] = partner_id
        else:
            nac[q] = partner_id

    s = 0
    while s < nums - 1:
        if records[s][0] == records[s + 1][0]:
            if records[s][0] != records[s + 2][0]:
                link(records[s], records[s + 1][2])
                link(records[s + 1], records[s][2])
                s += 1
            else:
                # Four records share this vertex: match by sheet orientation.
                s1, s2, s3 = s + 1, s + 2, s + 3
                q0 = records[s][2]
                dot01 = (nxl[q0] * nxl[records[s1][2]] + nyl[q0] * nyl[records[s1][2]]
                         + nzl[q0] * nzl[records[s1][2]])
                if dot01 > 0.0:
                    pass
                else:
                    dot02 = (nxl[q0] * nxl[records[s2][2]] + nyl[q0] * nyl[records[s2][2]]
                             + nzl[q0] * nzl[records[s2][2]])
                    if dot02 > 0.0:
                        s1, s2 = s2, s1
                    else:
                        s1, s3 = s3, s1
                link(records[s], records[s1][2])
                link(records[s1], records[s][2])
                link(records[s2], records[s3][2])
                link(records[s3], records[s2][2])
                s += 3
        s += 1


@dataclass
class RawBuild:
    """Engine output before compaction: full facet arrays, dead rows included."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    ab: np.ndarray
    ac: np.ndarray
    bc: np.ndarray
    nx: np.ndarray
    ny: np.ndarray
    nz: np.ndarray
    state: np.ndarray
    has_volume: bool
    visible: np.ndarray
    scan_length: np.ndarray
    struck: list[tuple[int, ...]] | None = None

    @property
    def n_facets(self) -> int:
        return len(self.a)


def _state_to_raw(state: HullState, visible, scan_length, struck) -> RawBuild:
    return RawBuild(
        a=np.asarray(state.fa, dtype=np.int64),
        b=np.asarray(state.fb, dtype=np.int64),
        c=np.asarray(state.fc, dtype=np.int64),
        ab=np.asarray(state.nab, dtype=np.int64),
        ac=np.asarray(state.nac, dtype=np.int64),
        bc=np.asarray(state.nbc, dtype=np.int64),
        nx=np.asarray(state.nx, dtype=np.float64),
        ny=np.asarray(state.ny, dtype=np.float64),
        nz=np.asarray(state.nz, dtype=np.float64),
        state=np.asarray(state.fstate, dtype=np.int8),
        has_volume=state.has_volume,
        visible=np.asarray(visible, dtype=np.int64),
        scan_length=np.asarray(scan_length, dtype=np.int64),
        struck=struck,
    )


@dataclass
class Triangulation:
    """Compacted triangle soup with adjacency and source bookkeeping.

    ``va/vb/vc`` index rows of ``points``; ``nab/nac/nbc`` index facets (-1 =
    no neighbor, i.e. boundary after filtering). ``source_ids[i]`` is the
    original input index of point row i, and ``removed_ids`` lists inputs the
    de-duplication pass dropped. ``normals`` are unnormalized; for Delaunay
    output they are re-derived after winding canonicalization.
    """

    va: np.ndarray
    vb: np.ndarray
    vc: np.ndarray
    nab: np.ndarray
    nac: np.ndarray
    nbc: np.ndarray
    normals: np.ndarray
    points: np.ndarray
    source_ids: np.ndarray
    removed_ids: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    stats: BuildStats | None = None
    precision: str = "float64"

    def __len__(self) -> int:
        return len(self.va)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def points2d(self) -> np.ndarray:
        return self.points[:, :2]

    def facet(self, i: int) -> Facet:
        return Facet(
            id=i, a=int(self.va[i]), b=int(self.vb[i]), c=int(self.vc[i]),
            nab=int(self.nab[i]), nac=int(self.nac[i]), nbc=int(self.nbc[i]),
            nx=float(self.normals[i, 0]), ny=float(self.normals[i, 1]),
            nz=float(self.normals[i, 2]), state=FacetState.LIVE,
        )

    def __iter__(self):
        return (self.facet(i) for i in range(len(self.va)))

    def edge_set(self) -> set[tuple[int, int]]:
        """Undirected edges as sorted vertex-id pairs."""
        lo = np.minimum
        hi = np.maximum
        pairs = np.concatenate([
            np.stack([lo(self.va, self.vb), hi(self.va, self.vb)], axis=1),
            np.stack([lo(self.va, self.vc), hi(self.va, self.vc)], axis=1),
            np.stack([lo(self.vb, self.vc), hi(self.vb, self.vc)], axis=1),
        ])
        return {(int(u), int(v)) for u, v in pairs}

    def triangle_id_set(self) -> set[tuple[int, int, int]]:
        """Triangles as sorted vertex-id triples (winding-insensitive)."""
        tri = np.sort(np.stack([self.va, self.vb, self.vc], axis=1), axis=1)
        return {tuple(int(v) for v in row) for row in tri}


def compact(
    facets,
    points: np.ndarray | None = None,
    source_ids: np.ndarray | None = None,
    *,
    keep: np.ndarray | None = None,
    dangling: str = "error",
    stats: BuildStats | None = None,
    removed_ids: np.ndarray | None = None,
    precision: str = "float64",
) -> Triangulation:
    """Drop dead/filtered facets, renumber survivors densely, remap neighbors.

    ``facets`` may be a RawBuild, a HullState, or a list of Facet. ``keep``
    defaults to state == LIVE; pass a boolean mask to filter further (the
    Delaunay path keeps only downward facets). ``dangling`` says what a kept
    facet's reference to a dropped neighbor means: "error" raises BrokenHull
    (a full hull must be watertight), "boundary" rewrites it to -1.
    """
    if isinstance(facets, HullState):
        raw = _state_to_raw(facets, [], [], None)
    elif isinstance(facets, RawBuild):
        raw = facets
    else:
        fl = list(facets)
        raw = RawBuild(
            a=np.array([f.a for f in fl], dtype=np.int64),
            b=np.array([f.b for f in fl], dtype=np.int64),
            c=np.array([f.c for f in fl], dtype=np.int64),
            ab=np.array([f.nab for f in fl], dtype=np.int64),
            ac=np.array([f.nac for f in fl], dtype=np.int64),
            bc=np.array([f.nbc for f in fl], dtype=np.int64),
            nx=np.array([f.nx for f in fl], dtype=np.float64),
            ny=np.array([f.ny for f in fl], dtype=np.float64),
            nz=np.array([f.nz for f in fl], dtype=np.float64),
            state=np.array([int(f.state) for f in fl], dtype=np.int8),
            has_volume=True,
            visible=np.empty(0, dtype=np.int64),
            scan_length=np.empty(0, dtype=np.int64),
        )

    if keep is None:
        keep = raw.state == LIVE
    keep = np.asarray(keep, dtype=bool)
    total = raw.n_facets
    kept_idx = np.flatnonzero(keep)
    taken = np.full(total, -1, dtype=np.int64)
    taken[kept_idx] = np.arange(len(kept_idx), dtype=np.int64)

    def remap(col: np.ndarray) -> np.ndarray:
        nb = np.asarray(col[kept_idx], dtype=np.int64)
        out = np.full(len(nb), -1, dtype=np.int64)
        valid = nb >= 0
        out[valid] = taken[nb[valid]]
        if dangling == "error" and (np.any(out < 0) or not np.all(valid)):
            bad = int(kept_idx[np.flatnonzero(out < 0)[0]])
            raise BrokenHull("kept facet references a dropped neighbor", facet=bad)
        return out

    normals = np.stack([
        np.asarray(raw.nx, dtype=np.float64)[kept_idx],
        np.asarray(raw.ny, dtype=np.float64)[kept_idx],
        np.asarray(raw.nz, dtype=np.float64)[kept_idx],
    ], axis=1)

    if points is None:
        points = np.empty((0, 3), dtype=np.float64)
    if source_ids is None:
        source_ids = np.arange(len(points), dtype=np.int64)
    if removed_ids is None:
        removed_ids = np.empty(0, dtype=np.int64)

    return Triangulation(
        va=np.asarray(raw.a, dtype=np.int64)[kept_idx],
        vb=np.asarray(raw.b, dtype=np.int64)[kept_idx],
        vc=np.asarray(raw.c, dtype=np.int64)[kept_idx],
        nab=remap(raw.ab),
        nac=remap(raw.ac),
        nbc=remap(raw.bc),
        normals=normals,
        points=np.asarray(points),
        source_ids=np.asarray(source_ids, dtype=np.int64),
        removed_ids=np.asarray(removed_ids, dtype=np.int64),
        stats=stats,
        precision=precision,
    )


# -- build driver -----------------------------------------------------------


def _as_coord_array(points, precision: str):
    dtype = np.float64 if precision == "float64" else np.float32
    if isinstance(points, np.ndarray):
        coords = np.ascontiguousarray(points, dtype=dtype)
        ids = np.arange(len(coords), dtype=np.int64)
        return coords, ids
    pts = list(points)
    coords = np.empty((len(pts), 3), dtype=dtype)
    ids = np.empty(len(pts), dtype=np.int64)
    for i, p in enumerate(pts):
        coords[i, 0] = p.x
        coords[i, 1] = p.y
        coords[i, 2] = p.z
        ids[i] = p.id if p.id >= 0 else i
    return coords, ids


def _sweep_order(coords: np.ndarray) -> np.ndarray:
    # lexsort's last key is primary: sort by z, then x, then y (all ascending)
    return np.lexsort((coords[:, 1], coords[:, 0], coords[:, 2]))


def _select_seed_third(coords: np.ndarray, strict: bool) -> int:
    """Index of the point to use as the seed triangle's third vertex."""
    if strict:
        # exact test in the working dtype, mirroring the engine's own seed math
        e = np.cross(coords[1] - coords[0], coords[2] - coords[0])
        if e[0] == 0 and e[1] == 0 and e[2] == 0:
            raise FirstTripleCollinear("seed triangle has exact zero area")
        return 2
    p0 = coords[0].astype(np.float64)
    p1 = coords[1].astype(np.float64)
    scale = float(np.max(np.abs(coords))) if coords.size else 0.0
    tol = COLLINEAR_EPS_FACTOR * scale * scale
    u = p1 - p0
    v = coords[2:].astype(np.float64) - p0
    cr = np.cross(np.broadcast_to(u, v.shape), v)
    good = np.max(np.abs(cr), axis=1) > tol
    hits = np.flatnonzero(good)
    if hits.size == 0:
        raise AllCollinear("all points lie on one line", count=len(coords))
    return int(hits[0]) + 2


def _rotate_third(coords: np.ndarray, ids: np.ndarray, k: int):
    if k == 2:
        return coords, ids
    order = np.concatenate([[0, 1, k], np.arange(2, k), np.arange(k + 1, len(coords))])
    return coords[order], ids[order]


def coplanar_band(coords: np.ndarray, strict: bool) -> float:
    """Side-of-edge zero band for flat growth: 0 in strict mode, else scaled.

    The side test is degree 4 in the coordinates (dot of two cross products),
    hence the fourth power.
    """
    if strict:
        return 0.0
    scale = float(np.max(np.abs(coords))) if coords.size else 0.0
    return COPLANAR_BAND_FACTOR * scale ** 4


def _python_build(coords: np.ndarray, ids: np.ndarray, cross_band: float,
                  collect_struck: bool) -> RawBuild:
    """Run the pure-python engine over pre-sorted, seed-rotated coordinates."""
    if coords.dtype == np.float64:
        pxs = coords[:, 0].tolist()
        pys = coords[:, 1].tolist()
        pzs = coords[:, 2].tolist()
    else:
        # keep numpy float32 scalars so arithmetic stays in 32-bit
        pxs = list(coords[:, 0])
        pys = list(coords[:, 1])
        pzs = list(coords[:, 2])
    state = HullState(pxs, pys, pzs, ids.tolist(),
                      cross_band=cross_band, collect_struck=collect_struck)
    ex, ey, ez = _seed_normal(pxs, pys, pzs)
    state.append_facet(0, 1, 2, 1, 1, 1, ex, ey, ez, LIVE)
    state.append_facet(0, 1, 2, 0, 0, 0, -ex, -ey, -ez, LIVE)
    n = len(pxs)
    visible = np.empty(n - 3, dtype=np.int64)
    scan = np.empty(n - 3, dtype=np.int64)
    struck: list[tuple[int, ...]] | None = [] if collect_struck else None
    for p in range(3, n):
        st = insert_point(state, p)
        visible[p - 3] = st.visible
        scan[p - 3] = st.scan_length
        if struck is not None:
            struck.append(st.struck or ())
    return _state_to_raw(state, visible, scan, struck)


def _run_engine(coords, ids, engine: str, cross_band: float, collect_struck: bool) -> RawBuild:
    from . import _engine

    resolved = _engine.resolve(engine)
    if resolved == "compiled" and coords.dtype == np.float64 and not collect_struck:
        kern = _engine.kernel()
        a, b, c, ab, ac, bc, nx, ny, nz, st, has_volume, vis, scan = kern.build_raw(
            np.ascontiguousarray(coords[:, 0]),
            np.ascontiguousarray(coords[:, 1]),
            np.ascontiguousarray(coords[:, 2]),
            cross_band,
        )
        return RawBuild(a=a, b=b, c=c, ab=ab, ac=ac, bc=bc, nx=nx, ny=ny, nz=nz,
                        state=st, has_volume=bool(has_volume),
                        visible=vis, scan_length=scan)
    if engine == "compiled" and coords.dtype != np.float64:
        raise ValueError("the compiled engine only supports float64")
    return _python_build(coords, ids, cross_band, collect_struck)


def raw_pipeline(coords: np.ndarray, ids: np.ndarray, *, strict: bool = False,
                 engine: str = "auto", collect_struck: bool = False):
    """Sort, pick the seed, run an engine. Returns (raw, coords, ids, stats).

    The returned coords/ids are in insertion order (sweep order, possibly with
    the seed's third vertex rotated forward); facet vertex ids index them.
    Shared by :func:`build_hull` and the Delaunay path, which applies its own
    facet filter and so needs the raw, uncompacted build.
    """
    order = _sweep_order(coords)
    coords = coords[order]
    ids = ids[order]
    k = _select_seed_third(coords, strict)
    coords, ids = _rotate_third(coords, ids, k)
    band = coplanar_band(coords, strict)
    raw = _run_engine(coords, ids, engine, band, collect_struck)
    stats = BuildStats(
        point_index=np.arange(3, len(coords), dtype=np.int64),
        visible=raw.visible,
        scan_length=raw.scan_length,
        struck=raw.struck,
    )
    return raw, coords, ids, stats


def build_hull(
    points,
    *,
    strict: bool = False,
    engine: str = "auto",
    precision: str = "float64",
    collect_struck: bool = False,
) -> Triangulation:
    """Convex hull of >= 4 non-coplanar 3D points, already de-duplicated.

    ``points`` is a Point3 sequence or an (n, 3) array. Sorting happens here;
    de-duplication must happen first (``delaunay.dedup``). A duplicate of a
    hull vertex can re-strike an already-dead facet during the insertion scan
    and leave stale adjacencies behind; ``verify.audit_hull`` detects the
    damage, but the build itself will not. ``engine`` is "auto", "python" or
    "compiled"; ``precision`` "float64" or "float32" (python engine only).
    The result is the compacted facet array; every facet's normal points
    outward.
    """
    if precision not in ("float64", "float32"):
        raise ValueError(f"unknown precision {precision!r}")
    coords, ids = _as_coord_array(points, precision)
    if not np.all(np.isfinite(coords)):
        raise ValueError("non-finite coordinate in input")
    if len(coords) < 4:
        raise TooFewPoints("need at least 4 points", count=len(coords))
    raw, coords, ids, stats = raw_pipeline(coords, ids, strict=strict,
                                           engine=engine,
                                           collect_struck=collect_struck)
    pts64 = coords.astype(np.float64, copy=False)
    if not raw.has_volume:
        planar = compact(raw, pts64, ids, dangling="error", stats=stats,
                         precision=precision)
        raise DegenerateCoplanarSet("all points are coplanar; no 3D hull exists",
                                    planar=planar)
    return compact(raw, pts64, ids, dangling="error", stats=stats, precision=precision)
