"""2D Delaunay triangulation through the paraboloid lift."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import sweephull as sh
from sweephull import delaunay, verify
from sweephull.geometry import Point2, Point3


def sites(*xy):
    return np.array(xy, dtype=np.float64)


def tri_set(t):
    return t.triangle_id_set()


class TestLift:
    def test_height_is_squared_distance_from_origin(self):
        lifted = delaunay.lift([Point2(3.0, 4.0, 7), Point2(-1.0, 0.0, 2)])
        assert lifted[0] == Point3(3.0, 4.0, 25.0, 7)
        assert lifted[1] == Point3(-1.0, 0.0, 1.0, 2)

    def test_overflow_raises(self):
        with pytest.raises(sh.LiftOverflow):
            delaunay.lift([Point2(1e200, 0.0, 0)])

    def test_array_overflow_reports_row(self):
        pts = sites((0, 0), (1e200, 0), (1, 0))
        with pytest.raises(sh.LiftOverflow) as ei:
            sh.delaunay_triangulate(pts)
        assert ei.value.context["index"] == 1

    def test_non_finite_site_rejected(self):
        with pytest.raises(ValueError):
            sh.delaunay_triangulate(sites((0, 0), (np.nan, 1), (1, 0)))


class TestDedup:
    def test_exact_duplicates_dropped_first_kept(self):
        pts = [Point3(1.0, 0.0, 1.0, 10), Point3(0.0, 0.0, 0.0, 11),
               Point3(1.0, 0.0, 1.0, 12), Point3(1.0, 0.0, 1.0, 13)]
        unique, removed = delaunay.dedup(pts)
        # unique comes back in sweep order with dense new ids
        assert [(p.x, p.y, p.z) for p in unique] == [(0.0, 0.0, 0.0), (1.0, 0.0, 1.0)]
        assert [p.id for p in unique] == [0, 1]
        assert removed == [12, 13]

    def test_nothing_is_snapped(self):
        a = 1.0
        b = 1.0 + 2 ** -50
        unique, removed = delaunay.dedup(
            [Point3(a, 0.0, 0.0, 0), Point3(b, 0.0, 0.0, 1)])
        assert len(unique) == 2 and removed == []

    def test_array_dedup_records_source_ids(self):
        lifted, kept, removed = delaunay.prepare_sites(
            sites((2, 0), (0, 0), (2, 0), (1, 1)))
        assert lifted[:, 2].tolist() == [0.0, 2.0, 4.0]
        assert kept.tolist() == [1, 3, 0]
        assert removed.tolist() == [2]


class TestUnitSquare:
    """Hand-traced smallest volumed case: 4 sites, 2 triangles.

    The lifted corners sort to (0,0,0), (0,1,1), (1,0,1), (1,1,2). The seed
    sandwich over the first three gains volume at (1,1,2); the lower surface
    is the two triangles sharing the (0,1)-(1,0) diagonal.
    """

    def build(self):
        return sh.delaunay_triangulate(sites((0, 0), (0, 1), (1, 0), (1, 1)))

    def test_lifted_points_in_sweep_order(self):
        t = self.build()
        assert t.points.tolist() == [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 2]]
        assert t.source_ids.tolist() == [0, 1, 2, 3]
        assert t.removed_ids.tolist() == []

    def test_frozen_triangles_and_adjacency(self):
        t = self.build()
        assert t.va.tolist() == [0, 3]
        assert t.vb.tolist() == [2, 1]
        assert t.vc.tolist() == [1, 2]
        # the shared diagonal sits on both bc slots; hull boundary is -1
        assert t.nab.tolist() == [-1, -1]
        assert t.nac.tolist() == [-1, -1]
        assert t.nbc.tolist() == [1, 0]
        assert t.edge_set() == {(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)}
        assert tri_set(t) == {(0, 1, 2), (1, 2, 3)}

    def test_ccw_winding_and_lifted_normals(self):
        t = self.build()
        assert t.normals.tolist() == [[-1, -1, 1], [-1, -1, 1]]
        a = t.points[t.va]
        recomputed = np.cross(t.points[t.vb] - a, t.points[t.vc] - a)
        assert np.array_equal(recomputed, t.normals)
        assert np.all(t.normals[:, 2] > 0)

    def test_audit_clean(self):
        assert verify.audit_delaunay(self.build()).clean


class TestSmallCases:
    def test_three_sites_single_triangle(self):
        t = sh.delaunay_triangulate(sites((0, 0), (2, 0), (0, 2)))
        assert len(t) == 1
        assert t.nab.tolist() == [-1] and t.nac.tolist() == [-1] and t.nbc.tolist() == [-1]
        assert t.normals[0, 2] > 0
        assert verify.audit_delaunay(t).clean

    def test_square_with_center_fans(self):
        # the center lies strictly inside each corner triangle's circumcircle,
        # so every triangle must use it: a fan of 4, the unique answer
        t = sh.delaunay_triangulate(sites((0, 0), (2, 0), (0, 2), (2, 2), (1, 1)))
        assert len(t) == 4
        center = int(np.flatnonzero(
            (t.points[:, 0] == 1) & (t.points[:, 1] == 1))[0])
        assert all(center in tri for tri in tri_set(t))
        assert verify.audit_delaunay(t).clean

    def test_too_few_distinct_sites(self):
        with pytest.raises(sh.TooFewPoints):
            sh.delaunay_triangulate(sites((0, 0), (1, 1)))
        with pytest.raises(sh.TooFewPoints):
            sh.delaunay_triangulate(sites((0, 0), (0, 0), (1, 1), (1, 1)))

    def test_collinear_sites_raise(self):
        with pytest.raises(sh.DegenerateCoplanarSet):
            sh.delaunay_triangulate(sites((0, 0), (1, 1), (2, 2)))
        with pytest.raises(sh.DegenerateCoplanarSet):
            sh.delaunay_triangulate(sites((0, 0), (1, 1), (2, 2), (3, 3)))

    def test_unknown_precision_rejected(self):
        with pytest.raises(ValueError):
            sh.delaunay_triangulate(sites((0, 0), (1, 0), (0, 1)), precision="half")

    def test_point2_list_matches_array_input(self):
        arr = sites((0, 0), (0, 1), (1, 0), (1, 1))
        t1 = sh.delaunay_triangulate(arr)
        t2 = sh.delaunay_triangulate([Point2(x, y) for x, y in arr])
        assert np.array_equal(t1.points, t2.points)
        assert np.array_equal(t1.va, t2.va)
        assert np.array_equal(t1.source_ids, t2.source_ids)


class TestCocircular:
    # 12 integer points with x^2 + y^2 exactly 25: the lift is exactly
    # coplanar, the hull never gains volume, and the flat sandwich's lower
    # sheet is returned as a valid (non-unique) triangulation
    RING = sites((5, 0), (4, 3), (3, 4), (0, 5), (-3, 4), (-4, 3),
                 (-5, 0), (-4, -3), (-3, -4), (0, -5), (3, -4), (4, -3))

    def test_flat_sandwich_lower_sheet(self):
        t = sh.delaunay_triangulate(self.RING)
        corners, h = verify.hull2d(self.RING)
        assert h == 12
        assert len(t) == 2 * 12 - 2 - h == 10
        used = set(t.va.tolist()) | set(t.vb.tolist()) | set(t.vc.tolist())
        assert len(used) == 12
        assert np.all(t.normals[:, 2] > 0)

    def test_audit_accepts_any_cocircular_diagonal(self):
        # every site lies on every circumcircle; the near-zero determinants
        # are confirmed exactly and none counts as a violation
        assert verify.audit_delaunay(sh.delaunay_triangulate(self.RING)).clean

    def test_near_cocircular_corruption_is_detected(self):
        # cos/sin coordinates put the lifted points within ~1e-14 of a plane
        # without being exactly coplanar: the insertion scan (which tests
        # struck facets too, in keeping with the incremental algorithm's
        # original form) can then graft stale cones onto the hull. The audit
        # exists to catch exactly this kind of silent damage.
        ang = np.arange(10) * (2 * np.pi / 10)
        noisy = np.column_stack([5 * np.cos(ang), 5 * np.sin(ang)])
        report = verify.audit_delaunay(sh.delaunay_triangulate(noisy))
        assert not report.clean
        assert "triangle_count" in {v.kind for v in report.violations}


class TestCountIdentity:
    @pytest.mark.parametrize("seed,n", [(1, 30), (2, 120), (3, 500)])
    def test_triangles_match_boundary_formula(self, seed, n):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-100, 100, size=(n, 2))
        t = sh.delaunay_triangulate(pts)
        corners, h = verify.hull2d(pts)
        assert len(t) == 2 * n - 2 - h

    def test_grid_counts_on_edge_points(self):
        # a 4x4 integer grid has 12 boundary points (4 corners + 8 on edges)
        g = np.array([[x, y] for x in range(4) for y in range(4)], dtype=float)
        t = sh.delaunay_triangulate(g)
        corners, h = verify.hull2d(g)
        assert len(corners) == 4 and h == 12
        assert len(t) == 2 * 16 - 2 - 12 == 18
        assert verify.audit_delaunay(t).clean


class TestAgainstIndependentImplementation:
    @pytest.mark.parametrize("seed,n", [(11, 40), (12, 200), (13, 800)])
    def test_same_triangles_as_scipy(self, seed, n):
        scipy_spatial = pytest.importorskip("scipy.spatial")
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-250, 250, size=(n, 2))
        t = sh.delaunay_triangulate(pts)
        # map row ids back to input ids before comparing
        src = t.source_ids
        ours = {tuple(sorted((int(src[a]), int(src[b]), int(src[c]))))
                for a, b, c in zip(t.va, t.vb, t.vc)}
        ref = scipy_spatial.Delaunay(pts)
        theirs = {tuple(sorted(int(v) for v in s)) for s in ref.simplices}
        assert ours == theirs


class TestDeterminism:
    def test_shuffle_invariance(self):
        rng = np.random.default_rng(77)
        pts = rng.uniform(-50, 50, size=(64, 2))
        t1 = sh.delaunay_triangulate(pts)
        perm = rng.permutation(64)
        t2 = sh.delaunay_triangulate(pts[perm])
        # sweep sorting makes the result independent of input order
        assert np.array_equal(t1.points, t2.points)
        for field in ("va", "vb", "vc", "nab", "nac", "nbc"):
            assert np.array_equal(getattr(t1, field), getattr(t2, field))
        assert np.array_equal(t1.normals, t2.normals)
        # source ids translate back through the permutation
        assert np.array_equal(perm[t2.source_ids], t1.source_ids)

    def test_repeat_runs_bit_identical(self):
        rng = np.random.default_rng(5)
        pts = rng.uniform(-50, 50, size=(100, 2))
        t1 = sh.delaunay_triangulate(pts)
        t2 = sh.delaunay_triangulate(pts)
        assert np.array_equal(t1.normals.view(np.int64), t2.normals.view(np.int64))
        assert np.array_equal(t1.va, t2.va)


class TestStatsAndPrecision:
    def test_insertion_series_present(self):
        rng = np.random.default_rng(9)
        pts = rng.uniform(-10, 10, size=(40, 2))
        t = sh.delaunay_triangulate(pts)
        assert len(t.stats.visible) == 40 - 3
        assert len(t.stats.scan_length) == 40 - 3
        assert t.stats.point_index.tolist() == list(range(3, 40))
        assert np.all(t.stats.visible >= 1)

    def test_float32_runs_on_python_engine(self):
        rng = np.random.default_rng(9)
        pts = rng.uniform(-10, 10, size=(40, 2))
        t = sh.delaunay_triangulate(pts, precision="float32", engine="python")
        assert t.precision == "float32"
        assert verify.audit_delaunay(t, eps_factor=1e-4).clean


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1),
       st.integers(min_value=4, max_value=120))
def test_random_sites_always_audit_clean(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-100, 100, size=(n, 2))
    t = sh.delaunay_triangulate(pts)
    assert verify.audit_delaunay(t).clean


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1),
       st.integers(min_value=3, max_value=9))
def test_integer_grid_sites_audit_clean(seed, k):
    # low-coordinate integer sites maximize exact cocircular subsets, which
    # drives the flat-growth and exact-tie paths hard
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, k, size=(30, 2)).astype(np.float64)
    unique = np.unique(pts, axis=0)
    try:
        t = sh.delaunay_triangulate(pts)
    except sh.TooFewPoints:
        assert len(unique) < 3
        return
    except sh.DegenerateCoplanarSet:
        # only an all-collinear draw may end here
        d = unique - unique[0]
        assert np.all(d[:, 0] * d[1, 1] == d[:, 1] * d[1, 0])
        return
    assert verify.audit_delaunay(t).clean
