"""Pure-python and compiled engines must produce bit-identical output."""

import numpy as np
import pytest

import sweephull as sh
from sweephull import _engine, delaunay, io
from sweephull.hull import build_hull, raw_pipeline

pytestmark = pytest.mark.skipif(
    not sh.compiled_available(), reason="compiled kernel not built")


def lifted_cloud(seed, n, mode="parabola", extent=500.0):
    pts = io.generate_points(n, seed, mode, extent, as_array=True)
    if mode == "square2d" or mode == "parabola":
        return delaunay.prepare_sites(pts[:, :2])
    ids = np.arange(n, dtype=np.int64)
    return delaunay._dedup_arrays(pts, ids)


def assert_raw_equal(r1, r2):
    for field in ("a", "b", "c", "ab", "ac", "bc", "state"):
        assert np.array_equal(np.asarray(getattr(r1, field)),
                              np.asarray(getattr(r2, field))), field
    for field in ("nx", "ny", "nz"):
        v1 = np.asarray(getattr(r1, field), dtype=np.float64)
        v2 = np.asarray(getattr(r2, field), dtype=np.float64)
        assert np.array_equal(v1.view(np.int64), v2.view(np.int64)), field
    assert r1.has_volume == r2.has_volume
    assert np.array_equal(np.asarray(r1.visible), np.asarray(r2.visible))
    assert np.array_equal(np.asarray(r1.scan_length), np.asarray(r2.scan_length))


class TestRawDifferential:
    @pytest.mark.parametrize("mode", ["parabola", "box3d"])
    @pytest.mark.parametrize("seed", [1, 2, 3])
    @pytest.mark.parametrize("n", [10, 100, 2000])
    def test_every_facet_and_normal_bit_equal(self, mode, seed, n):
        coords, ids, removed = lifted_cloud(seed, n, mode)
        r1, c1, i1, s1 = raw_pipeline(coords, ids, engine="python")
        r2, c2, i2, s2 = raw_pipeline(coords, ids, engine="compiled")
        assert np.array_equal(c1.view(np.int64), c2.view(np.int64))
        assert np.array_equal(i1, i2)
        assert_raw_equal(r1, r2)

    def test_integer_grid_exercises_flat_growth(self):
        # grids drive the coplanar cascade and exact-tie paths
        g = np.array([[x, y, 0.0] for x in range(6) for y in range(6)])
        apex = np.array([[2.5, 2.5, 7.0]])
        coords = np.vstack([g, apex])
        ids = np.arange(len(coords), dtype=np.int64)
        r1, c1, _, _ = raw_pipeline(coords, ids, engine="python")
        r2, c2, _, _ = raw_pipeline(coords, ids, engine="compiled")
        assert_raw_equal(r1, r2)

    def test_cocircular_flat_sandwich(self):
        ring = np.array([[5, 0], [4, 3], [3, 4], [0, 5], [-3, 4], [-4, 3],
                         [-5, 0], [-4, -3], [-3, -4], [0, -5], [3, -4],
                         [4, -3]], dtype=float)
        t1 = sh.delaunay_triangulate(ring, engine="python")
        t2 = sh.delaunay_triangulate(ring, engine="compiled")
        for field in ("va", "vb", "vc", "nab", "nac", "nbc", "source_ids"):
            assert np.array_equal(getattr(t1, field), getattr(t2, field)), field
        assert np.array_equal(t1.normals.view(np.int64),
                              t2.normals.view(np.int64))


class TestTriangulationDifferential:
    @pytest.mark.parametrize("seed", [5, 6])
    def test_delaunay_identical(self, seed):
        pts = io.generate_points(3000, seed, "square2d", as_array=True)[:, :2]
        t1 = sh.delaunay_triangulate(pts, engine="python")
        t2 = sh.delaunay_triangulate(pts, engine="compiled")
        assert np.array_equal(t1.points.view(np.int64), t2.points.view(np.int64))
        for field in ("va", "vb", "vc", "nab", "nac", "nbc", "source_ids",
                      "removed_ids"):
            assert np.array_equal(getattr(t1, field), getattr(t2, field)), field
        assert np.array_equal(t1.normals.view(np.int64),
                              t2.normals.view(np.int64))
        assert np.array_equal(t1.stats.visible, t2.stats.visible)
        assert np.array_equal(t1.stats.scan_length, t2.stats.scan_length)

    def test_hull_identical(self):
        pts = io.generate_points(800, 9, "box3d", as_array=True)
        unique, ids, _ = delaunay._dedup_arrays(
            pts, np.arange(len(pts), dtype=np.int64))
        t1 = build_hull(unique, engine="python")
        t2 = build_hull(unique, engine="compiled")
        for field in ("va", "vb", "vc", "nab", "nac", "nbc"):
            assert np.array_equal(getattr(t1, field), getattr(t2, field)), field
        assert np.array_equal(t1.normals.view(np.int64),
                              t2.normals.view(np.int64))


class TestKernelPrimitives:
    def test_integer_stream_matches_python(self):
        kern = _engine.kernel()
        rng = io.Xoshiro256StarStar(12345)
        expected = [rng.next_u64() for _ in range(64)]
        got = kern.rng_u64s(12345, 64)
        assert list(got) == expected

    def test_generate_matches_python_bitwise(self):
        kern = _engine.kernel()
        for mode_idx, mode in enumerate(io.GEN_MODES):
            fast = kern.generate(100, 77, mode_idx, 500.0)
            pure = io._generate_py(100, 77, mode, 500.0)
            assert np.array_equal(np.asarray(fast).view(np.int64),
                                  pure.view(np.int64)), mode


class TestSelection:
    def test_env_var_forces_python_for_auto(self, monkeypatch):
        monkeypatch.setenv("SWEEPHULL_ENGINE", "python")
        assert _engine.resolve("auto") == "python"
        # explicit request still wins
        assert _engine.resolve("compiled") == "compiled"

    def test_env_var_ignored_when_invalid(self, monkeypatch):
        monkeypatch.setenv("SWEEPHULL_ENGINE", "turbo")
        assert _engine.resolve("auto") == "compiled"

    def test_unknown_engine_rejected(self):
        with pytest.raises(ValueError):
            _engine.resolve("fortran")

    def test_float32_requires_python_engine(self):
        pts = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
        with pytest.raises(ValueError):
            sh.delaunay_triangulate(pts, precision="float32", engine="compiled")
