"""Benchmark the compiled insertion kernel against the pure-python builder.

Runs the Delaunay triangulation core on identical generated inputs with both
engines, reports median wall times and the speedup, and asserts that the two
engines produced bit-identical output (vertex ids, adjacency, normals).

Usage:
    python benchmarks/compare_engines.py
    python benchmarks/compare_engines.py --sizes 1000,10000,100000 --repeats 5
"""

import argparse
import sys
import time

import numpy as np

import sweephull as sh
from sweephull import delaunay, io


def median(values):
    vals = sorted(values)
    mid = len(vals) // 2
    return vals[mid] if len(vals) % 2 else 0.5 * (vals[mid - 1] + vals[mid])


def time_engine(lifted, src, removed, engine, repeats):
    walls = []
    tri = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        tri = delaunay.triangulate_prepared(lifted, src, removed, engine=engine)
        walls.append(time.perf_counter() - t0)
    return median(walls), tri


def assert_identical(t1, t2, n):
    for field in ("va", "vb", "vc", "nab", "nac", "nbc", "source_ids"):
        if not np.array_equal(getattr(t1, field), getattr(t2, field)):
            raise AssertionError(f"n={n}: {field} differs between engines")
    if not np.array_equal(t1.normals.view(np.int64), t2.normals.view(np.int64)):
        raise AssertionError(f"n={n}: normals differ between engines")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="1000,10000,100000",
                        help="comma-separated point counts")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--mode", choices=io.GEN_MODES, default="square2d")
    args = parser.parse_args(argv)

    if not sh.compiled_available():
        print("compiled kernel is not built; nothing to compare", file=sys.stderr)
        return 1

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    print(f"mode={args.mode} seed={args.seed} repeats={args.repeats} "
          "(median wall seconds)")
    print(f"{'n':>9}  {'python':>12}  {'compiled':>12}  {'speedup':>8}  output")
    for n in sizes:
        pts = io.generate_points(n, args.seed, args.mode, as_array=True)
        lifted, src, removed = delaunay.prepare_sites(pts[:, :2])
        t_py, tri_py = time_engine(lifted, src, removed, "python", args.repeats)
        t_c, tri_c = time_engine(lifted, src, removed, "compiled", args.repeats)
        assert_identical(tri_py, tri_c, n)
        print(f"{n:9d}  {t_py:12.6g}  {t_c:12.6g}  {t_py / t_c:7.1f}x  identical")
    return 0


if __name__ == "__main__":
    sys.exit(main())
