"""Command-line front end.

Subcommands: delaunay, hull3d, gen, verify, stats, bench. Data flows through
the library modules; this layer only parses arguments, times the triangulation
core (and nothing else, matching where the reference driver put its timer),
and maps structured errors to exit codes: 0 success, 1 domain error or audit
violation, 2 usage or file-format problems.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from . import _engine, delaunay, hull, io, verify
from .errors import EmptyInput, FormatError, SweepHullError

CSV_HEADER = "n,seed,mode,wall_s,facets,mean_visible,max_visible,scan_mean"
INSERTION_HEADER = "n,seed,point_index,visible,scan_length"


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _contain_eps_factor() -> float | None:
    raw = os.environ.get("NAW_EPSILON")
    if raw is None:
        return None
    return float(raw)  # caller converts ValueError to exit 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sweephull",
        description="Sweep-hull 3D convex hulls and 2D Delaunay triangulations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, gen_default_mode):
        p.add_argument("input", nargs="?", help="points file (omit when using --gen)")
        p.add_argument("--gen", type=int, metavar="N", help="generate N points instead of reading")
        p.add_argument("--seed", type=int, default=1, help="PRNG seed for --gen (default 1)")
        p.add_argument("--mode", choices=io.GEN_MODES, default=gen_default_mode,
                       help=f"point distribution for --gen (default {gen_default_mode})")
        p.add_argument("--range", type=float, default=500.0, dest="extent",
                       help="coordinate range for --gen, centered on 0 (default 500)")
        p.add_argument("-o", "--output", default="triangles.mat",
                       help="triangles file to write (default triangles.mat)")
        p.add_argument("--points-out", metavar="PATH",
                       help="also write the de-duplicated point array the "
                            "triangle ids index")
        p.add_argument("--compat-precision", action="store_true",
                       help="write points with the reference's 6-digit formatting")
        p.add_argument("--strict-compat", action="store_true",
                       help="reproduce reference failure modes on degenerate seeds "
                            "instead of recovering")
        p.add_argument("--engine", choices=("auto", "python", "compiled"), default="auto")
        p.add_argument("--precision", choices=("float64", "float32"), default="float64")

    p = sub.add_parser("delaunay", help="Delaunay-triangulate 2D sites")
    add_common(p, "square2d")
    p.add_argument("--svg", metavar="PATH", help="also plot the edges to an SVG file")
    p.set_defaults(func=cmd_delaunay)

    p = sub.add_parser("hull3d", help="3D convex hull of a point cloud")
    add_common(p, "box3d")
    p.set_defaults(func=cmd_hull3d)

    p = sub.add_parser("gen", help="generate a deterministic random points file")
    p.add_argument("n", type=int)
    p.add_argument("output")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--mode", choices=io.GEN_MODES, default="square2d")
    p.add_argument("--range", type=float, default=500.0, dest="extent")
    p.add_argument("--compat-precision", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="audit a points + triangles file pair")
    p.add_argument("points")
    p.add_argument("triangles")
    p.add_argument("--mode", choices=("hull", "delaunay"), required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="visible-facet statistics over builds")
    p.add_argument("--sizes", type=_int_list, default=[1000, 10000],
                   help="comma-separated point counts (each >= 10)")
    p.add_argument("--seeds", type=_int_list, default=[1])
    p.add_argument("--mode", choices=io.GEN_MODES, default="parabola")
    p.add_argument("--range", type=float, default=500.0, dest="extent")
    p.add_argument("--engine", choices=("auto", "python", "compiled"), default="auto")
    p.add_argument("--per-insertion", metavar="PATH",
                   help="also write the full per-insertion series CSV here")
    p.add_argument("--parallel", type=int, default=1, metavar="W",
                   help="run (n, seed) cells on W worker processes")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="triangulation wall-time benchmark")
    p.add_argument("--sizes", type=_int_list, default=[10000, 100000])
    p.add_argument("--seeds", type=_int_list, default=[1])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--mode", choices=io.GEN_MODES, default="square2d")
    p.add_argument("--range", type=float, default=500.0, dest="extent")
    p.add_argument("--engine", choices=("auto", "python", "compiled"), default="auto")
    p.add_argument("--parallel", type=int, default=1, metavar="W")
    p.add_argument("--compare", metavar="CSV",
                   help="ingest third-party timings (tool,n,wall_s; wall_s may "
                        "carry a '<' upper-bound marker) for a side-by-side table")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FormatError, EmptyInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SweepHullError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


def _load_or_generate(args) -> np.ndarray:
    """Input points as an (n, 3) float64 array, from file or generator."""
    if args.gen is not None and args.input:
        raise FormatError("give an input file or --gen, not both")
    if args.gen is not None:
        pts = io.generate_points(args.gen, args.seed, args.mode, args.extent,
                                 as_array=True)
        print(f"{len(pts)} points generated (mode={args.mode} seed={args.seed})",
              file=sys.stderr)
        return pts
    if not args.input:
        raise FormatError("an input file or --gen is required")
    pts = io.read_points(args.input)
    print(f"{len(pts)} points read from {args.input}", file=sys.stderr)
    return np.array([(p.x, p.y, p.z) for p in pts], dtype=np.float64)


def cmd_delaunay(args) -> int:
    coords = _load_or_generate(args)
    lifted, src, removed = delaunay.prepare_sites(coords[:, :2],
                                                  precision=args.precision)
    print(f"duplicates filtered {len(removed)}", file=sys.stderr)
    t0 = time.perf_counter()
    tri = delaunay.triangulate_prepared(lifted, src, removed,
                                        engine=args.engine,
                                        strict=args.strict_compat,
                                        precision=args.precision)
    wall = time.perf_counter() - t0
    print(f"{wall:.6g} seconds for triangulation", file=sys.stderr)
    if args.points_out:
        io.write_points(tri.points, args.points_out,
                        compat_precision=args.compat_precision)
        print(f"{tri.n_points} points written to {args.points_out}", file=sys.stderr)
    io.write_triangles(tri, args.output)
    print(f"{len(tri)} triangles written to {args.output}", file=sys.stderr)
    if args.svg:
        io.emit_svg(tri, tri.points2d, args.svg)
        print(f"edge plot written to {args.svg}", file=sys.stderr)
    return 0


def cmd_hull3d(args) -> int:
    coords = _load_or_generate(args)
    unique, src, removed = delaunay._dedup_arrays(coords,
                                                  np.arange(len(coords), dtype=np.int64))
    print(f"duplicates filtered {len(removed)}", file=sys.stderr)
    t0 = time.perf_counter()
    tri = hull.build_hull(unique, strict=args.strict_compat, engine=args.engine,
                          precision=args.precision)
    wall = time.perf_counter() - t0
    print(f"{wall:.6g} seconds for triangulation", file=sys.stderr)
    if args.points_out:
        io.write_points(tri.points, args.points_out,
                        compat_precision=args.compat_precision)
        print(f"{tri.n_points} points written to {args.points_out}", file=sys.stderr)
    io.write_triangles(tri, args.output)
    print(f"{len(tri)} triangles written to {args.output}", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    pts = io.generate_points(args.n, args.seed, args.mode, args.extent, as_array=True)
    io.write_points(pts, args.output, compat_precision=args.compat_precision)
    print(f"{len(pts)} points written to {args.output}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    try:
        factor = _contain_eps_factor()
    except ValueError:
        print("error: NAW_EPSILON must be a number", file=sys.stderr)
        return 2
    pts = io.read_points(args.points)
    coords = np.array([(p.x, p.y, p.z) for p in pts], dtype=np.float64)
    va, vb, vc, nab, nac, nbc = io.read_triangles(args.triangles, n_points=len(coords))

    normals = np.cross(coords[vb] - coords[va], coords[vc] - coords[va])
    if args.mode == "hull":
        # orient outward against the centroid so containment has one sign
        m = coords.mean(axis=0)
        inward = np.einsum("ij,ij->i", m[None, :] - coords[va], normals) > 0
        normals[inward] = -normals[inward]
    tri = hull.Triangulation(
        va=va, vb=vb, vc=vc, nab=nab, nac=nac, nbc=nbc,
        normals=normals, points=coords,
        source_ids=np.arange(len(coords), dtype=np.int64),
    )
    if args.mode == "hull":
        report = verify.audit_hull(tri, eps_factor=factor)
    else:
        report = verify.audit_delaunay(tri)
    print(report.summary())
    for v in report.violations[:50]:
        print(f"  {v}")
    if len(report.violations) > 50:
        print(f"  ... and {len(report.violations) - 50} more")
    return 0 if report.clean else 1


# -- stats / bench ------------------------------------------------------------


def _row(n, seed, mode, wall, tri) -> str:
    st = tri.stats
    return (f"{n},{seed},{mode},{wall:.6g},{len(tri)},"
            f"{st.mean_visible():.6g},{st.max_visible()},{st.mean_scan():.6g}")


def _stats_cell(cell) -> tuple:
    n, seed, mode, extent, engine = cell
    pts = io.generate_points(n, seed, mode, extent, as_array=True)
    lifted, src, removed = delaunay.prepare_sites(pts[:, :2])
    t0 = time.perf_counter()
    tri = delaunay.triangulate_prepared(lifted, src, removed, engine=engine)
    wall = time.perf_counter() - t0
    series = (tri.stats.point_index.tolist(), tri.stats.visible.tolist(),
              tri.stats.scan_length.tolist())
    return (_row(n, seed, mode, wall, tri), series)


def _bench_cell(cell) -> str:
    n, seed, mode, extent, engine, repeats = cell
    pts = io.generate_points(n, seed, mode, extent, as_array=True)
    lifted, src, removed = delaunay.prepare_sites(pts[:, :2])
    walls = []
    tri = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        tri = delaunay.triangulate_prepared(lifted, src, removed, engine=engine)
        walls.append(time.perf_counter() - t0)
    walls.sort()
    median = walls[len(walls) // 2] if len(walls) % 2 else (
        0.5 * (walls[len(walls) // 2 - 1] + walls[len(walls) // 2]))
    return _row(n, seed, mode, median, tri)


def _run_cells(fn, cells, workers: int):
    if workers <= 1:
        return [fn(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def cmd_stats(args) -> int:
    for n in args.sizes:
        if n < 10:
            raise ValueError(f"stats sizes must be >= 10, got {n}")
    cells = [(n, seed, args.mode, args.extent, args.engine)
             for n in args.sizes for seed in args.seeds]
    results = _run_cells(_stats_cell, cells, args.parallel)
    print(CSV_HEADER)
    for row, _ in results:
        print(row)
    if args.per_insertion:
        with open(args.per_insertion, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(INSERTION_HEADER + "\n")
            for (row, (idx, vis, scan)), (n, seed, *_rest) in zip(results, cells):
                for i, v, s in zip(idx, vis, scan):
                    fh.write(f"{n},{seed},{i},{v},{s}\n")
        print(f"per-insertion series written to {args.per_insertion}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    cells = [(n, seed, args.mode, args.extent, args.engine, args.repeats)
             for n in args.sizes for seed in args.seeds]
    rows = _run_cells(_bench_cell, cells, args.parallel)
    print(CSV_HEADER)
    for row in rows:
        print(row)
    if args.compare:
        _print_comparison(args.compare, cells, rows)
    return 0


def _print_comparison(path: str, cells, rows) -> None:
    """Side-by-side wall-time table: this tool's medians next to ingested ones.

    The ingest format is CSV "tool,n,wall_s"; a leading '<' in wall_s marks an
    upper bound (a tool too fast to measure) and is rendered as '≤'.
    """
    theirs: dict[str, dict[int, str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.lower().startswith("tool"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise FormatError("comparison rows must be tool,n,wall_s",
                                  path=path, line=lineno)
            tool, n_str, wall = parts
            bound = wall.startswith("<")
            val = wall[1:] if bound else wall
            float(val)  # validate; ValueError exits 2
            theirs.setdefault(tool, {})[int(n_str)] = ("≤" + val) if bound else val

    ours: dict[int, float] = {}
    for cell, row in zip(cells, rows):
        n = cell[0]
        wall = float(row.split(",")[3])
        ours.setdefault(n, wall)

    tools = sorted(theirs)
    sizes = sorted(ours)
    print("", file=sys.stderr)
    header = "n".rjust(9) + "  " + "sweephull".rjust(12)
    for t in tools:
        header += "  " + t.rjust(max(12, len(t)))
    print(header, file=sys.stderr)
    for n in sizes:
        line = f"{n:9d}  {ours[n]:12.6g}"
        for t in tools:
            line += "  " + theirs[t].get(n, "-").rjust(max(12, len(t)))
        print(line, file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
