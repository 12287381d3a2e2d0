"""File formats, point generators, and the SVG plot writer.

The points and triangles formats follow the reference tool byte for byte on
the write side (see the format notes in the README); the reader accepts the
same inputs the reference accepts, including the implicit paraboloid lift of
2-column rows, but warns instead of silently skipping overlong lines.

The point generator pins xoshiro256** (seeded via splitmix64) rather than the
platform C library generator, so every platform draws identical point sets.
"""

from __future__ import annotations

import math
import warnings
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput, FormatError
from .geometry import Point2, Point3
from .hull import Triangulation

MAX_LINE = 512
_MASK64 = (1 << 64) - 1


class Xoshiro256StarStar:
    """xoshiro256** 1.0; state seeded from one 64-bit integer via splitmix64.

    next_double() uses the high 53 bits, giving a uniform double in [0, 1).
    The compiled kernel carries the same integer algorithm; both produce
    identical streams, which the tests assert.
    """

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        state = seed & _MASK64
        vals = []
        for _ in range(4):
            state = (state + 0x9E3779B97F4A7C15) & _MASK64
            z = state
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
            vals.append(z ^ (z >> 31))
        self.s0, self.s1, self.s2, self.s3 = vals

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s1 * 5) & _MASK64
        result = ((x << 7 | x >> 57) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = (s3 << 45 | s3 >> 19) & _MASK64
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53


GEN_MODES = ("square2d", "box3d", "parabola")


def generate_points(n: int, seed: int, mode: str = "square2d",
                    extent: float = 500.0, *, as_array: bool = False):
    """Deterministic random points: n >= 1 of them, reproducibly from seed.

    square2d: x, y uniform in [-extent/2, extent/2), z = 0.
    parabola: same x, y, z = x*x + y*y (the distribution the reference
              driver feeds the Delaunay benchmark).
    box3d:    x, y, z all uniform in [-extent/2, extent/2).

    Returns Point3 objects, or a float64 (n, 3) array with ``as_array``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode not in GEN_MODES:
        raise ValueError(f"mode must be one of {GEN_MODES}, got {mode!r}")
    try:
        from . import _kernel  # type: ignore[attr-defined]
        arr = _kernel.generate(int(n), int(seed) & _MASK64, GEN_MODES.index(mode),
                               float(extent))
    except ImportError:
        arr = _generate_py(n, seed, mode, extent)
    if as_array:
        return arr
    return [Point3(float(r[0]), float(r[1]), float(r[2]), i)
            for i, r in enumerate(arr)]


def _generate_py(n: int, seed: int, mode: str, extent: float) -> np.ndarray:
    rng = Xoshiro256StarStar(seed)
    out = np.empty((n, 3), dtype=np.float64)
    nd = rng.next_double
    for i in range(n):
        x = nd() * extent - extent * 0.5
        y = nd() * extent - extent * 0.5
        if mode == "square2d":
            z = 0.0
        elif mode == "parabola":
            z = x * x + y * y
        else:
            z = nd() * extent - extent * 0.5
        out[i, 0] = x
        out[i, 1] = y
        out[i, 2] = z
    return out


# -- points files -------------------------------------------------------------


def read_points(path) -> list[Point3]:
    """Read a points file: "x y z" rows, or "x y" rows lifted to z = x^2 + y^2.

    A first line containing the token "points" is a count header and is
    skipped (the count itself is not trusted). Lines longer than 512
    characters are skipped with a warning, as are rows that parse to neither
    3 nor 2 leading decimals. Raises EmptyInput when nothing parses.
    """
    pts: list[Point3] = []
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        first = True
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if first:
                first = False
                if "points" in line:
                    continue
            if len(line) > MAX_LINE:
                warnings.warn(f"{path}:{lineno}: line longer than {MAX_LINE} chars skipped")
                continue
            tokens = line.split()
            parsed = None
            if len(tokens) >= 3:
                try:
                    parsed = (float(tokens[0]), float(tokens[1]), float(tokens[2]))
                except ValueError:
                    parsed = None
            if parsed is None and len(tokens) >= 2:
                try:
                    x, y = float(tokens[0]), float(tokens[1])
                except ValueError:
                    parsed = None
                else:
                    parsed = (x, y, x * x + y * y)
            if parsed is None:
                if tokens:
                    warnings.warn(f"{path}:{lineno}: unparseable row skipped")
                continue
            pts.append(Point3(parsed[0], parsed[1], parsed[2], len(pts)))
    if not pts:
        raise EmptyInput("no points parsed", path=str(path))
    return pts


def _fmt(v: float, compat: bool) -> str:
    if compat:
        return "%g" % v
    return repr(float(v))


def write_points(points, path, *, compat_precision: bool = False) -> None:
    """Write "<N> 3 points" then one "x y z" row per point.

    Default formatting is shortest round-trip decimal, so read_points gets the
    exact values back; ``compat_precision`` switches to the reference's
    6-significant-digit stream formatting.
    """
    if isinstance(points, np.ndarray):
        rows = [(float(r[0]), float(r[1]), float(r[2])) for r in points]
    else:
        rows = [(p.x, p.y, p.z) for p in points]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(rows)} 3 points\n")
        for x, y, z in rows:
            fh.write(f"{_fmt(x, compat_precision)} {_fmt(y, compat_precision)} "
                     f"{_fmt(z, compat_precision)}\n")


# -- triangles files ----------------------------------------------------------

TRIANGLES_HEADER = "6 point-ids (1,2,3) adjacent triangle-ids ( limbs ab ac bc )"


def write_triangles(tri: Triangulation, path) -> None:
    """Write the 1-based triangle table: "a b c ab ac bc", -1 neighbors as 0."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(tri)} {TRIANGLES_HEADER}\n")
        va, vb, vc = tri.va, tri.vb, tri.vc
        ab, ac, bc = tri.nab, tri.nac, tri.nbc
        for i in range(len(tri)):
            fh.write(f"{va[i] + 1} {vb[i] + 1} {vc[i] + 1} "
                     f"{ab[i] + 1} {ac[i] + 1} {bc[i] + 1}\n")


def read_triangles(path, n_points: int | None = None):
    """Read a triangles file back into 0-based index arrays.

    Returns (va, vb, vc, nab, nac, nbc). Raises FormatError on rows without
    exactly 6 integers, vertex ids outside 1..n_points, or neighbor ids
    outside 0..rows.
    """
    rows: list[tuple[int, ...]] = []
    with open(path, "r", encoding="utf-8") as fh:
        first = True
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if first:
                first = False
                try:
                    [int(t) for t in tokens]
                except ValueError:
                    continue  # header line
            try:
                vals = [int(t) for t in tokens]
            except ValueError as exc:
                raise FormatError("non-integer in triangle row",
                                  path=str(path), line=lineno) from exc
            if len(vals) != 6:
                raise FormatError("triangle row must have exactly 6 columns",
                                  path=str(path), line=lineno, got=len(vals))
            rows.append(tuple(vals))
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), 6)
    va, vb, vc = arr[:, 0] - 1, arr[:, 1] - 1, arr[:, 2] - 1
    nab, nac, nbc = arr[:, 3] - 1, arr[:, 4] - 1, arr[:, 5] - 1
    nfac = len(rows)
    for name, col in (("vertex", va), ("vertex", vb), ("vertex", vc)):
        if np.any(col < 0):
            raise FormatError("vertex id must be >= 1", path=str(path))
        if n_points is not None and np.any(col >= n_points):
            raise FormatError("vertex id out of range", path=str(path),
                              n_points=n_points)
    for col in (nab, nac, nbc):
        if np.any(col < -1) or np.any(col >= nfac):
            raise FormatError("neighbor id out of range", path=str(path), rows=nfac)
    return va, vb, vc, nab, nac, nbc


# -- SVG ----------------------------------------------------------------------


def emit_svg(tri: Triangulation, points2d, path) -> None:
    """Plot the triangulation's edges as an SVG, one line per undirected edge.

    The viewport fits the 2D bounding box with a 2% margin; y is flipped so
    larger y is up. Output is deterministic: edges are emitted sorted.
    """
    if isinstance(points2d, np.ndarray):
        pts = np.asarray(points2d, dtype=np.float64)[:, :2]
    else:
        pts = np.array([(p.x, p.y) for p in points2d], dtype=np.float64)

    edges = sorted(tri.edge_set()) if len(tri) else []
    if len(pts):
        xmin, ymin = pts.min(axis=0)
        xmax, ymax = pts.max(axis=0)
    else:
        xmin = ymin = 0.0
        xmax = ymax = 1.0
    w = xmax - xmin or 1.0
    h = ymax - ymin or 1.0
    margin = 0.02 * max(w, h)
    stroke = 0.003 * max(w, h)
    view = (f"{_svg_num(xmin - margin)} {_svg_num(ymin - margin)} "
            f"{_svg_num(w + 2 * margin)} {_svg_num(h + 2 * margin)}")
    flip = ymin + ymax  # y' = flip - y mirrors within the same viewBox
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}" '
        f'width="800" height="{_svg_num(800 * h / w)}">',
        f'<g stroke="black" stroke-width="{_svg_num(stroke)}" '
        'stroke-linecap="round" fill="none">',
    ]
    for u, v in edges:
        x1, y1 = pts[u]
        x2, y2 = pts[v]
        lines.append(f'<line x1="{_svg_num(x1)}" y1="{_svg_num(flip - y1)}" '
                     f'x2="{_svg_num(x2)}" y2="{_svg_num(flip - y2)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _svg_num(v: float) -> str:
    return f"{v:.9g}"
