"""Sweep-hull convex hulls and Delaunay triangulation.

The package builds 3D convex hulls incrementally over z-sorted points and
derives 2D Delaunay triangulations by lifting sites onto the paraboloid
z = x^2 + y^2 and keeping the downward-facing sheet of the lifted hull.

Two interchangeable engines drive the inner loop: a Cython kernel and a pure
Python implementation with identical arithmetic. ``engine="auto"`` (the
default everywhere) picks the kernel when it is importable.
"""

__version__ = "1.0.0"

from ._engine import compiled_available
from .delaunay import delaunay_triangulate, dedup, lift, prepare_sites, triangulate_prepared
from .errors import (
    AllCollinear,
    BrokenHull,
    CapExceeded,
    CollinearTriangle,
    DegenerateCoplanarSet,
    EmptyInput,
    FirstTripleCollinear,
    FormatError,
    LiftOverflow,
    NeighborSlotMismatch,
    SweepHullError,
    TooFewPoints,
    UnmatchedEdge,
)
from .geometry import Facet, Point2, Point3
from .hull import BuildStats, Triangulation, build_hull
from .io import generate_points, read_points, read_triangles, write_points, write_triangles
from .verify import (
    AuditReport,
    audit_delaunay,
    audit_hull,
    brute_hull,
    compare_hull_to_oracle,
    in_circumcircle,
)

__all__ = [
    "__version__",
    "compiled_available",
    "build_hull",
    "delaunay_triangulate",
    "prepare_sites",
    "triangulate_prepared",
    "dedup",
    "lift",
    "Triangulation",
    "BuildStats",
    "Facet",
    "Point2",
    "Point3",
    "generate_points",
    "read_points",
    "write_points",
    "read_triangles",
    "write_triangles",
    "audit_hull",
    "audit_delaunay",
    "brute_hull",
    "compare_hull_to_oracle",
    "in_circumcircle",
    "AuditReport",
    "SweepHullError",
    "TooFewPoints",
    "FirstTripleCollinear",
    "AllCollinear",
    "NeighborSlotMismatch",
    "UnmatchedEdge",
    "BrokenHull",
    "DegenerateCoplanarSet",
    "CapExceeded",
    "CollinearTriangle",
    "LiftOverflow",
    "EmptyInput",
    "FormatError",
]
