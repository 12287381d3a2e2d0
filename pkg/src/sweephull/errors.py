"""Structured errors.

Every abort path in the builder, the verification oracles and the file layer
raises a subclass of SweepHullError carrying a stable ``code`` string. The CLI
maps these to exit status 1 (2 for input-format problems); library users can
match on the class or the code.
"""

from __future__ import annotations


class SweepHullError(Exception):
    """Base class for all structured errors raised by this package."""

    code = "ERROR"

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.code)
        self.context = context

    def __str__(self) -> str:
        base = super().__str__()
        if self.context:
            detail = ", ".join(f"{k}={v!r}" for k, v in sorted(self.context.items()))
            return f"{base} ({detail})"
        return base


class TooFewPoints(SweepHullError):
    """Fewer than 4 distinct 3D points (or 3 distinct 2D sites) remain."""

    code = "TOO_FEW_POINTS"


class FirstTripleCollinear(SweepHullError):
    """Strict mode only: the first three sorted points span no triangle."""

    code = "FIRST_TRIPLE_COLLINEAR"


class AllCollinear(SweepHullError):
    """Every input point lies on one line; no seed triangle exists."""

    code = "ALL_COLLINEAR"


class NeighborSlotMismatch(SweepHullError):
    """A live facet shares no edge with the horizon facet that names it.

    This is the builder's internal consistency check; it fires only when
    floating-point trouble has already corrupted the adjacency graph.
    """

    code = "NEIGHBOR_SLOT_MISMATCH"


class UnmatchedEdge(SweepHullError):
    """A fresh facet's rim edge found no partner during adjacency patching."""

    code = "UNMATCHED_EDGE"


class BrokenHull(SweepHullError):
    """Compaction found a kept facet pointing at a dropped neighbor."""

    code = "BROKEN_HULL"


class DegenerateCoplanarSet(SweepHullError):
    """The points never left a plane (or a line, in 2D), so no 3D hull exists.

    When the planar sandwich was still structurally sound its facets are
    attached as ``planar`` for callers that can use the flat result.
    """

    code = "DEGENERATE_COPLANAR_SET"

    def __init__(self, message: str = "", planar=None, **context):
        super().__init__(message, **context)
        self.planar = planar


class CapExceeded(SweepHullError):
    """Input is larger than a deliberately-slow oracle is willing to take."""

    code = "CAP_EXCEEDED"


class CollinearTriangle(SweepHullError):
    """A circumcircle query was made against a zero-area triangle."""

    code = "COLLINEAR_TRIANGLE"


class LiftOverflow(SweepHullError):
    """x*x + y*y overflowed to infinity during the paraboloid lift."""

    code = "OVERFLOW"


class EmptyInput(SweepHullError):
    """A points file contained no parseable rows."""

    code = "EMPTY_INPUT"


class FormatError(SweepHullError):
    """A data file violated the expected layout; maps to CLI exit 2."""

    code = "FORMAT"
