"""Planks: closed slabs ``{x : lo <= normal . x <= hi}`` with a unit normal."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DimensionError, EmptyBody
from .geometry import (
    ConvexBody,
    Direction,
    HalfSpace,
    dot,
    infer_backend,
    is_empty,
    neg,
    support,
    width,
)
from .numeric import Backend, simplify

INF = math.inf


@dataclass(frozen=True)
class Plank:
    """Closed region between two parallel hyperplanes.

    The normal is canonicalized so that its first nonzero coordinate is
    positive; flipping it negates and swaps the offsets.
    """

    normal: Direction
    lo: object
    hi: object

    def __post_init__(self):
        normal = self.normal if isinstance(self.normal, Direction) else Direction(tuple(self.normal))
        lo, hi = simplify(self.lo), simplify(self.hi)
        first = next(c for c in normal.unit if c != 0)
        if first < 0:
            normal, lo, hi = -normal, -hi, -lo
        if lo > hi:
            raise ValueError(f"plank offsets out of order: lo={lo} > hi={hi}")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.normal.dim

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x, tol=0) -> bool:
        s = dot(self.normal.unit, x)
        return self.lo - tol <= s <= self.hi + tol

    def below(self, backend: Backend) -> HalfSpace:
        """Closed complement side ``normal . x <= lo``."""
        return HalfSpace(backend.vector(self.normal.unit), backend.coerce(self.lo))

    def above(self, backend: Backend) -> HalfSpace:
        """Closed complement side ``normal . x >= hi``."""
        return HalfSpace(backend.vector(neg(self.normal.unit)), -backend.coerce(self.hi))

    def to_backend(self, backend: Backend) -> "Plank":
        return Plank(Direction(self.normal.unit, backend), backend.coerce(self.lo), backend.coerce(self.hi))


def plank_width(p: Plank):
    return p.hi - p.lo


def plank_as_body(p: Plank, bounding: ConvexBody) -> ConvexBody:
    bk = bounding.backend
    u = bk.vector(p.normal.unit)
    return bounding.with_halfspaces(
        [HalfSpace(u, bk.coerce(p.hi)), HalfSpace(neg(u), -bk.coerce(p.lo))]
    )


def plank_from_centerline(point, line_dir: Direction, w) -> Plank:
    """Planar plank of width ``w`` whose center line passes through ``point``."""
    if len(point) != 2 or line_dir.dim != 2:
        raise DimensionError("center lines determine planks only in the plane")
    if not w > 0:
        raise ValueError("plank width must be positive")
    dx, dy = line_dir.unit
    normal = Direction((-dy, dx), infer_backend((dx, dy, w, *point)))
    mid = dot(normal.unit, point)
    return Plank(normal, mid - w / 2, mid + w / 2)


def min_covering_plank(body: ConvexBody, v: Direction) -> Plank:
    u = body.backend.vector(v.unit)
    hi = support(body, u)
    lo = -support(body, neg(u))
    return Plank(Direction(u, body.backend), lo, hi)


def bang_ratio(p: Plank, body: ConvexBody):
    """``width(p) / width(body, p.normal)``; ``inf`` when the body is flat in that direction."""
    if is_empty(body):
        raise EmptyBody("bang ratio against an empty body")
    bk = body.backend
    denom = width(body, bk.vector(p.normal.unit))
    if denom <= bk.eps:
        return INF
    return simplify(bk.coerce(p.width) / denom)
