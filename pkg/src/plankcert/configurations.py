"""Canned and randomized scenes."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError
from .geometry import (
    ConvexBody,
    Direction,
    HalfSpace,
    chebyshev_margin,
    dot,
    neg,
    support,
)
from .numeric import FLOAT, RATIONAL, SQRT3, Backend
from .planks import Plank, min_covering_plank, plank_from_centerline


@dataclass(frozen=True)
class Scene:
    body: ConvexBody
    planks: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "planks", tuple(self.planks))
        for p in self.planks:
            if p.dim != self.body.dim:
                raise DimensionError(f"plank of dimension {p.dim} in a {self.body.dim}-dimensional scene")

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def backend(self) -> Backend:
        return self.body.backend

    def to_backend(self, backend: Backend) -> "Scene":
        return Scene(
            ConvexBody(self.body.dim, self.body.halfspaces, backend, validate=False),
            tuple(p.to_backend(backend) for p in self.planks),
            self.label,
        )


def hunter_triangle(backend: Backend = RATIONAL) -> Scene:
    """Unit equilateral triangle with three width-1/3 planks along its angle bisectors."""
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    vertices = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (half, SQRT3 * half)]
    bisectors = [(SQRT3 * half, half), (-SQRT3 * half, half), (Fraction(0), Fraction(-1))]
    planks = [
        plank_from_centerline(v, Direction(d, RATIONAL), third) for v, d in zip(vertices, bisectors)
    ]
    scene = Scene(ConvexBody.from_vertices_2d(vertices, RATIONAL), planks, "hunter")
    return scene if backend.exact else scene.to_backend(backend)


def regular_polygon(n: int, circumradius=1.0, backend: Backend = FLOAT) -> ConvexBody:
    """Regular n-gon centered at the origin with a vertex on the positive x-axis."""
    if n < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    verts = []
    for k in range(n):
        a = 2 * math.pi * k / n
        x, y = math.cos(a), math.sin(a)
        # snap the exact axis points so that e.g. the square comes out clean
        x = round(x) if abs(x - round(x)) < 1e-15 else x
        y = round(y) if abs(y - round(y)) < 1e-15 else y
        verts.append((circumradius * x, circumradius * y))
    return ConvexBody.from_vertices_2d(verts, backend)


def slab_partition(body: ConvexBody, v: Direction, k: int, cuts) -> list:
    """Split the minimal covering plank of ``body`` along ``v`` into ``k`` contiguous slabs."""
    cuts = [body.backend.coerce(c) for c in cuts]
    if k < 1 or len(cuts) != k - 1:
        raise ValueError("need k >= 1 and exactly k - 1 cut fractions")
    if any(not (0 < c < 1) for c in cuts) or any(a >= b for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cut fractions must be increasing and inside (0, 1)")
    full = min_covering_plank(body, v)
    w = full.hi - full.lo
    breaks = [full.lo] + [full.lo + c * w for c in cuts] + [full.hi]
    return [Plank(full.normal, a, b) for a, b in zip(breaks, breaks[1:])]


def random_rational_direction(rng: random.Random, dim: int, grid: int = 100) -> tuple:
    """Exact rational unit vector via inverse stereographic projection."""
    if dim < 2:
        raise DimensionError("directions need dim >= 2")
    span = grid * 3 // 2 if dim > 2 else grid
    w = [Fraction(rng.randint(-span, span), grid) for _ in range(dim - 1)]
    s = sum(c * c for c in w)
    return tuple(2 * c / (s + 1) for c in w) + ((s - 1) / (s + 1),)


def _floor_to(x, den):
    return Fraction(math.floor(x * den), den)


def _ceil_to(x, den):
    return Fraction(math.ceil(x * den), den)


def _random_body(rng: random.Random, dim: int) -> ConvexBody:
    box = ConvexBody.box([-1] * dim, [1] * dim, RATIONAL)
    while True:
        extra = []
        for _ in range(rng.randint(dim + 1, 2 * dim + 3)):
            n = random_rational_direction(rng, dim)
            center = [Fraction(rng.randint(-30, 30), 100) for _ in range(dim)]
            r = Fraction(rng.randint(30, 90), 100)
            extra.append(HalfSpace(n, _floor_to(dot(n, center) + r, 1000)))
        body = box.with_halfspaces(extra)
        # reject thin bodies: Chebyshev radius at least 0.05 of the box size
        if chebyshev_margin(body.to_backend(FLOAT))[0] >= 0.1:
            return body


def random_peelable_scene(seed: int, dim: int = 2, k: int = 4, backend: Backend = FLOAT) -> Scene:
    """Covered scene that peels in generation order.

    Each plank but the last slices a slab off the current residual, so every
    partial residual is the previous one cut by a halfspace; the last plank
    covers what remains.  Offsets are snapped outward/inward to multiples of
    1/1000 and planks are widened by random overlap on their outer side.
    """
    if k < 1:
        raise ValueError("need at least one plank")
    rng = random.Random(seed)
    body = _random_body(rng, dim)
    residual = body
    planks = []
    for _ in range(k - 1):
        for _attempt in range(50):
            u = random_rational_direction(rng, dim)
            lo = -support(residual, neg(u))
            hi = support(residual, u)
            w = hi - lo
            cut = w * Fraction(rng.randint(15, 50), 100)
            out = w * Fraction(rng.randint(0, 20), 100)
            if rng.random() < 0.5:
                p = Plank(Direction(u, RATIONAL), _floor_to(lo - out, 1000), _ceil_to(lo + cut, 1000))
                nxt = residual.with_halfspaces([p.above(RATIONAL) if p.normal.unit == u else p.below(RATIONAL)])
            else:
                p = Plank(Direction(u, RATIONAL), _floor_to(hi - cut, 1000), _ceil_to(hi + out, 1000))
                nxt = residual.with_halfspaces([p.below(RATIONAL) if p.normal.unit == u else p.above(RATIONAL)])
            if chebyshev_margin(nxt.to_backend(FLOAT))[0] >= 0.02:
                break
        else:  # pragma: no cover - 50 failures in a row does not happen for these ranges
            raise RuntimeError("could not slice a slab off the residual")
        planks.append(p)
        residual = nxt
    u = random_rational_direction(rng, dim)
    cover = min_covering_plank(residual, Direction(u, RATIONAL))
    w = cover.hi - cover.lo
    planks.append(
        Plank(
            cover.normal,
            _floor_to(cover.lo - w * Fraction(rng.randint(0, 20), 100), 1000),
            _ceil_to(cover.hi + w * Fraction(rng.randint(0, 20), 100), 1000),
        )
    )
    scene = Scene(body, planks, f"random seed={seed} dim={dim} k={k}")
    return scene if backend.exact else scene.to_backend(backend)
