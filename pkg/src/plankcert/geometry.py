"""Halfspace polytopes and the LP-backed support/width oracle.

Vectors are plain tuples of scalars.  A :class:`ConvexBody` is a bounded
intersection of closed halfspaces; every width in the package is computed as
``support(u) + support(-u)`` through :mod:`plankcert.lp`.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from functools import cached_property

from . import lp
from .errors import DimensionError, EmptyBody, UnboundedBody
from .numeric import FLOAT, RATIONAL, Backend, is_exact


def dot(u, v):
    total = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        total = total + a * b
    return total


def neg(v):
    return tuple(-c for c in v)


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def infer_backend(values) -> Backend:
    """Rational when the scalars are exact and not all plain ints, float otherwise."""
    values = list(values)
    if all(is_exact(x) for x in values) and not all(isinstance(x, int) for x in values):
        return RATIONAL
    return FLOAT


def _pivot_tol(backend: Backend):
    return 0 if backend.exact else lp.FLOAT_PIVOT_TOL


@dataclass(frozen=True)
class Direction:
    """A unit vector standing for the line it spans (an element of G(n,1))."""

    unit: tuple
    backend: InitVar[Backend | None] = None

    def __post_init__(self, backend):
        if backend is None:
            backend = infer_backend(self.unit)
        unit = backend.vector(self.unit)
        if not unit:
            raise DimensionError("direction needs at least one coordinate")
        sq = dot(unit, unit)
        if backend.exact:
            if sq != 1:
                raise ValueError(f"direction {unit} is not an exact unit vector")
        elif abs(math.sqrt(sq) - 1) > 1e-12:
            raise ValueError(f"direction {unit} is not a unit vector")
        object.__setattr__(self, "unit", unit)

    @classmethod
    def of(cls, v, backend: Backend | None = None) -> "Direction":
        """Normalize a nonzero vector."""
        backend = backend or infer_backend(v)
        v = backend.vector(v)
        n = backend.norm(v)
        if not n:
            raise ValueError("zero vector has no direction")
        if backend.exact and n * n != dot(v, v):
            raise ValueError(f"{v} has no exact unit multiple in the rational backend")
        return cls(tuple(c / n for c in v), backend)

    @property
    def dim(self) -> int:
        return len(self.unit)

    def __neg__(self) -> "Direction":
        d = object.__new__(Direction)
        object.__setattr__(d, "unit", neg(self.unit))
        return d

    def same_line(self, other: "Direction", tol=0) -> bool:
        d = dot(self.unit, other.unit)
        return abs(abs(d) - 1) <= tol


def as_vector(v):
    return v.unit if isinstance(v, Direction) else tuple(v)


@dataclass(frozen=True)
class HalfSpace:
    """The closed set ``{x : normal . x <= offset}``."""

    normal: tuple
    offset: object

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(self.normal))
        if not any(self.normal):
            raise ValueError("halfspace normal must be nonzero")

    def coerce(self, backend: Backend) -> "HalfSpace":
        return HalfSpace(backend.vector(self.normal), backend.coerce(self.offset))

    def contains(self, x, tol=0) -> bool:
        return dot(self.normal, x) <= self.offset + tol


@dataclass(frozen=True)
class ConvexBody:
    """Bounded intersection of finitely many closed halfspaces.

    Boundedness is checked on construction (the rows of the constraint matrix
    must positively span the space); ``validate=False`` skips the check for
    bodies derived from an already-bounded one.
    """

    dim: int
    halfspaces: tuple
    backend: Backend = FLOAT
    validate: InitVar[bool] = True
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self, validate):
        hs = tuple(h.coerce(self.backend) for h in self.halfspaces)
        object.__setattr__(self, "halfspaces", hs)
        if self.dim < 1:
            raise DimensionError("dimension must be positive")
        for h in hs:
            if len(h.normal) != self.dim:
                raise DimensionError(f"halfspace normal {h.normal} has wrong dimension for dim={self.dim}")
        if validate:
            self._check_bounded()

    def _check_bounded(self):
        if not self.halfspaces:
            raise UnboundedBody("no halfspaces")
        one = self.backend.coerce(1)
        zero = self.backend.coerce(0)
        A = self.matrix
        tol = _pivot_tol(self.backend)
        for i in range(self.dim):
            for s in (one, -one):
                c = [s if k == i else zero for k in range(self.dim)]
                if not lp.dual_feasible(A, c, tol):
                    raise UnboundedBody(f"body is unbounded along coordinate {i} (sign {s})")

    @cached_property
    def matrix(self):
        return [list(h.normal) for h in self.halfspaces]

    @cached_property
    def rhs(self):
        return [h.offset for h in self.halfspaces]

    @classmethod
    def from_halfspaces(cls, halfspaces, backend: Backend = FLOAT) -> "ConvexBody":
        halfspaces = [h if isinstance(h, HalfSpace) else HalfSpace(*h) for h in halfspaces]
        if not halfspaces:
            raise UnboundedBody("no halfspaces")
        return cls(len(halfspaces[0].normal), tuple(halfspaces), backend)

    @classmethod
    def box(cls, lo, hi, backend: Backend = FLOAT) -> "ConvexBody":
        n = len(lo)
        hs = []
        for i in range(n):
            e = tuple(1 if k == i else 0 for k in range(n))
            hs.append(HalfSpace(e, hi[i]))
            hs.append(HalfSpace(neg(e), -backend.coerce(lo[i])))
        return cls(n, tuple(hs), backend)

    @classmethod
    def from_vertices_2d(cls, points, backend: Backend = FLOAT) -> "ConvexBody":
        """H-representation of the convex hull of planar points."""
        pts = [backend.vector(p) for p in points]
        if any(len(p) != 2 for p in pts):
            raise DimensionError("from_vertices_2d needs planar points")
        hull = convex_hull_2d(pts)
        if not hull:
            raise EmptyBody("no points")
        if len(hull) == 1:
            return cls.box(hull[0], hull[0], backend)
        if len(hull) == 2:
            p, q = hull
            d = sub(q, p)
            n = (-d[1], d[0])
            hs = (
                HalfSpace(n, dot(n, p)),
                HalfSpace(neg(n), -dot(n, p)),
                HalfSpace(d, dot(d, q)),
                HalfSpace(neg(d), -dot(d, p)),
            )
            return cls(2, hs, backend)
        hs = []
        for i, p in enumerate(hull):
            q = hull[(i + 1) % len(hull)]
            n = (q[1] - p[1], p[0] - q[0])
            hs.append(HalfSpace(n, dot(n, p)))
        return cls(2, tuple(hs), backend)

    def with_halfspaces(self, extra) -> "ConvexBody":
        return ConvexBody(self.dim, self.halfspaces + tuple(extra), self.backend, validate=False)

    def to_backend(self, backend: Backend) -> "ConvexBody":
        return ConvexBody(self.dim, self.halfspaces, backend, validate=False)

    def contains_point(self, x, tol=None) -> bool:
        tol = self.backend.eps if tol is None else tol
        return all(h.contains(x, tol) for h in self.halfspaces)


def convex_hull_2d(points):
    """Monotone chain; returns the hull counterclockwise without collinear points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def support_point(body: ConvexBody, u) -> lp.LPResult:
    """LP optimum of ``u . x`` over the body: value plus an optimal vertex."""
    u = body.backend.vector(as_vector(u))
    if len(u) != body.dim:
        raise DimensionError("objective dimension mismatch")
    if not any(u):
        raise ValueError("support direction must be nonzero")
    try:
        return lp.maximize(u, body.matrix, body.rhs, _pivot_tol(body.backend))
    except lp.Infeasible as exc:
        raise EmptyBody("support of an empty body") from exc
    except lp.Unbounded as exc:  # pragma: no cover - excluded by the boundedness invariant
        raise AssertionError("unbounded LP on a bounded body") from exc


def support(body: ConvexBody, u):
    """``max u . x`` over the body."""
    return support_point(body, u).value


def width(body: ConvexBody, v):
    """Width of the body along the line spanned by ``v``."""
    u = as_vector(v)
    return support(body, u) + support(body, neg(u))


def _margin_lp(body: ConvexBody, weights):
    """max t with ``a_j . x + w_j t <= b_j``; returns (t, x) or raises EmptyBody."""
    zero = body.backend.coerce(0)
    one = body.backend.coerce(1)
    A = [row + [w] for row, w in zip(body.matrix, weights)]
    c = [zero] * body.dim + [one]
    try:
        res = lp.maximize(c, A, body.rhs, _pivot_tol(body.backend))
    except lp.Infeasible as exc:
        raise EmptyBody("empty constraint system") from exc
    return res.value, res.x[:-1]


def chebyshev_margin(body: ConvexBody):
    """Largest uniform slack over all constraints, with unit-normalized rows.

    Negative exactly when the body is empty; the Chebyshev center comes back
    as the second element.
    """
    if "chebyshev" not in body._cache:
        weights = [body.backend.norm(h.normal) for h in body.halfspaces]
        body._cache["chebyshev"] = _margin_lp(body, weights)
    return body._cache["chebyshev"]


def is_empty(body: ConvexBody) -> bool:
    if "empty" not in body._cache:
        if body.backend.exact:
            # unit weights give the same sign as normalized ones, with smaller numbers
            t, _ = _margin_lp(body, [body.backend.coerce(1)] * len(body.halfspaces))
            body._cache["empty"] = t < 0
        else:
            t, _ = chebyshev_margin(body)
            body._cache["empty"] = t < -body.backend.eps
    return body._cache["empty"]


def interior_radius(body: ConvexBody):
    """Chebyshev radius; zero for flat or empty bodies."""
    if is_empty(body):
        return body.backend.coerce(0)
    t, _ = chebyshev_margin(body)
    zero = body.backend.coerce(0)
    return t if t > zero else zero


def has_interior(body: ConvexBody) -> bool:
    r = interior_radius(body)
    return r > body.backend.eps


def max_margin(body: ConvexBody, strict):
    """Max-margin point for strict constraints on top of the closed body.

    Returns ``(t, x)`` maximizing ``t`` subject to ``x`` in the body and
    ``h.normal . x + |h.normal| t <= h.offset`` for every ``h`` in ``strict``.
    ``t`` is ``inf`` when there are no strict constraints.  Raises EmptyBody
    when the closed body itself is empty.
    """
    strict = [h.coerce(body.backend) for h in strict]
    if not strict:
        if is_empty(body):
            raise EmptyBody("empty body")
        _, x = chebyshev_margin(body)
        return math.inf, x
    zero = body.backend.coerce(0)
    weights = [zero] * len(body.halfspaces) + [body.backend.norm(h.normal) for h in strict]
    joint = body.with_halfspaces(strict)
    return _margin_lp(joint, weights)


def intersect_halfspace(body: ConvexBody, h: HalfSpace) -> ConvexBody:
    if len(h.normal) != body.dim:
        raise DimensionError("halfspace dimension mismatch")
    return body.with_halfspaces([h])


def dilate_about(body: ConvexBody, center, c) -> ConvexBody:
    """Image of the body under ``x -> center + c (x - center)``, ``c >= 0``."""
    bk = body.backend
    c = bk.coerce(c)
    if c < 0:
        raise ValueError("dilation factor must be nonnegative")
    center = bk.vector(center)
    one = bk.coerce(1)
    hs = tuple(HalfSpace(h.normal, c * h.offset + (one - c) * dot(h.normal, center)) for h in body.halfspaces)
    return ConvexBody(body.dim, hs, bk, validate=False)


def translate(body: ConvexBody, t) -> ConvexBody:
    bk = body.backend
    t = bk.vector(t)
    hs = tuple(HalfSpace(h.normal, h.offset + dot(h.normal, t)) for h in body.halfspaces)
    return ConvexBody(body.dim, hs, bk, validate=False)


def containment_slacks(outer: ConvexBody, inner: ConvexBody):
    """Per-halfspace normalized slack ``(b - support(inner, a)) / |a|`` of ``outer``."""
    bk = outer.backend
    return [(h.offset - support(inner, h.normal)) / bk.norm(h.normal) for h in outer.halfspaces]


def contains_body(outer: ConvexBody, inner: ConvexBody, tol=0) -> bool:
    if is_empty(outer):
        raise EmptyBody("outer body is empty")
    bk = outer.backend
    for h in outer.halfspaces:
        if support(inner, h.normal) > h.offset + tol * bk.norm(h.normal):
            return False
    return True


def bounding_box(body: ConvexBody):
    lo, hi = [], []
    zero = body.backend.coerce(0)
    one = body.backend.coerce(1)
    for i in range(body.dim):
        e = tuple(one if k == i else zero for k in range(body.dim))
        hi.append(support(body, e))
        lo.append(-support(body, neg(e)))
    return tuple(lo), tuple(hi)


def vertices_2d(body: ConvexBody):
    """Vertex cycle of a planar body, counterclockwise.

    Brute force: intersect every pair of boundary lines and keep the feasible
    points.  Independent of the LP path, which makes it a test oracle.
    """
    if body.dim != 2:
        raise DimensionError("vertices_2d needs a planar body")
    bk = body.backend
    tol = bk.eps
    hs = body.halfspaces
    pts = []
    for i in range(len(hs)):
        a1, b1 = hs[i].normal, hs[i].offset
        for j in range(i + 1, len(hs)):
            a2, b2 = hs[j].normal, hs[j].offset
            det = a1[0] * a2[1] - a1[1] * a2[0]
            if det == 0 or abs(det) <= tol * 1e-3:
                continue
            x = (b1 * a2[1] - b2 * a1[1]) / det
            y = (a1[0] * b2 - a2[0] * b1) / det
            p = (x, y)
            if all(dot(h.normal, p) <= h.offset + tol * bk.norm(h.normal) for h in hs):
                pts.append(p)
    if not pts:
        raise EmptyBody("planar body has no vertices")
    unique = []
    for p in pts:
        if not any(abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol for q in unique):
            unique.append(p)
    if len(unique) <= 2:
        return sorted(unique)
    return convex_hull_2d(unique)


def empty_like(body: ConvexBody) -> ConvexBody:
    """Canonical empty body in the same space: ``body`` plus ``x_1 <= -1`` and ``x_1 >= 0``."""
    bk = body.backend
    e = tuple(bk.coerce(1 if k == 0 else 0) for k in range(body.dim))
    return body.with_halfspaces([HalfSpace(e, bk.coerce(-1)), HalfSpace(neg(e), bk.coerce(0))])
