import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import projection_support, projection_width, random_convex_polygon, random_unit

from plankcert.errors import DimensionError, EmptyBody, UnboundedBody
from plankcert.geometry import (
    ConvexBody,
    Direction,
    HalfSpace,
    contains_body,
    dilate_about,
    interior_radius,
    intersect_halfspace,
    is_empty,
    support,
    translate,
    vertices_2d,
    width,
)
from plankcert.numeric import RATIONAL, SQRT3

TRI_VERTS = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]


def square(backend=None):
    return ConvexBody.box((0, 0), (1, 1)) if backend is None else ConvexBody.box((0, 0), (1, 1), backend)


def segment():
    return ConvexBody.from_vertices_2d([(0, 0), (1, 0)])


def test_support_examples():
    assert support(square(), (1, 0)) == 1
    assert support(square(), (1, 1)) == 2
    tri = ConvexBody.from_vertices_2d(TRI_VERTS)
    expected = projection_support(TRI_VERTS, (0, 1))
    assert expected == pytest.approx(0.8660254, abs=1e-7)
    assert support(tri, (0, 1)) == pytest.approx(expected, abs=1e-12)


def test_support_exact_is_exact():
    tri = ConvexBody.from_vertices_2d([(0, 0), (1, 0), (Fraction(1, 2), SQRT3 / 2)], RATIONAL)
    assert support(tri, (Fraction(0), Fraction(1))) == SQRT3 / 2
    assert support(square(RATIONAL), (Fraction(1), Fraction(1))) == 2


def test_width_examples():
    assert width(square(), Direction((1.0, 0.0))) == 1
    d = Direction.of((1, 1))
    assert width(square(), d) == pytest.approx(projection_width([(0, 0), (1, 0), (1, 1), (0, 1)], d.unit), abs=1e-12)
    assert width(square(), d) == pytest.approx(1.4142136, abs=1e-7)
    assert width(segment(), Direction((0.0, 1.0))) == 0


def test_is_empty_examples():
    assert not is_empty(square())
    box = ConvexBody.box((-2, -2), (2, 2))
    clash = box.with_halfspaces([HalfSpace((1, 0), 0), HalfSpace((-1, 0), -1)])
    assert is_empty(clash)
    flat = square().with_halfspaces([HalfSpace((1, 0), 0), HalfSpace((-1, 0), 0)])
    assert not is_empty(flat)


def test_interior_radius_examples():
    # oracle: grid search for the center maximizing the distance to the nearest edge
    sq = square()
    best = max(
        min(x, 1 - x, y, 1 - y) for x in [i / 100 for i in range(101)] for y in [j / 100 for j in range(101)]
    )
    assert best == pytest.approx(0.5)
    assert interior_radius(sq) == pytest.approx(best, abs=1e-12)
    assert interior_radius(segment()) == 0
    empty = intersect_halfspace(sq, HalfSpace((1, 0), -1))
    assert is_empty(empty) and interior_radius(empty) == 0


def test_intersect_halfspace_examples():
    half = intersect_halfspace(square(), HalfSpace((1, 0), 0.5))
    assert vertices_2d(half) == [(0, 0), (0.5, 0), (0.5, 1), (0, 1)]
    redundant = intersect_halfspace(square(), HalfSpace((1, 1), 5))
    for v in [(1, 0), (0, 1), Direction.of((1, 2)).unit]:
        assert abs(width(redundant, v) - width(square(), v)) <= 1e-12
    assert is_empty(intersect_halfspace(square(), HalfSpace((1, 0), -1)))


def test_dilate_about_examples():
    shrunk = dilate_about(square(), (1, 0), 0.6)
    got = vertices_2d(shrunk)
    for p, q in zip(got, [(0.4, 0), (1, 0), (1, 0.6), (0.4, 0.6)]):
        assert p == pytest.approx(q, abs=1e-12)
    assert dilate_about(square(), (0.3, 0.7), 1) == square()


def test_translate_examples():
    moved = translate(square(), (3, -2))
    assert vertices_2d(moved) == [(3, -2), (4, -2), (4, -1), (3, -1)]
    assert translate(square(), (0, 0)) == square()


def test_contains_body_examples():
    assert contains_body(square(), ConvexBody.box((0.2, 0.2), (0.8, 0.8)))
    assert not contains_body(square(), ConvexBody.box((0, 0), (1.1, 1)))
    residual = ConvexBody.box((0.4, 0), (1, 1))
    assert contains_body(residual, dilate_about(square(), (1, 0), 0.6))


def test_vertices_2d_examples():
    assert vertices_2d(square()) == [(0, 0), (1, 0), (1, 1), (0, 1)]
    tri = ConvexBody.from_halfspaces([HalfSpace((0, -1), 0), HalfSpace((-1, 0), 0), HalfSpace((1, 1), 1)])
    assert sorted(vertices_2d(tri)) == [(0, 0), (0, 1), (1, 0)]
    assert vertices_2d(segment()) == [(0, 0), (1, 0)]
    point = ConvexBody.box((0.5, 0.5), (0.5, 0.5))
    assert vertices_2d(point) == [(0.5, 0.5)]
    with pytest.raises(DimensionError):
        vertices_2d(ConvexBody.box((0, 0, 0), (1, 1, 1)))


def test_errors():
    with pytest.raises(UnboundedBody):
        ConvexBody.from_halfspaces([HalfSpace((1, 0), 1), HalfSpace((0, 1), 1)])
    with pytest.raises(EmptyBody):
        support(intersect_halfspace(square(), HalfSpace((1, 0), -1)), (1, 0))
    with pytest.raises(ValueError):
        HalfSpace((0, 0), 1)
    with pytest.raises(ValueError):
        Direction((1.0, 1.0))


def _random_polygon_body(seed):
    rng = random.Random(seed)
    pts = random_convex_polygon(rng)
    return pts, ConvexBody.from_vertices_2d(pts)


def test_width_oracle_equivalence():
    """LP widths equal vertex-projection widths on random polygons."""
    for seed in range(200):
        pts, body = _random_polygon_body(seed)
        rng = random.Random(1000 + seed)
        u = random_unit(rng)
        assert abs(width(body, u) - projection_width(pts, u)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 3))
def test_width_facts(seed, tx, ty, c):
    _, body = _random_polygon_body(seed)
    u = random_unit(random.Random(seed))
    w = width(body, u)
    # sign symmetry
    assert abs(width(body, tuple(-x for x in u)) - w) <= 1e-12
    # fact 1: translation invariance
    assert abs(width(translate(body, (tx, ty)), u) - w) <= 1e-9
    # fact 2: dilation scales widths
    center = vertices_2d(body)[0]
    assert abs(width(dilate_about(body, center, c), u) - c * w) <= 1e-9
    # fact 3: monotone under inclusion
    inner = dilate_about(body, center, 0.5)
    if contains_body(body, inner, 0):
        assert width(inner, u) <= w + 1e-12


def test_translation_invariance_100_cases():
    rng = random.Random(7)
    for seed in range(100):
        _, body = _random_polygon_body(seed)
        t = (rng.uniform(-10, 10), rng.uniform(-10, 10))
        u = random_unit(rng)
        assert abs(width(translate(body, t), u) - width(body, u)) <= 1e-9


def test_redundant_halfspace_changes_no_width():
    rng = random.Random(3)
    for seed in range(50):
        pts, body = _random_polygon_body(seed)
        u = random_unit(rng)
        far = HalfSpace(u, projection_support(pts, u) + rng.uniform(0.1, 5))
        extra = intersect_halfspace(body, far)
        for _ in range(5):
            v = random_unit(rng)
            assert abs(width(extra, v) - width(body, v)) <= 1e-12


def test_dilation_fact_on_exact_triangle():
    tri = ConvexBody.from_vertices_2d([(0, 0), (1, 0), (Fraction(1, 2), SQRT3 / 2)], RATIONAL)
    p = (Fraction(1), Fraction(0))
    half = dilate_about(tri, p, Fraction(1, 2))
    for v in [(Fraction(1), Fraction(0)), (Fraction(3, 5), Fraction(4, 5)), (Fraction(0), Fraction(1))]:
        assert width(half, v) == width(tri, v) / 2


def test_three_dimensional_box():
    cube = ConvexBody.box((0, 0, 0), (1, 2, 3))
    assert width(cube, (0.0, 0.0, 1.0)) == 3
    assert interior_radius(cube) == pytest.approx(0.5)
