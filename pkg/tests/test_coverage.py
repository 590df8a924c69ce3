import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import grid_uncovered, random_convex_polygon, random_unit

from plankcert.configurations import hunter_triangle, random_peelable_scene
from plankcert.errors import CellBudgetExceeded, EmptyBody
from plankcert.geometry import (
    ConvexBody,
    Direction,
    HalfSpace,
    bounding_box,
    intersect_halfspace,
    is_empty,
    vertices_2d,
    width,
)
from plankcert.numeric import FLOAT, RATIONAL
from plankcert.coverage import (
    ABOVE,
    BELOW,
    ResidualKind,
    convex_residual,
    covers,
    residual_cells,
    residual_sequence,
    uncovered_witness,
)
from plankcert.planks import Plank

SQUARE = ConvexBody.box((0, 0), (1, 1))
EXACT_SQUARE = ConvexBody.box((0, 0), (1, 1), RATIONAL)


def xplank(lo, hi):
    return Plank((1.0, 0.0), lo, hi)


def test_residual_cells_examples():
    cells = residual_cells(SQUARE, [xplank(0.25, 0.75)])
    assert [c.signs for c in cells] == [(BELOW,), (ABOVE,)]
    assert all(c.strict_radius > 0 for c in cells)
    assert vertices_2d(cells[0].closure) == [(0, 0), (0.25, 0), (0.25, 1), (0, 1)]
    assert vertices_2d(cells[1].closure) == [(0.75, 0), (1, 0), (1, 1), (0.75, 1)]

    cells = residual_cells(SQUARE, [xplank(-1, 2)])
    assert len(cells) == 2 and all(c.strict_radius == 0 for c in cells)

    hunter = hunter_triangle()
    cells = residual_cells(hunter.body, hunter.planks)
    assert len(cells) == 8
    assert all(c.strict_radius == 0 for c in cells)


def test_residual_cells_errors():
    with pytest.raises(CellBudgetExceeded):
        residual_cells(SQUARE, [xplank(0, 0.1)] * 5, cell_budget=16)
    with pytest.raises(EmptyBody):
        residual_cells(intersect_halfspace(SQUARE, HalfSpace((1, 0), -1)), [xplank(0, 1)])


def test_covers_examples():
    assert covers(SQUARE, [xplank(0, 0.5), xplank(0.4, 1)])
    assert not covers(SQUARE, [xplank(0, 0.4), xplank(0.5, 1)])
    hunter = hunter_triangle()
    assert covers(hunter.body, hunter.planks)

    floaty = hunter.to_backend(FLOAT)
    assert covers(floaty.body, floaty.planks)


def test_touching_planks_cover_exactly():
    planks = [Plank((Fraction(1), Fraction(0)), 0, Fraction(1, 2)), Plank((Fraction(1), Fraction(0)), Fraction(1, 2), 1)]
    assert covers(EXACT_SQUARE, planks)


def test_uncovered_witness_is_in_the_gap():
    cell = uncovered_witness(SQUARE, [xplank(0, 0.4), xplank(0.5, 1)])
    assert cell is not None
    x, y = cell.witness
    assert 0.4 < x < 0.5 and 0 <= y <= 1
    assert uncovered_witness(SQUARE, [xplank(0, 0.5), xplank(0.4, 1)]) is None


def test_convex_residual_examples():
    res = convex_residual(SQUARE, xplank(0, 0.5))
    assert res.kind is ResidualKind.BODY
    assert vertices_2d(res.body) == [(0.5, 0), (1, 0), (1, 1), (0.5, 1)]
    assert convex_residual(SQUARE, xplank(0.25, 0.75)).kind is ResidualKind.NOT_CONVEX
    assert convex_residual(SQUARE, xplank(-1, 2)).kind is ResidualKind.EMPTY
    hunter = hunter_triangle()
    for p in hunter.planks:
        assert convex_residual(hunter.body, p).kind is ResidualKind.NOT_CONVEX


def test_residual_sequence_examples():
    seq = residual_sequence(SQUARE, [xplank(0, 0.5), xplank(0.5, 1)])
    assert seq.ok and len(seq.bodies) == 2
    assert vertices_2d(seq.bodies[0]) == [(0.5, 0), (1, 0), (1, 1), (0.5, 1)]
    assert is_empty(seq.bodies[1])

    seq = residual_sequence(SQUARE, [xplank(0, 0.4), xplank(0.3, 1)])
    assert seq.ok
    assert vertices_2d(seq.bodies[0]) == [(0.4, 0), (1, 0), (1, 1), (0.4, 1)]
    assert is_empty(seq.bodies[1])

    hunter = hunter_triangle()
    for order in ([0, 1, 2], [2, 0, 1], [1, 2, 0]):
        seq = residual_sequence(hunter.body, [hunter.planks[i] for i in order])
        assert seq.failed_at == 1 and seq.bodies == []


def test_everything_after_emptying_stays_empty():
    seq = residual_sequence(SQUARE, [xplank(-1, 2), xplank(0.2, 0.3), xplank(0.5, 0.6)])
    assert seq.ok and all(is_empty(b) for b in seq.bodies)


def _random_scene(seed, k=None):
    rng = random.Random(seed)
    pts = random_convex_polygon(rng)
    body = ConvexBody.from_vertices_2d(pts)
    planks = []
    for _ in range(k or rng.randint(1, 4)):
        u = random_unit(rng)
        proj = [u[0] * x + u[1] * y for x, y in pts]
        lo = rng.uniform(min(proj), max(proj))
        hi = lo + rng.uniform(0.05, 0.8) * (max(proj) - min(proj))
        planks.append(Plank(u, lo, hi))
    return rng, pts, body, planks


def _in_some_plank(planks, x):
    return any(p.contains(x) for p in planks)


@pytest.mark.parametrize("seed", range(25))
def test_partition_property(seed):
    rng, pts, body, planks = _random_scene(seed)
    cells = residual_cells(body, planks)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    checked = 0
    while checked < 150:
        x = (rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys)))
        if not body.contains_point(x):
            continue
        checked += 1
        hits = 0
        for c in cells:
            # strict membership in the cell
            strict = all(
                (p.normal.unit[0] * x[0] + p.normal.unit[1] * x[1] < p.lo)
                if s == BELOW
                else (p.normal.unit[0] * x[0] + p.normal.unit[1] * x[1] > p.hi)
                for p, s in zip(planks, c.signs)
            )
            hits += strict
        # pruned branches have empty closures, so they cannot hold x
        assert hits == (0 if _in_some_plank(planks, x) else 1)


@pytest.mark.parametrize("seed", range(30))
def test_covers_agrees_with_grid(seed):
    _, pts, body, planks = _random_scene(seed)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    halfspaces = [(h.normal, h.offset) for h in body.halfspaces]
    free = grid_uncovered(
        halfspaces, [(p.normal.unit, p.lo, p.hi) for p in planks], (min(xs), min(ys)), (max(xs), max(ys)), n=200
    )
    if covers(body, planks):
        assert len(free) == 0
    else:
        cell = uncovered_witness(body, planks)
        assert body.contains_point(cell.witness, 1e-9)
        assert not _in_some_plank(planks, cell.witness)


@pytest.mark.parametrize("seed", range(20))
def test_body_residual_is_uncovered_and_thinner(seed):
    rng, _, body, planks = _random_scene(seed, k=1)
    res = convex_residual(body, planks[0])
    if res.kind is not ResidualKind.BODY:
        return
    assert not covers(body, planks)
    for _ in range(8):
        u = random_unit(rng)
        assert width(res.body, u) <= width(body, u) + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(-3, 3), st.floats(0, 2))
def test_monotone_under_appending(seed, lo, w):
    _, _, body, planks = _random_scene(seed)
    before = covers(body, planks)
    after = covers(body, planks + [Plank(Direction.of((1, 2)).unit, lo, lo + w)])
    assert after or not before


@pytest.mark.parametrize("seed", range(15))
def test_grid_finds_nothing_on_covered_scenes(seed):
    scene = random_peelable_scene(seed, dim=2, k=1 + seed % 4)
    assert covers(scene.body, scene.planks)
    lo, hi = bounding_box(scene.body)
    free = grid_uncovered(
        [(h.normal, h.offset) for h in scene.body.halfspaces],
        [(p.normal.unit, p.lo, p.hi) for p in scene.planks],
        lo,
        hi,
        n=200,
    )
    assert len(free) == 0
