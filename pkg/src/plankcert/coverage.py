"""Coverage of a body by planks and the successive-convexity test.

The uncovered set ``C minus the union of the planks`` splits into sign-vector
cells: for every plank a point lies strictly below it or strictly above it.
Planks are closed, so the complement inequalities are strict and a cell is
nonempty exactly when its max-margin LP value is positive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import CellBudgetExceeded, EmptyBody
from .geometry import ConvexBody, empty_like, is_empty, max_margin
from .planks import Plank

BELOW = "below"
ABOVE = "above"
INSIDE = "inside"

DEFAULT_CELL_BUDGET = 2**20


@dataclass(frozen=True)
class ResidualCell:
    signs: tuple
    closure: ConvexBody
    strict_radius: object
    witness: tuple | None = None


def _side(p: Plank, sign, backend):
    return p.below(backend) if sign == BELOW else p.above(backend)


def _strict_radius(body, strict):
    t, x = max_margin(body, strict)
    zero = body.backend.coerce(0)
    return (t, x) if t > zero else (zero, x)


def residual_cells(body: ConvexBody, planks, cell_budget: int = DEFAULT_CELL_BUDGET):
    """Enumerate the sign-vector cells of the uncovered part of ``body``.

    Depth-first over the planks in list order, ``below`` before ``above``.
    Subtrees whose partial closure is already empty are dropped; leaves are
    always reported, with ``strict_radius`` zero when the cell is empty.
    """
    planks = list(planks)
    if 2 ** len(planks) > cell_budget:
        raise CellBudgetExceeded(f"{len(planks)} planks exceed the cell budget {cell_budget}")
    if is_empty(body):
        raise EmptyBody("cannot enumerate cells of an empty body")
    bk = body.backend
    cells = []

    def visit(depth, closure, signs, strict):
        if depth == len(planks):
            radius, x = _strict_radius(body, strict)
            cells.append(ResidualCell(tuple(signs), closure, radius, x))
            return
        for sign in (BELOW, ABOVE):
            h = _side(planks[depth], sign, bk)
            child = closure.with_halfspaces([h])
            if depth + 1 < len(planks) and is_empty(child):
                continue
            visit(depth + 1, child, signs + [sign], strict + [h])

    visit(0, body, [], [])
    return cells


def _covered_radius(radius, backend) -> bool:
    return radius <= backend.eps


def covers(body: ConvexBody, planks, cell_budget: int = DEFAULT_CELL_BUDGET) -> bool:
    """True iff every point of ``body`` lies in some plank."""
    return all(_covered_radius(c.strict_radius, body.backend) for c in residual_cells(body, planks, cell_budget))


def uncovered_witness(body: ConvexBody, planks, cell_budget: int = DEFAULT_CELL_BUDGET):
    """The cell of largest strict radius if it is uncovered, else None."""
    cells = residual_cells(body, planks, cell_budget)
    best = max(cells, key=lambda c: c.strict_radius, default=None)
    if best is None or _covered_radius(best.strict_radius, body.backend):
        return None
    return best


class ResidualKind(enum.Enum):
    EMPTY = "empty"
    BODY = "body"
    NOT_CONVEX = "not_convex"


@dataclass(frozen=True)
class Residual:
    kind: ResidualKind
    body: ConvexBody | None = None
    below_radius: object = None
    above_radius: object = None


def convex_residual(body: ConvexBody, p: Plank) -> Residual:
    """Classify ``body`` minus the plank ``p`` as empty, one convex piece, or two pieces."""
    if is_empty(body):
        raise EmptyBody("residual of an empty body")
    bk = body.backend
    below, above = p.below(bk), p.above(bk)
    r_below, _ = _strict_radius(body, [below])
    r_above, _ = _strict_radius(body, [above])
    has_below = r_below > bk.eps_conv
    has_above = r_above > bk.eps_conv
    if has_below and has_above:
        return Residual(ResidualKind.NOT_CONVEX, None, r_below, r_above)
    if not has_below and not has_above:
        return Residual(ResidualKind.EMPTY, None, r_below, r_above)
    piece = body.with_halfspaces([below if has_below else above])
    return Residual(ResidualKind.BODY, piece, r_below, r_above)


@dataclass(frozen=True)
class ResidualSequence:
    bodies: list
    failed_at: int | None = None

    @property
    def ok(self) -> bool:
        return self.failed_at is None


def residual_sequence(body: ConvexBody, planks) -> ResidualSequence:
    """Closures X_1..X_k of successive residuals; ``failed_at`` is the 1-based first non-convex step."""
    bodies = []
    current = body
    emptied = False
    for m, p in enumerate(planks, start=1):
        if emptied:
            bodies.append(current)
            continue
        res = convex_residual(current, p)
        if res.kind is ResidualKind.NOT_CONVEX:
            return ResidualSequence(bodies, m)
        if res.kind is ResidualKind.EMPTY:
            current = empty_like(current)
            emptied = True
        else:
            current = res.body
        bodies.append(current)
    return ResidualSequence(bodies)
