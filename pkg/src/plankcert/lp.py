"""Small dense linear programming over an ordered field.

Every LP in this package has the shape

    maximize  c . x   subject to  A x <= b,   x free,

with few variables (the ambient dimension, plus one for margin problems) and
a modest number of constraints.  It is solved through its dual

    minimize  b . y   subject to  A^T y = c,   y >= 0,

whose tableau has only ``len(c)`` rows.  The primal optimum is recovered from
the optimal dual basis by solving the active constraints as equalities, so the
returned point is always a vertex.

Arithmetic is generic: ``Fraction``/``QuadNumber`` entries give exact answers
with ``tol=0``; floats use Bland's rule with a small pivot tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

FLOAT_PIVOT_TOL = 1e-11


class LPError(Exception):
    pass


class Infeasible(LPError):
    """The primal constraint set A x <= b is empty."""


class Unbounded(LPError):
    """The primal objective is unbounded above (or the problem is degenerate)."""


@dataclass(frozen=True)
class LPResult:
    value: object
    x: tuple
    active: tuple


def _pivot(T, basis, r, j):
    row = T[r]
    piv = row[j]
    T[r] = row = [v / piv for v in row]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[j]
        if f:
            T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = j


def _simplex(T, basis, cost, allowed, tol):
    """Minimize ``cost . y`` on tableau ``T`` (rows ``[coeffs..., rhs]``).

    Bland's rule throughout.  Returns False when the objective is unbounded below.
    """
    ncols = len(T[0]) - 1
    while True:
        # reduced costs: cost_j - sum_r cost_{basis[r]} T[r][j]
        entering = -1
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            rc = cost[j]
            for r, bj in enumerate(basis):
                cb = cost[bj]
                if cb:
                    rc = rc - cb * T[r][j]
            if rc < -tol:
                entering = j
                break
        if entering < 0:
            return True
        leave = -1
        best = None
        for r, row in enumerate(T):
            a = row[entering]
            if a > tol:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave < 0:
            return False
        _pivot(T, basis, leave, entering)


def _solve_square(rows, rhs, tol):
    """Gaussian elimination with partial pivoting on a square system."""
    n = len(rows)
    M = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(M[i][col]))
        if M[piv][col] == 0 or abs(M[piv][col]) <= tol:
            raise Unbounded("singular active set")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for i in range(n):
            if i != col and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return tuple(M[i][n] for i in range(n))


def _dual_phase_one(A, c, tol, zero, one):
    """Build and solve phase 1 for ``A^T y = c, y >= 0``.

    Returns ``(T, basis, m)`` with a feasible basis, or None when infeasible.
    """
    m = len(A)
    n = len(c)
    T = []
    for i in range(n):
        sgn = -1 if c[i] < 0 else 1
        row = [A[j][i] * sgn for j in range(m)]
        row += [one if k == i else zero for k in range(n)]
        row.append(c[i] * sgn)
        T.append(row)
    basis = [m + i for i in range(n)]
    cost = [zero] * m + [one] * n
    allowed = [True] * (m + n)
    _simplex(T, basis, cost, allowed, tol)
    infeas = zero
    for r, bj in enumerate(basis):
        if bj >= m:
            infeas = infeas + T[r][-1]
    if infeas > (tol * 100 if tol else 0):
        return None
    # drive zero-level artificials out of the basis
    for r in range(n):
        if basis[r] < m:
            continue
        for j in range(m):
            if j not in basis and abs(T[r][j]) > tol and T[r][j] != 0:
                _pivot(T, basis, r, j)
                break
        else:
            # redundant row: A does not have full column rank
            return None
    return T, basis, m


def dual_feasible(A, c, tol=0) -> bool:
    """True iff ``c`` lies in the cone spanned by the rows of ``A``."""
    zero, one = _unit_constants(A, c)
    return _dual_phase_one(A, c, tol, zero, one) is not None


def _unit_constants(A, c):
    zero = c[0] * 0 if c else A[0][0] * 0
    return zero, zero + 1


def maximize(c, A, b, tol=0) -> LPResult:
    """Maximize ``c . x`` over ``{x : A x <= b}``.

    Raises :class:`Infeasible` if the region is empty and :class:`Unbounded`
    if the objective is not bounded above (including rank-deficient ``A``).
    """
    zero, one = _unit_constants(A, c)
    m = len(A)
    n = len(c)
    if m == 0:
        raise Unbounded("no constraints")
    phase = _dual_phase_one(A, c, tol, zero, one)
    if phase is None:
        raise Unbounded("objective direction not in the constraint cone")
    T, basis, _ = phase
    cost = list(b) + [zero] * n
    allowed = [True] * m + [False] * n
    if not _simplex(T, basis, cost, allowed, tol):
        raise Infeasible("dual unbounded")
    active = tuple(sorted(basis))
    rows = [A[j] for j in active]
    rhs = [b[j] for j in active]
    x = _solve_square(rows, rhs, tol)
    value = zero
    for ci, xi in zip(c, x):
        value = value + ci * xi
    return LPResult(value, x, active)
