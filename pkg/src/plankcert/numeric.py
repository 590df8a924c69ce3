"""Scalar arithmetic backends.

Two interchangeable backends are provided: exact rationals (``fractions.Fraction``,
extended by :class:`QuadNumber` so that numbers of the form ``a + b*sqrt(3)`` are
exact too) and IEEE doubles with a single global decision tolerance.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational

FLOAT_EPS = 1e-9
FLOAT_EPS_CONV = 1e-7


class QuadNumber:
    """Exact element ``a + b*sqrt(3)`` of the field Q(sqrt 3)."""

    __slots__ = ("a", "b")
    ROOT = 3

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def _lift(cls, other):
        if isinstance(other, QuadNumber):
            return other
        if isinstance(other, (int, Rational)):
            return cls(other, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) + other if isinstance(other, float) else NotImplemented
        return QuadNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) - other if isinstance(other, float) else NotImplemented
        return QuadNumber(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return other - float(self) if isinstance(other, float) else NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) * other if isinstance(other, float) else NotImplemented
        return QuadNumber(self.a * o.a + self.ROOT * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.a * self.a - self.ROOT * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("QuadNumber division by zero")
        return QuadNumber(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) / other if isinstance(other, float) else NotImplemented
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return other / float(self) if isinstance(other, float) else NotImplemented
        return o * self._inverse()

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 3 b^2
        lhs = self.a * self.a
        rhs = self.ROOT * self.b * self.b
        return sa if lhs > rhs else (-sa if lhs < rhs else 0)

    def _cmp(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, float):
                f = float(self)
                return (f > other) - (f < other)
            return None
        return (self - o).sign()

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.ROOT)

    def __bool__(self):
        return self.sign() != 0

    def __repr__(self):
        return f"QuadNumber({self.a}, {self.b})"

    def __str__(self):
        return format_scalar(self)


SQRT3 = QuadNumber(0, 1)


def simplify(x):
    """Collapse a QuadNumber with zero surd part to a Fraction."""
    if isinstance(x, QuadNumber) and x.b == 0:
        return x.a
    return x


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, QuadNumber)) and not isinstance(x, bool)


def _to_exact(x):
    if isinstance(x, QuadNumber):
        return simplify(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r} in rational backend")
        return Fraction(repr(x))
    if isinstance(x, str):
        return parse_scalar(x, exact=True)
    return Fraction(x)


def _to_float(x):
    if isinstance(x, str):
        return parse_scalar(x, exact=False)
    return float(x)


@dataclass(frozen=True)
class Backend:
    """Numeric backend: scalar coercion plus the decision tolerances.

    ``eps`` is the tolerance every comparison uses; ``eps_conv`` is the looser
    threshold above which a residual cell counts as genuinely present.  Both are
    zero for the rational backend, where decisions are exact.
    """

    name: str
    eps: float
    eps_conv: float

    @property
    def exact(self) -> bool:
        return self.name == "rational"

    def coerce(self, x):
        return _to_exact(x) if self.exact else _to_float(x)

    def vector(self, xs) -> tuple:
        return tuple(self.coerce(x) for x in xs)

    def sqrt(self, x):
        """Square root; exact when the result lies in Q(sqrt 3), else a close rational approximation."""
        if not self.exact:
            return math.sqrt(x)
        root = exact_sqrt(x)
        if root is not None:
            return root
        return Fraction(math.sqrt(float(x)))

    def norm(self, v):
        """Euclidean norm (exact whenever representable in the rational backend)."""
        if not self.exact:
            return math.sqrt(math.fsum(c * c for c in v))
        return self.sqrt(sum((c * c for c in v), Fraction(0)))

    def with_tolerance(self, eps: float) -> "Backend":
        if self.exact:
            return self
        return replace(self, eps=eps)


FLOAT = Backend("float", FLOAT_EPS, FLOAT_EPS_CONV)
RATIONAL = Backend("rational", 0, 0)


def get_backend(name: str, tol: float | None = None) -> Backend:
    if name == "float":
        return FLOAT if tol is None else FLOAT.with_tolerance(tol)
    if name == "rational":
        return RATIONAL
    raise ValueError(f"unknown backend {name!r}")


def _fraction_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(x):
    """Exact square root in Q(sqrt 3), or None if it is not in that field."""
    x = simplify(x)
    if isinstance(x, QuadNumber):
        # (p + q sqrt3)^2 = p^2 + 3q^2 + 2pq sqrt3; try the two real solutions
        a, b = x.a, x.b
        disc = _fraction_sqrt(a * a - 3 * b * b)
        if disc is None:
            return None
        for p2 in ((a + disc) / 2, (a - disc) / 2):
            p = _fraction_sqrt(p2)
            if p is None or p == 0:
                continue
            q = b / (2 * p)
            cand = QuadNumber(p, q)
            if cand.sign() > 0 and cand * cand == x:
                return cand
        return None
    q = Fraction(x)
    r = _fraction_sqrt(q)
    if r is not None:
        return r
    r = _fraction_sqrt(q / 3)
    if r is not None:
        return QuadNumber(0, r)
    return None


def _fmt_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    """Serialize a scalar: floats stay floats, exact values become strings."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    x = simplify(x)
    if isinstance(x, QuadNumber):
        sign = "+" if x.b > 0 else "-"
        surd = f"{_fmt_fraction(abs(x.b))}*sqrt(3)"
        if x.a == 0:
            return surd if x.b > 0 else sign + surd
        return f"{_fmt_fraction(x.a)}{sign}{surd}"
    return _fmt_fraction(Fraction(x))


_SURD_RE = re.compile(r"^\s*(?:([-+]?\d+(?:/\d+)?)\s*([-+])|([-+]?))\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(3\)\s*$")


def parse_scalar(s, exact: bool):
    """Inverse of :func:`format_scalar`; accepts JSON numbers and strings."""
    if isinstance(s, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(s, (int, float)):
        return _to_exact(s) if exact else float(s)
    if not isinstance(s, str):
        raise ValueError(f"not a scalar: {s!r}")
    text = s.strip()
    if text in ("inf", "+inf"):
        return math.inf
    m = _SURD_RE.match(text)
    if m:
        a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        sign = m.group(2) if m.group(1) else m.group(3)
        b = Fraction(m.group(4))
        value = QuadNumber(a, -b if sign == "-" else b)
        return simplify(value) if exact else float(value)
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a scalar: {s!r}") from exc
    return q if exact else float(q)


def to_float(x) -> float:
    return float(x)
