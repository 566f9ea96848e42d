"""Float intervals with outward rounding.

Each arithmetic result is widened by one ulp on both sides with
``math.nextafter``.  That is cruder than switching the FPU rounding mode but
sound: round-to-nearest is off by at most half an ulp.
"""

from __future__ import annotations

import math
from fractions import Fraction

_INF = math.inf


def _down(v: float) -> float:
    return math.nextafter(v, -_INF)


def _up(v: float) -> float:
    return math.nextafter(v, _INF)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_rational(cls, q) -> "Interval":
        """Tightest float interval containing the rational ``q``."""
        q = Fraction(q)
        f = float(q)
        if Fraction(f) == q:
            return cls(f, f)
        if Fraction(f) < q:
            return cls(f, _up(f))
        return cls(_down(f), f)

    @classmethod
    def hull(cls, lo, hi) -> "Interval":
        a = cls.from_rational(lo)
        b = cls.from_rational(hi)
        return cls(a.lo, b.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def __add__(self, other):
        if not isinstance(other, Interval):
            other = Interval.from_rational(other) if isinstance(other, (int, Fraction)) else Interval(other)
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        if not isinstance(other, Interval):
            other = Interval.from_rational(other) if isinstance(other, (int, Fraction)) else Interval(other)
        return Interval(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Interval):
            other = Interval.from_rational(other) if isinstance(other, (int, Fraction)) else Interval(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0 and c >= 0:
            pairs = ((a, c), (b, d))
        else:
            pairs = ((a, c), (a, d), (b, c), (b, d))
        lo, hi = _INF, -_INF
        for u, v in pairs:
            if u == 0 or v == 0:
                plo = phi = 0.0
            else:
                p = u * v
                plo, phi = _down(p), _up(p)
            lo, hi = min(lo, plo), max(hi, phi)
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n == 0:
            return Interval(1.0)
        if n == 1:
            return self
        a, b = self.lo, self.hi
        if n % 2 == 0:
            if a >= 0:
                lo, hi = a ** n, b ** n
            elif b <= 0:
                lo, hi = b ** n, a ** n
            else:
                lo, hi = 0.0, max(a ** n, b ** n)
        else:
            lo, hi = a ** n, b ** n
        # float ** int can be off by more than half an ulp; widen generously
        exact_lo = lo == 0 and 0.0 in (a, b)
        exact_hi = hi == 0 and 0.0 in (a, b)
        for _ in range(n.bit_length() + 1):
            lo, hi = _down(lo), _up(hi)
        if exact_lo or (n % 2 == 0 and lo < 0):
            lo = 0.0
        if exact_hi:
            hi = 0.0
        return Interval(lo, hi)

    def intersect(self, other: "Interval"):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def horner_tree(poly, variables: tuple):
    """Nested-Horner representation of ``poly`` in the given variable order.

    Leaves are coefficient Intervals; an inner node is a list of
    ``(exponent, subtree)`` pairs in decreasing exponent order.
    """
    from .polycore import _var_index

    idx = [_var_index(v) for v in variables]
    rows = [([exps[i] for i in idx], coef) for exps, coef in poly.items()]
    extra = [i for exps, _ in poly.items() for i, e in enumerate(exps) if e and i not in idx]
    if extra:
        raise ValueError("polynomial has variables outside the evaluation order")
    return _build(rows, 0, len(idx))


def _build(rows, depth, nvars):
    if depth == nvars:
        total = sum((coef for _, coef in rows), Fraction(0))
        return Interval.from_rational(total)
    groups: dict = {}
    for exps, coef in rows:
        groups.setdefault(exps[depth], []).append((exps, coef))
    return [(e, _build(groups[e], depth + 1, nvars)) for e in sorted(groups, reverse=True)]


def eval_tree(tree, box: list) -> Interval:
    """Evaluate a Horner tree on a list of Intervals (one per variable)."""
    return _eval(tree, box, 0)


def _eval(node, box, depth):
    if isinstance(node, Interval):
        return node
    var = box[depth]
    acc = None
    prev = None
    for e, sub in node:
        val = _eval(sub, box, depth + 1)
        if acc is None:
            acc = val
        else:
            acc = acc * var ** (prev - e) + val
        prev = e
    if acc is None:
        return Interval(0.0)
    if prev:
        acc = acc * var ** prev
    return acc
