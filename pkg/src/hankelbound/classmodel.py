"""Taylor coefficients of a class of normalised analytic functions as polynomials
in the Schwarz coefficients.

A class is fixed by a rational ``lam`` in the relation

    [z f'(z)]' (1 - w(z)) = (1 + lam w(z)) f'(z),

equivalently ``z f'' = w [(1 + lam) f' + z f'']``.  ``lam = 2`` is the class F
(Re[1 + z f''/f'] > -1/2), ``lam = -2`` the class G (Re[1 + z f''/f'] < 3/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polycore import ONE, ZERO, MultiPoly, PolyError, TruncSeries, VARIABLES


class UnsupportedClass(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ClassSpec:
    name: str
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.name == "F" and self.lam != 2:
            raise UnsupportedClass("class F requires lambda = 2")
        if self.name == "G" and self.lam != -2:
            raise UnsupportedClass("class G requires lambda = -2")

    @classmethod
    def parse(cls, text: str) -> "ClassSpec":
        """Accepts ``F``, ``G`` or ``lambda=<rational>``."""
        text = text.strip()
        if text.upper() == "F":
            return F_CLASS
        if text.upper() == "G":
            return G_CLASS
        if text.lower().startswith("lambda="):
            lam = Fraction(text.split("=", 1)[1])
            return cls(f"lambda={lam}", lam)
        raise UnsupportedClass(f"unknown class {text!r}; use F, G or lambda=<q>")

    @property
    def is_builtin(self) -> bool:
        return self.name in ("F", "G")


F_CLASS = ClassSpec("F", Fraction(2))
G_CLASS = ClassSpec("G", Fraction(-2))


@dataclass(frozen=True)
class CoeffTable:
    spec: ClassSpec
    order: int
    a: tuple  # a[0] is a_2

    def __getitem__(self, n: int) -> MultiPoly:
        """``table[n]`` is a_n, with a_1 = 1."""
        if n == 1:
            return ONE
        if not 2 <= n <= self.order:
            raise IndexError(f"a_{n} is outside the table (order {self.order})")
        return self.a[n - 2]

    def as_dict(self) -> dict:
        return {f"a{n}": self[n] for n in range(2, self.order + 1)}


def schwarz_series(order: int) -> TruncSeries:
    """w(z) = c1 z + ... + c4 z^4 truncated at ``order`` (at most 5)."""
    if order > 5:
        raise PolyError("only c1..c4 are modelled; order must be <= 5")
    coeffs = [ZERO] + [MultiPoly.var(VARIABLES[k]) for k in range(min(order, 4))]
    return TruncSeries(coeffs, order)


def _f_series(a: list, order: int) -> TruncSeries:
    return TruncSeries([ZERO, ONE, *a], order)


def relation_residual(spec: ClassSpec, f: TruncSeries) -> TruncSeries:
    """z f'' - w [(1 + lam) f' + z f''], known through z^(order-1)."""
    fp = f.differentiate()
    zfpp = fp.differentiate().shift().truncate(fp.order)
    w = schwarz_series(fp.order)
    return zfpp - w * (fp * (1 + spec.lam) + zfpp)


def derive_coefficients(spec: ClassSpec, order: int = 5) -> CoeffTable:
    """Solve the triangular recurrence for a_2..a_order by equating z^n terms.

    The z^n coefficient of the right-hand side only involves a_1..a_n since w
    has no constant term, while the left-hand side contributes n(n+1) a_{n+1}.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    if order > 5:
        raise ValueError("orders above 5 need c5 and beyond, which are not modelled")
    a: list = []
    for n in range(1, order):
        f = _f_series(a, n + 1)
        fp = f.differentiate()
        zfpp = fp.differentiate().shift().truncate(n)
        rhs = schwarz_series(n) * (fp.truncate(n) * (1 + spec.lam) + zfpp)
        a.append(rhs[n].scale(Fraction(1, n * (n + 1))))
    return CoeffTable(spec, order, tuple(a))


def residual_vanishes(table: CoeffTable) -> bool:
    res = relation_residual(table.spec, _f_series(list(table.a), table.order))
    return all(c.is_zero() for c in res.coeffs)


def eval_coefficients(table: CoeffTable, point) -> list:
    """Numeric a_2..a_N at a Schwarz coefficient tuple (exact if rational)."""
    point = list(point)
    need = table.order - 1
    if len(point) < need:
        raise ArityMismatch(f"need {need} Schwarz coefficients, got {len(point)}")
    assignment = {VARIABLES[k]: _num(point[k]) for k in range(need)}
    return [p.eval(assignment) for p in table.a]


def _num(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return v


def closed_form_coefficients(spec: ClassSpec, c, k: int, order: int = 5) -> list:
    """a_2..a_order for w(z) = c z^k, from the closed form f' = (1 - c z^k)^(-(1 + lam)/k).

    Independent of the recurrence; used as a sanity oracle.
    """
    if k < 1:
        raise ValueError("k must be positive")
    c = Fraction(c)
    s = (1 + spec.lam) / k
    g = [Fraction(0)] * order  # coefficients of f' through z^(order-1)
    term = Fraction(1)
    j = 0
    while j * k < order:
        g[j * k] = term * c ** j
        term = term * (s + j) / (j + 1)
        j += 1
    return [g[n - 1] / n for n in range(2, order + 1)]
