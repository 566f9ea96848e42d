"""Hankel determinants of the coefficient sequence, built symbolically."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classmodel import ArityMismatch, CoeffTable
from .polycore import MultiPoly, VARIABLES

SCHWARZ_WEIGHTS = {"c1": 1, "c2": 2, "c3": 3, "c4": 4}


class OrderTooLow(ValueError):
    pass


@dataclass(frozen=True)
class HankelPoly:
    q: int
    n: int
    scale: Fraction
    poly: MultiPoly

    @property
    def weight(self) -> int:
        return self.q * (self.n - 1) + self.q * (self.q - 1)


def determinant(matrix):
    """Cofactor expansion along the first row; fine for the q <= 3 in use."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = None
    for j in range(size):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        if total is None:
            total = term
        elif j % 2:
            total = total - term
        else:
            total = total + term
    return total


def hankel_matrix(table: CoeffTable, q: int, n: int) -> list:
    if q < 1 or n < 1:
        raise ValueError("q and n must be positive")
    if table.order < n + 2 * q - 2:
        raise OrderTooLow(f"H_{q}({n}) needs a_{n + 2 * q - 2}; table has order {table.order}")
    return [[table[n + i + j] for j in range(q)] for i in range(q)]


def hankel_poly(table: CoeffTable, q: int = 3, n: int = 1, scale=1) -> HankelPoly:
    scale = Fraction(scale)
    poly = determinant(hankel_matrix(table, q, n))
    return HankelPoly(q, n, scale, poly.scale(scale))


def hankel_eval(table: CoeffTable, q: int, n: int, point):
    """Signed value of H_q(n) at a Schwarz coefficient tuple."""
    hp = hankel_poly(table, q, n)
    point = list(point)
    need = table.order - 1
    if len(point) < need:
        raise ArityMismatch(f"need {need} Schwarz coefficients, got {len(point)}")
    assignment = {}
    for k in range(need):
        v = point[k]
        assignment[VARIABLES[k]] = Fraction(v) if isinstance(v, (int, Fraction)) else v
    return hp.poly.eval(assignment)


def h3(table: CoeffTable, scale=1) -> HankelPoly:
    return hankel_poly(table, 3, 1, scale)


def h2_2(table: CoeffTable, scale=1) -> HankelPoly:
    return hankel_poly(table, 2, 2, scale)


class NumericPoly:
    """Float/complex evaluator for a MultiPoly in c1..c4.

    Works elementwise on numpy arrays, which is what the sampler and the
    search feed it.
    """

    def __init__(self, poly: MultiPoly):
        self.poly = poly
        self._terms = [(float(coef), exps[:4]) for exps, coef in poly.sorted_terms()]
        if any(any(exps[4:]) for exps, _ in poly.items()):
            raise ValueError("NumericPoly only handles c1..c4")

    def __call__(self, c1, c2, c3, c4):
        cs = (c1, c2, c3, c4)
        total = 0.0
        for coef, exps in self._terms:
            term = coef
            for v, e in zip(cs, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total
