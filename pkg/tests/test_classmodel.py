from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
import hypothesis.strategies as st

from hankelbound import reference
from hankelbound.classmodel import (
    F_CLASS, G_CLASS, ArityMismatch, ClassSpec, UnsupportedClass, closed_form_coefficients,
    derive_coefficients, eval_coefficients, residual_vanishes,
)
from hankelbound.polycore import parse

F = Fraction


def sympy_coefficients(lam, order):
    """Oracle: solve the coefficient equations of the defining relation with sympy."""
    z = sp.Symbol("z")
    cs = sp.symbols("c1:5")
    a = sp.symbols(f"a2:{order + 1}")
    f = z + sum(a[k] * z ** (k + 2) for k in range(order - 1))
    w = sum(cs[k] * z ** (k + 1) for k in range(4))
    fp = sp.diff(f, z)
    rel = sp.expand(sp.diff(z * fp, z) * (1 - w) - (1 + lam * w) * fp)
    eqs = [rel.coeff(z, n) for n in range(1, order)]
    sol = sp.solve(eqs, a, dict=True)[0]
    return {f"a{k + 2}": sp.expand(sol[a[k]]) for k in range(order - 1)}


def to_sympy(poly):
    return sp.expand(sp.sympify(str(poly).replace("^", "**")))


@pytest.mark.parametrize("spec", [F_CLASS, G_CLASS, ClassSpec("lambda=1/3", F(1, 3))])
def test_against_sympy(spec):
    table = derive_coefficients(spec, 5)
    oracle = sympy_coefficients(sp.Rational(spec.lam.numerator, spec.lam.denominator), 5)
    for key, poly in table.as_dict().items():
        assert sp.expand(to_sympy(poly) - oracle[key]) == 0, key


def test_f_reference_list():
    t = derive_coefficients(F_CLASS, 5)
    printed = reference.PRINTED_COEFFS["F"]
    assert t[2] == printed["a2"] and t[3] == printed["a3"] and t[5] == printed["a5"]
    assert t[2] == parse("3/2*c1")
    assert t[3] == parse("2*c1^2 + 1/2*c2")
    assert t[4] == parse("1/8*(2*c3 + 13*c1*c2 + 20*c1^3)")
    assert t[4] != printed["a4"]


def test_g_reference_list():
    t = derive_coefficients(G_CLASS, 5)
    for key, poly in reference.PRINTED_COEFFS["G"].items():
        assert t.as_dict()[key] == poly


def test_zero_point_annihilates():
    for spec in (F_CLASS, G_CLASS, ClassSpec("lambda=7", F(7))):
        vals = eval_coefficients(derive_coefficients(spec, 5), [0, 0, 0, 0])
        assert vals == [0, 0, 0, 0]


@pytest.mark.parametrize("spec,c,expected", [
    (F_CLASS, (0, 1, 0, 0), [0, F(1, 2), 0, F(3, 8)]),
    (G_CLASS, (0, 1, 0, 0), [0, F(-1, 6), 0, F(-1, 40)]),
    (F_CLASS, (1, 0, 0, 0), [F(3, 2), 2, F(5, 2), 3]),
])
def test_eval_examples(spec, c, expected):
    assert eval_coefficients(derive_coefficients(spec, 5), c) == expected


def test_arity():
    with pytest.raises(ArityMismatch):
        eval_coefficients(derive_coefficients(F_CLASS, 5), [1, 0])


@given(st.fractions(-4, 4, max_denominator=6), st.integers(1, 4),
       st.fractions(-1, 1, max_denominator=9))
def test_closed_form_oracle(lam, k, c):
    """w = c z^k integrates in closed form; the recurrence must agree."""
    spec = ClassSpec(f"lambda={lam}", lam)
    table = derive_coefficients(spec, 5)
    point = [F(0)] * 4
    point[k - 1] = c
    assert eval_coefficients(table, point) == closed_form_coefficients(spec, c, k, 5)


def test_binomial_for_w_equal_z():
    assert closed_form_coefficients(F_CLASS, 1, 1) == [F(3, 2), 2, F(5, 2), 3]


@given(st.fractions(-5, 5, max_denominator=8), st.integers(2, 5))
def test_residual_and_weights(lam, order):
    table = derive_coefficients(ClassSpec(f"lambda={lam}", lam), order)
    assert residual_vanishes(table)
    for n in range(2, order + 1):
        assert table[n].weights({"c1": 1, "c2": 2, "c3": 3, "c4": 4}) <= {n - 1}


def test_class_parsing():
    assert ClassSpec.parse("F") is F_CLASS
    assert ClassSpec.parse("g") is G_CLASS
    assert ClassSpec.parse("lambda=-3/2").lam == F(-3, 2)
    with pytest.raises(UnsupportedClass):
        ClassSpec.parse("H")
    with pytest.raises(UnsupportedClass):
        ClassSpec("F", 3)


@pytest.mark.parametrize("order", [1, 6])
def test_order_limits(order):
    with pytest.raises(ValueError):
        derive_coefficients(F_CLASS, order)


def test_a1_and_bounds():
    t = derive_coefficients(F_CLASS, 3)
    assert t[1] == parse("1")
    with pytest.raises(IndexError):
        t[4]
