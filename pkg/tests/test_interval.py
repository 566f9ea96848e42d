from fractions import Fraction

from hypothesis import given
import hypothesis.strategies as st

from hankelbound.interval import Interval, eval_tree, horner_tree

from conftest import polys

F = Fraction
endpoint = st.fractions(-3, 3, max_denominator=50)


@st.composite
def intervals(draw):
    a, b = sorted((draw(endpoint), draw(endpoint)))
    return a, b


def points_in(a, b, k=5):
    return [a + (b - a) * F(i, k) for i in range(k + 1)]


@given(intervals(), intervals())
def test_arithmetic_encloses_exact(p, q):
    A, B = Interval.hull(*p), Interval.hull(*q)
    for u in points_in(*p):
        for v in points_in(*q):
            for op, enc in ((lambda s, t: s + t, A + B), (lambda s, t: s - t, A - B),
                            (lambda s, t: s * t, A * B)):
                val = op(u, v)
                assert F(enc.lo) <= val <= F(enc.hi)


@given(intervals(), st.integers(0, 7))
def test_power_encloses_exact(p, n):
    enc = Interval.hull(*p) ** n
    for u in points_in(*p, 8):
        assert F(enc.lo) <= u ** n <= F(enc.hi)


def test_from_rational_is_tight():
    iv = Interval.from_rational(F(1, 3))
    assert F(iv.lo) < F(1, 3) < F(iv.hi)
    assert Interval.from_rational(F(1, 2)).width == 0


def test_exact_zero_kept():
    assert (Interval(0.0) * Interval(-1e300, 1e300)).lo == 0.0
    assert (Interval(0.0, 1.0) ** 3).lo == 0.0


@given(polys(max_terms=5), intervals(), intervals())
def test_horner_encloses(poly, bx, by):
    poly = poly.subs({"c1": 1, "c2": 1, "c3": 1, "c4": 1})
    tree = horner_tree(poly, ("x", "y"))
    enc = eval_tree(tree, [Interval.hull(*bx), Interval.hull(*by)])
    for u in points_in(*bx, 4):
        for v in points_in(*by, 4):
            val = poly.eval({"x": u, "y": v})
            assert F(enc.lo) <= val <= F(enc.hi)
