from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from hankelbound.polycore import NVARS, MultiPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=12)
exponent = st.tuples(*[st.integers(0, 2)] * NVARS)


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.dictionaries(exponent, small_fraction, max_size=max_terms))
    return MultiPoly(terms)


def F(a, b=1):
    return Fraction(a, b)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
