"""Transcribed reference formulas used as cross-check targets.

These are transcribed as given in the source derivation, typos included,
so that the machinery can flag where they disagree with what it derives.
Nothing here is trusted; every item is compared against computed values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .polycore import MultiPoly, parse

P = parse

# Taylor coefficients, exactly as printed.
PRINTED_COEFFS = {
    "F": {
        "a2": P("3/2*c1"),
        "a3": P("1/2*(4*c1^2 + c2)"),
        "a4": P("1/2*(2*c3 + 13*c1*c2 + 20*c1^3)"),  # prefactor 1/8 is correct
        "a5": P("3/40*(2*c4 + 12*c1*c3 + 46*c1^2*c2 + 40*c1^4 + 5*c2^2)"),
    },
    "G": {
        "a2": P("-1/2*c1"),
        "a3": P("-1/6*c2"),
        "a4": P("-1/24*(2*c3 + c1*c2)"),
        "a5": P("-1/120*(6*c4 + 4*c1*c3 + 3*c2^2 + 2*c1^2*c2)"),
    },
}

CORRECTED_A4_F = P("1/8*(2*c3 + 13*c1*c2 + 20*c1^3)")

# Expected table after the a4 correction.
EXPECTED_COEFFS = {
    "F": {**PRINTED_COEFFS["F"], "a4": CORRECTED_A4_F},
    "G": dict(PRINTED_COEFFS["G"]),
}

H3_SCALE = {"F": Fraction(320), "G": Fraction(8640)}

PRINTED_H3 = {
    "F": P("4*c1^4*c2 + 8*c1^3*c3 + 4*c1*c2*c3 - 23*c1^2*c2^2 - 12*c1^2*c4"
           " + 20*c2^3 - 20*c3^2 + 24*c2*c4"),
    "G": P("-60*c3^2 - 132*c1*c2*c3 + 72*c1^3*c3 + 36*c4*(2*c2 + 3*c1^2)"
           " + 36*c1^4*c2 + 76*c2^3 + 3*c1^2*c2^2"),
}

PRINTED_MAJORANT = {
    "F": (Fraction(20), P("54/5*x^2*y^2 + 8*x^3 - 4*y^3 + 24*y - 24*x^2*y + 12*x^2 - 12*x^4")),
    "G": (Fraction(60), P("756/10*x^2*y^2 + 72*x^3 + 76*y^3 + 36*(2 + x^2)*(1 - x^2 - y^2)")),
}

# Bound display for G as printed: the c2 term carries a square, not a cube.
PRINTED_G_BOUND_DISPLAY = P("60 + 756/10*x^2*y^2 + 72*x^3 + 76*y^2 + 36*(2 + x^2)*(1 - x^2 - y^2)")

PRINTED_PS_PARAMS = {
    "F": [(Fraction(1, 10), Fraction(0)), (Fraction(1, 2), Fraction(0))],
    "G": [(Fraction(11, 10), Fraction(0)), (Fraction(1, 2), Fraction(0))],
}

PROVEN_BOUND = {"F": Fraction(1, 8), "G": Fraction(17, 1080)}
CONJECTURED_BOUND = {"F": Fraction(1, 16), "G": Fraction(19, 2160)}

# Literature values quoted for context only; never certified here.
LITERATURE_H2_2 = {"F": Fraction(21, 64), "G": Fraction(9, 320)}

PRINTED_G_PARTIALS = {
    "x": P("36/5*x*(10*x*(3 - 2*x) + 11*y^2 - 10)"),
    "y": P("12/5*y*(33*x^2 + 95*y - 60)"),
}

PRINTED_CRITICAL = {
    "F": [],
    "G": [
        # (x, y, value, reproducible?)
        (0.5, 0.75, 69.75, False),
        (0.2311, 0.6130, 62.10899, True),
    ],
}


@dataclass(frozen=True)
class EdgeClaim:
    name: str
    poly: Optional[MultiPoly] = None  # restriction should equal this
    derivative: Optional[MultiPoly] = None  # derivative of restriction should equal this
    max_value: Optional[Fraction] = None
    argmax: Optional[dict] = None

    def check(self, restriction: MultiPoly, bound):
        if self.poly is not None:
            ok = restriction == self.poly
            return (self.name, ok, f"restriction = {restriction}; expected {self.poly}")
        if self.derivative is not None:
            var = restriction.variables()[0] if restriction.variables() else "x"
            d = restriction.diff(var)
            ok = d == self.derivative
            return (self.name, ok, f"d/d{var} = {d}; expected {self.derivative}")
        ok = bound.lb == self.max_value and Fraction(bound.ub) - self.max_value <= Fraction(bound.eps)
        if ok and self.argmax:
            ok = all(bound.witness.get(k) == v for k, v in self.argmax.items())
        return (self.name, ok,
                f"certified max in [{bound.lb}, {bound.ub!r}] at {dict((k, str(v)) for k, v in bound.witness.items())};"
                f" expected {self.max_value}")


EDGE_CLAIMS = {
    "F": {
        "x=0": [EdgeClaim("h(0,y) = 24y - 4y^3", poly=P("24*y - 4*y^3")),
                EdgeClaim("max h(0,y) = 20 at y=1", max_value=Fraction(20), argmax={"y": 1})],
        "x=1": [EdgeClaim("h(1,0) = 8", max_value=Fraction(8))],
        "y=0": [EdgeClaim("h(x,0) = x^2(-12x^2+8x+12)", poly=P("x^2*(-12*x^2 + 8*x + 12)")),
                EdgeClaim("max h(x,0) = 8 at x=1", max_value=Fraction(8), argmax={"x": 1})],
        "y=1-x^2": [
            EdgeClaim("g(x) = 74/5x^6 - 108/5x^4 + 8x^3 - 66/5x^2 + 20",
                      poly=P("74/5*x^6 - 108/5*x^4 + 8*x^3 - 66/5*x^2 + 20")),
            EdgeClaim("g'(x) = -12/5 x(1-x)(11+x+37x^2+37x^3)",
                      derivative=P("-12/5*x*(1 - x)*(11 + x + 37*x^2 + 37*x^3)")),
            EdgeClaim("max g = g(0) = 20", max_value=Fraction(20), argmax={"x": 0}),
        ],
    },
    "G": {
        "x=0": [EdgeClaim("h(0,y) = 76y^3 - 72y^2 + 72", poly=P("76*y^3 - 72*y^2 + 72")),
                EdgeClaim("max h(0,y) = 76 at y=1", max_value=Fraction(76), argmax={"y": 1})],
        "x=1": [EdgeClaim("h(1,0) = 72", max_value=Fraction(72))],
        "y=0": [EdgeClaim("h(x,0) = -36x^4 + 72x^3 - 36x^2 + 72", poly=P("-36*x^4 + 72*x^3 - 36*x^2 + 72")),
                EdgeClaim("max h(x,0) = 72", max_value=Fraction(72))],
        "y=1-x^2": [
            EdgeClaim("h(x,1-x^2) = -182/5x^6 + 204/5x^4 + 72x^3 - 402/5x^2 + 76",
                      poly=P("-182/5*x^6 + 204/5*x^4 + 72*x^3 - 402/5*x^2 + 76")),
            EdgeClaim("max h(x,1-x^2) = 76 at x=0", max_value=Fraction(76), argmax={"x": 0}),
        ],
    },
}
