"""Discrepancies between the transcribed reference formulas and what is computed.

Every entry is recomputed from scratch on each call.  An entry is
``confirmed`` only when all its evidence items still hold, so a change in
the machinery that silently "agrees" with a typo shows up as a lost entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import reference
from .classmodel import CoeffTable, F_CLASS, G_CLASS, derive_coefficients
from .decomp import builtin_decomposition
from .hankel import h3
from .optimize import find_critical_points
from .polycore import c2, y

REQUIRED = ("a4-prefactor", "c2-square-vs-cube", "critical-point-0.5-0.75")


@dataclass
class Evidence:
    name: str
    holds: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


@dataclass
class Erratum:
    key: str
    location: str
    printed: str
    computed: str
    resolution: str
    evidence: list = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return bool(self.evidence) and all(e.holds for e in self.evidence)

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "location": self.location,
            "printed": self.printed,
            "computed": self.computed,
            "resolution": self.resolution,
            "confirmed": self.confirmed,
            "evidence": [e.to_json() for e in self.evidence],
        }


def _a4_prefactor() -> Erratum:
    table = derive_coefficients(F_CLASS, 5)
    printed = reference.PRINTED_COEFFS["F"]["a4"]
    derived = table[4]
    ev = [
        Evidence("printed a4 differs from derived a4", printed != derived,
                 f"printed {printed}; derived {derived}"),
        Evidence("derived a4 is exactly printed a4 / 4", derived == printed.scale(Fraction(1, 4)),
                 "ratio 1/4, i.e. prefactor 1/8 instead of 1/2"),
    ]
    # w = z: f' = (1 - z)^-3, so a4 = C(5,2)/4 = 5/2
    at_z = {"c1": Fraction(1), "c2": Fraction(0), "c3": Fraction(0)}
    d_val, p_val = derived.eval(at_z), printed.eval(at_z)
    ev.append(Evidence("w = z oracle picks the derived prefactor", d_val == Fraction(5, 2) and p_val != d_val,
                       f"binomial a4 = 5/2; derived {d_val}; printed {p_val}"))
    a = list(table.a)
    a[2] = printed
    typo_table = CoeffTable(F_CLASS, 5, tuple(a))
    scale = reference.H3_SCALE["F"]
    with_typo = h3(typo_table, scale).poly
    with_fix = h3(table, scale).poly
    ev.append(Evidence("printed 320*H3 is consistent only with the derived a4",
                       with_fix == reference.PRINTED_H3["F"] and with_typo != reference.PRINTED_H3["F"],
                       f"c3^2 coefficient with printed a4: {with_typo.coefficient(c3=2)};"
                       f" with derived a4: {with_fix.coefficient(c3=2)}"))
    return Erratum("a4-prefactor", "class F coefficient list, a4",
                   str(printed), str(derived), "derived value used throughout", ev)


def _c2_power() -> Erratum:
    scale = reference.H3_SCALE["G"]
    hp = h3(derive_coefficients(G_CLASS, 5), scale).poly
    cube = hp.coefficient(c2=3)
    square = hp.coefficient(c2=2)
    d = builtin_decomposition(G_CLASS)
    printed = reference.PRINTED_G_BOUND_DISPLAY
    ours = d.majorant + d.constant
    diff = printed - ours
    ev = [
        Evidence("scaled H3 carries 76 c2^3 and no c2^2 term", cube == 76 and square == 0,
                 f"c2^3 coefficient {cube}; c2^2 coefficient {square}"),
        Evidence("printed bound display differs from K + h", not diff.is_zero(),
                 f"display - (K + h) = {diff}"),
        Evidence("difference is exactly 76(y^2 - y^3)", diff == (y ** 2 - y ** 3).scale(76), str(diff)),
        Evidence("majorant term 76 y^3 traces to a 76 c2^3 group",
                 any(g.expression() == (c2 ** 3).scale(76) for g in d.groups), "group 76*c2^3 present"),
    ]
    return Erratum("c2-square-vs-cube", "class G bound display, c2 term",
                   "76|c2|^2", "76|c2|^3 (majorant term 76 y^3)", "cubic form adopted", ev)


def _g_critical_set():
    d = builtin_decomposition(G_CLASS)
    return d.majorant, find_critical_points(d.majorant)


def _critical_point() -> Erratum:
    h, crit = _g_critical_set()
    px, py, pval, _ = reference.PRINTED_CRITICAL["G"][0]
    pt = {"x": Fraction(px), "y": Fraction(py)}
    value = h.eval(pt)
    gx, gy = h.diff("x").eval(pt), h.diff("y").eval(pt)
    near = [p for p in crit.interior if abs(p.x - px) < 1e-3 and abs(p.y - py) < 1e-3]
    boundary_hit = [p for p in crit.boundary if p.exact is not None
                    and h.eval({"x": p.exact[0], "y": p.exact[1]}) == Fraction(pval)]
    ev = [
        Evidence("h(0.5, 0.75) is not 69.75", value != Fraction(pval),
                 f"h(1/2, 3/4) = {value} = {float(value):.6f}"),
        Evidence("gradient at (0.5, 0.75) is nonzero", gx != 0 or gy != 0,
                 f"h_x = {gx}; h_y = {gy}"),
        Evidence("certified interior critical set has no point near (0.5, 0.75)",
                 not near and not crit.inconclusive,
                 f"interior points: {[(round(p.x, 6), round(p.y, 6)) for p in crit.interior]}"),
        Evidence("the value 69.75 occurs at a boundary critical point",
                 bool(boundary_hit),
                 f"boundary points with value 279/4: {[tuple(str(v) for v in p.exact) for p in boundary_hit]}"),
    ]
    return Erratum("critical-point-0.5-0.75", "class G interior critical points",
                   "(0.5, 0.75) with h = 69.75", f"not a critical point; h = {value}",
                   "independently enumerated critical set reported instead", ev)


def _corner_label() -> Erratum:
    h = builtin_decomposition(G_CLASS).majorant
    at01 = h.eval({"x": 0, "y": 1})
    at10 = h.eval({"x": 1, "y": 0})
    ev = [Evidence("h(1,0) = 72 and h(0,1) = 76", at10 == 72 and at01 == 76,
                   f"h(1,0) = {at10}; h(0,1) = {at01}")]
    return Erratum("corner-label-x-1", "class G edge x = 1", "h(0,1) = 72", "h(1,0) = 72",
                   "both corners evaluated", ev)


def _lemma_region() -> Erratum:
    from .schwarz import ps_admissible

    mu, nu = reference.PRINTED_PS_PARAMS["F"][0]
    in_d2 = Fraction(1, 2) <= abs(mu) <= 2 and Fraction(4, 27) * (abs(mu) + 1) ** 3 - (abs(mu) + 1) <= nu <= 1
    ev = [
        Evidence("(1/10, 0) lies outside the quoted region", not in_d2, "|mu| = 1/10 < 1/2"),
        Evidence("(1/10, 0) is admissible in the wider region", ps_admissible((mu, nu)), "|mu| <= 1/2, |nu| <= 1"),
    ]
    return Erratum("lemma-region", "class F application of the c3 + mu c1 c2 + nu c1^3 bound",
                   "region 1/2 <= |mu| <= 2 only", "(1/10, 0) needs |mu| <= 1/2, |nu| <= 1",
                   "union of both regions used", ev)


def ledger() -> list:
    """All discrepancy entries, recomputed."""
    return [_a4_prefactor(), _c2_power(), _critical_point(), _corner_label(), _lemma_region()]


def ledger_ok(entries=None) -> bool:
    """True when every required entry is present and confirmed."""
    entries = ledger() if entries is None else entries
    found = {e.key for e in entries if e.confirmed}
    return all(k in found for k in REQUIRED)


def for_class(name: str, entries=None) -> list:
    entries = ledger() if entries is None else entries
    tag = f"class {name} "
    return [e for e in entries if e.location.startswith(tag)]
