"""Bound decompositions as checkable data.

A decomposition writes ``scale * H3`` as a signed sum of groups
``multiplier * factor**power``.  Each group carries a rule that says how its
modulus is bounded in terms of x = |c1| and y = |c2|:

* ``PS(mu, nu)``: factor is c3 + mu c1 c2 + nu c1^3, bounded by 1;
* ``CarlsonC4``: factor is c4, bounded by 1 - x^2 - y^2;
* ``CarlsonC2``: factor is c2, replaced by y (with y <= 1 - x^2 on Omega);
* ``ModulusSub``: no factor; only the multiplier is bounded.

The multiplier is always bounded termwise by the triangle inequality, with
|c1| -> x and |c2| -> y.  Relaxations then replace an expression E1 by a
larger E2 on Omega, each backed by a nonnegativity certificate for E2 - E1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from . import reference
from .classmodel import F_CLASS, G_CLASS, ClassSpec, UnsupportedClass, derive_coefficients
from .hankel import HankelPoly, NumericPoly, h3
from .optimize import OMEGA, CertifiedBound, certify_nonneg
from .polycore import ONE, MultiPoly, c1, c2, c3, c4, parse, x, y
from .schwarz import coeff_arrays, ps_admissible, sample_gamma


@dataclass(frozen=True)
class Rule:
    kind: str  # PS | CarlsonC2 | CarlsonC4 | ModulusSub
    mu: Fraction = Fraction(0)
    nu: Fraction = Fraction(0)

    def describe(self) -> str:
        if self.kind == "PS":
            return f"PS(mu={self.mu}, nu={self.nu})"
        return self.kind


@dataclass(frozen=True)
class Group:
    multiplier: MultiPoly
    factor: MultiPoly
    power: int
    rule: Rule
    label: str = ""

    def expression(self) -> MultiPoly:
        return self.multiplier * self.factor ** self.power


@dataclass(frozen=True)
class Relaxation:
    before: MultiPoly
    after: MultiPoly
    label: str = ""

    @property
    def obligation(self) -> MultiPoly:
        return self.after - self.before


@dataclass(frozen=True)
class BoundDecomposition:
    spec: ClassSpec
    scale: Fraction
    groups: tuple
    relaxations: tuple
    constant: Fraction
    majorant: MultiPoly


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    certificate: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


@dataclass
class VerificationReport:
    identity: list = field(default_factory=list)
    admissibility: list = field(default_factory=list)
    majorization: list = field(default_factory=list)

    @property
    def checks(self) -> list:
        return self.identity + self.admissibility + self.majorization

    @property
    def identity_ok(self) -> bool:
        return all(c.passed for c in self.identity)

    @property
    def admissibility_ok(self) -> bool:
        return all(c.passed for c in self.admissibility)

    @property
    def majorization_ok(self) -> bool:
        return all(c.passed for c in self.majorization)

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.admissibility_ok and self.majorization_ok

    def to_json(self) -> dict:
        return {
            "identity": [c.to_json() for c in self.identity],
            "admissibility": [c.to_json() for c in self.admissibility],
            "majorization": [c.to_json() for c in self.majorization],
            "ok": self.ok,
        }


def ps_form(mu, nu) -> MultiPoly:
    return c3 + c1 * c2 * Fraction(mu) + c1 ** 3 * Fraction(nu)


def modulus_majorant(p: MultiPoly) -> Optional[MultiPoly]:
    """Triangle-inequality majorant: sum |coef| x^e1 y^e2.  None if c3/c4 occur."""
    terms = {}
    for exps, coef in p.items():
        if exps[2] or exps[3] or exps[4] or exps[5]:
            return None
        terms[(0, 0, 0, 0, exps[0], exps[1])] = abs(coef)
    return MultiPoly(terms)


def builtin_decomposition(spec: ClassSpec) -> BoundDecomposition:
    if spec.name == "F":
        groups = (
            Group(MultiPoly.const(-20), ps_form(Fraction(-1, 10), 0), 2,
                  Rule("PS", Fraction(-1, 10), Fraction(0)), "-20 (c3 - c1 c2/10)^2"),
            Group(c1 ** 2 * c2 ** 2 * Fraction(-114, 5), ONE, 1, Rule("ModulusSub"),
                  "-(114/5) c1^2 c2^2"),
            Group(c1 ** 3 * 8, ps_form(Fraction(1, 2), 0), 1,
                  Rule("PS", Fraction(1, 2), Fraction(0)), "8 c1^3 (c3 + c1 c2/2)"),
            Group(MultiPoly.const(20), c2, 3, Rule("CarlsonC2"), "20 c2^3"),
            Group((c2 * 2 - c1 ** 2) * 12, c4, 1, Rule("CarlsonC4"), "12 (2 c2 - c1^2) c4"),
        )
        return BoundDecomposition(F_CLASS, Fraction(320), groups, (),
                                  Fraction(20), reference.PRINTED_MAJORANT["F"][1])
    if spec.name == "G":
        groups = (
            Group(MultiPoly.const(-60), ps_form(Fraction(11, 10), 0), 2,
                  Rule("PS", Fraction(11, 10), Fraction(0)), "-60 (c3 + 11/10 c1 c2)^2"),
            Group(c1 ** 2 * c2 ** 2 * Fraction(756, 10), ONE, 1, Rule("ModulusSub"),
                  "(756/10) c1^2 c2^2"),
            Group(c1 ** 3 * 72, ps_form(Fraction(1, 2), 0), 1,
                  Rule("PS", Fraction(1, 2), Fraction(0)), "72 c1^3 (c3 + c1 c2/2)"),
            Group(MultiPoly.const(76), c2, 3, Rule("CarlsonC2"), "76 c2^3"),
            Group((c2 * 2 + c1 ** 2 * 3) * 36, c4, 1, Rule("CarlsonC4"), "36 (2 c2 + 3 c1^2) c4"),
        )
        box = ONE - x ** 2 - y ** 2
        relax = (Relaxation((y * 2 + x ** 2 * 3) * box * 36, (x ** 2 + 2) * box * 36,
                            "36(2y+3x^2)(1-x^2-y^2) <= 36(2+x^2)(1-x^2-y^2)"),)
        return BoundDecomposition(G_CLASS, Fraction(8640), groups, relax,
                                  Fraction(60), reference.PRINTED_MAJORANT["G"][1])
    raise UnsupportedClass(f"no built-in decomposition for class {spec.name}")


def group_bound(g: Group) -> Optional[MultiPoly]:
    """Majorant of |group| in x, y, or None when the rule does not apply."""
    mult = modulus_majorant(g.multiplier)
    if mult is None:
        return None
    if g.rule.kind == "ModulusSub":
        return mult if g.factor == ONE else None
    if g.rule.kind == "PS":
        return mult if g.factor == ps_form(g.rule.mu, g.rule.nu) else None
    if g.rule.kind == "CarlsonC4":
        return mult * (ONE - x ** 2 - y ** 2) ** g.power if g.factor == c4 else None
    if g.rule.kind == "CarlsonC2":
        return mult * y ** g.power if g.factor == c2 else None
    return None


def _rule_admissible(g: Group) -> tuple:
    if g.rule.kind == "PS":
        if not ps_admissible((g.rule.mu, g.rule.nu)):
            return False, f"(mu, nu) = ({g.rule.mu}, {g.rule.nu}) outside D1 u D2"
        if g.factor != ps_form(g.rule.mu, g.rule.nu):
            return False, f"factor {g.factor} is not c3 + mu c1 c2 + nu c1^3 for the stated (mu, nu)"
        return True, f"(mu, nu) = ({g.rule.mu}, {g.rule.nu}) admissible"
    if g.rule.kind == "CarlsonC4":
        ok = g.factor == c4
        return ok, "factor is c4" if ok else f"factor {g.factor} is not c4"
    if g.rule.kind == "CarlsonC2":
        ok = g.factor == c2
        return ok, "factor is c2" if ok else f"factor {g.factor} is not c2"
    if g.rule.kind == "ModulusSub":
        ok = g.factor == ONE
        return ok, "no factor" if ok else "ModulusSub groups carry no factor"
    return False, f"unknown rule {g.rule.kind!r}"


def _sampled_group_check(groups, seed=11, count=4000):
    """Empirical |group| <= bound at certified samples; evidence, not proof."""
    c = coeff_arrays(sample_gamma(seed, 4, count, "complex"), 4)
    ax, ay = np.abs(c[:, 0]), np.abs(c[:, 1])
    worst = []
    for g in groups:
        b = group_bound(g)
        if b is None:
            worst.append(None)
            continue
        lhs = np.abs(NumericPoly(g.expression())(c[:, 0], c[:, 1], c[:, 2], c[:, 3]))
        rhs = _eval_xy(b, ax, ay)
        worst.append(float(np.max(lhs - rhs)))
    return worst


def _eval_xy(p: MultiPoly, xs, ys):
    total = np.zeros_like(xs)
    for exps, coef in p.items():
        total = total + float(coef) * xs ** exps[4] * ys ** exps[5]
    return total


def verify_decomposition(d: BoundDecomposition, hp: Optional[HankelPoly] = None,
                         eps: float = 1e-9, sample: bool = True) -> VerificationReport:
    if hp is None:
        hp = h3(derive_coefficients(d.spec, 5), d.scale)
    report = VerificationReport()

    total = MultiPoly()
    for g in d.groups:
        total = total + g.expression()
    diff = total - hp.poly
    report.identity.append(Check(
        "sum of groups equals scaled H3", diff.is_zero() and hp.scale == d.scale,
        f"scale {d.scale}; residual {diff}"))

    for i, g in enumerate(d.groups):
        ok, why = _rule_admissible(g)
        report.admissibility.append(Check(f"group {i} [{g.label}] {g.rule.describe()}", ok, why))

    worst = _sampled_group_check(d.groups) if sample else [None] * len(d.groups)
    bound_sum = MultiPoly()
    for i, g in enumerate(d.groups):
        b = group_bound(g)
        if b is None:
            report.majorization.append(Check(f"group {i} bound", False,
                                             "rule does not apply to this group"))
            continue
        bound_sum = bound_sum + b
        detail = f"|{g.label}| <= {b}"
        if worst[i] is not None:
            detail += f"; sampled max excess {worst[i]:.3e}"
        passed = worst[i] is None or worst[i] <= 1e-12
        report.majorization.append(Check(f"group {i} bound", passed, detail))

    for j, r in enumerate(d.relaxations):
        cert = certify_nonneg(r.obligation, OMEGA, eps)
        report.majorization.append(Check(
            f"relaxation {j} [{r.label}]", cert.ok,
            f"obligation {r.obligation} >= 0 on Omega: {cert.status}", cert.to_json()))
        bound_sum = bound_sum + r.obligation

    target = d.majorant + d.constant
    resid = bound_sum - target
    report.majorization.append(Check(
        "rules and relaxations yield K + h(x,y)", resid.is_zero(),
        f"K = {d.constant}; h = {d.majorant}; residual {resid}"))
    return report


def bound_from_decomposition(d: BoundDecomposition, hmax: CertifiedBound) -> tuple:
    """Certified enclosure of the resulting |H3| bound."""
    if d.scale == 0:
        raise ZeroDivisionError("ScaleZero")
    lo = (d.constant + Fraction(hmax.lb)) / d.scale
    hi = (d.constant + Fraction(hmax.ub)) / d.scale
    return lo, hi


def tamper(d: BoundDecomposition, index: int, **changes) -> BoundDecomposition:
    """Copy with one group's rule or fields replaced; used to exercise failure paths."""
    groups = list(d.groups)
    g = groups[index]
    rule_fields = {k: Fraction(v) if k in ("mu", "nu") else v
                   for k, v in changes.items() if k in ("kind", "mu", "nu")}
    group_fields = {k: v for k, v in changes.items() if k not in ("kind", "mu", "nu")}
    if rule_fields:
        g = replace(g, rule=replace(g.rule, **rule_fields))
    if group_fields:
        g = replace(g, **group_fields)
    groups[index] = g
    return replace(d, groups=tuple(groups))


__all__ = [
    "BoundDecomposition", "Check", "Group", "Relaxation", "Rule", "VerificationReport",
    "bound_from_decomposition", "builtin_decomposition", "group_bound", "modulus_majorant",
    "ps_form", "tamper", "verify_decomposition",
]
