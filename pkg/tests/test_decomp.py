from dataclasses import replace
from fractions import Fraction

import pytest

from hankelbound import reference
from hankelbound.classmodel import F_CLASS, G_CLASS, ClassSpec, UnsupportedClass, derive_coefficients
from hankelbound.decomp import (
    Relaxation, bound_from_decomposition, builtin_decomposition, group_bound, ps_form, tamper,
    verify_decomposition,
)
from hankelbound.hankel import h3
from hankelbound.optimize import OMEGA, CertifiedBound, certify_max
from hankelbound.polycore import MultiPoly, c1, c2, parse, x, y

F = Fraction
DF = builtin_decomposition(F_CLASS)
DG = builtin_decomposition(G_CLASS)


@pytest.mark.parametrize("d", [DF, DG])
def test_builtins_verify(d):
    hp = h3(derive_coefficients(d.spec, 5), d.scale)
    rep = verify_decomposition(d, hp)
    assert rep.identity_ok and rep.admissibility_ok and rep.majorization_ok, rep.to_json()


def test_majorants_and_constants():
    assert (DF.constant, DF.majorant) == (20, parse("54/5*x^2*y^2 + 8*x^3 - 4*y^3 + 24*y - 24*x^2*y + 12*x^2 - 12*x^4"))
    assert (DG.constant, DG.majorant) == (60, parse("756/10*x^2*y^2 + 72*x^3 + 76*y^3 + 36*(2 + x^2)*(1 - x^2 - y^2)"))


def test_group_sum_is_scaled_h3():
    for d in (DF, DG):
        total = MultiPoly()
        for g in d.groups:
            total = total + g.expression()
        assert total == reference.PRINTED_H3[d.spec.name]


def test_g_cubic_group():
    assert any(g.expression() == (c2 ** 3).scale(76) for g in DG.groups)
    assert group_bound(DG.groups[3]) == (y ** 3).scale(76)


def test_relaxation_obligation():
    (r,) = DG.relaxations
    assert r.obligation == parse("72*(1 - x^2 - y)*(1 - x^2 - y^2)")


def test_unsupported():
    with pytest.raises(UnsupportedClass):
        builtin_decomposition(ClassSpec("lambda=1", F(1)))


class TestTamper:
    def test_mu_out_of_region(self):
        rep = verify_decomposition(tamper(DF, 2, mu=3), sample=False)
        assert rep.identity_ok
        assert not rep.admissibility[2].passed
        assert all(c.passed for i, c in enumerate(rep.admissibility) if i != 2)
        assert not rep.ok

    def test_mu_inside_region_but_wrong_factor(self):
        rep = verify_decomposition(tamper(DG, 0, mu=F(1, 4)), sample=False)
        assert not rep.admissibility[0].passed

    def test_consistent_factor_change_breaks_identity(self):
        d = tamper(DF, 0, mu=F(-1, 5), factor=ps_form(F(-1, 5), 0))
        rep = verify_decomposition(d, sample=False)
        assert rep.admissibility_ok
        assert not rep.identity_ok

    def test_nu_tamper(self):
        rep = verify_decomposition(tamper(DG, 2, nu=F(1, 2)), sample=False)
        assert not rep.admissibility[2].passed

    def test_multiplier_tamper(self):
        rep = verify_decomposition(tamper(DF, 3, multiplier=MultiPoly.const(19)), sample=False)
        assert not rep.identity_ok

    def test_rule_kind_tamper(self):
        rep = verify_decomposition(tamper(DF, 4, kind="CarlsonC2"), sample=False)
        assert not rep.admissibility[4].passed
        assert not rep.majorization_ok

    def test_relaxation_tamper(self):
        (r,) = DG.relaxations
        bad = Relaxation(r.before, (x ** 2 + 1) * (1 - x ** 2 - y ** 2) * 36, "too small")
        rep = verify_decomposition(replace(DG, relaxations=(bad,)), sample=False)
        relax = [c for c in rep.majorization if c.name.startswith("relaxation")]
        assert relax and not relax[0].passed
        assert relax[0].certificate["status"] == "refuted"

    def test_majorant_tamper(self):
        rep = verify_decomposition(replace(DF, majorant=DF.majorant - x), sample=False)
        assert not rep.majorization[-1].passed

    def test_constant_tamper(self):
        rep = verify_decomposition(replace(DG, constant=F(59)), sample=False)
        assert not rep.majorization_ok


class TestBound:
    def test_builtin_bounds(self):
        for d, value, ref in ((DF, 20, F(1, 8)), (DG, 76, F(17, 1080))):
            hmax = certify_max(d.majorant, OMEGA, 1e-9)
            lo, hi = bound_from_decomposition(d, hmax)
            assert lo == ref
            assert hi <= ref + F(1e-9) / d.scale

    def test_zero_majorant(self):
        d = replace(DF, constant=F(0), majorant=MultiPoly())
        hmax = CertifiedBound(F(0), 0.0, {"x": 0, "y": 0}, 1, 1e-9)
        assert bound_from_decomposition(d, hmax) == (0, 0)

    def test_monotone_in_hmax(self):
        prev = None
        for ub in (20.0, 20.5, 21.0, 30.0):
            lo, hi = bound_from_decomposition(DF, CertifiedBound(F(20), ub, {}, 1, 1e-9))
            if prev is not None:
                assert hi >= prev
            prev = hi

    def test_scale_zero(self):
        with pytest.raises(ZeroDivisionError):
            bound_from_decomposition(replace(DF, scale=F(0)), CertifiedBound(F(20), 20.0, {}, 1, 1e-9))
