from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
import hypothesis.strategies as st

from hankelbound.classmodel import ArityMismatch
from hankelbound.schwarz import (
    PSParams, ParamOutOfDisk, SchurParams, carlson_satisfied, check_lemmas, coeff_arrays,
    ps_admissible, ps_functional, ps_grid, sample_body, sample_gamma, schur_to_coeffs,
)

F = Fraction


def sympy_schur(gamma, N):
    """Oracle: build sigma by the Moebius recursion with sympy rational functions."""
    z = sp.Symbol("z")
    sigma = sp.nsimplify(gamma[-1])
    for g in reversed(gamma[:-1]):
        g = sp.nsimplify(g)
        sigma = (g + z * sigma) / (1 + sp.conjugate(g) * z * sigma)
    ser = sp.series(sigma, z, 0, N).removeO()
    return [sp.Rational(ser.coeff(z, k)) for k in range(N)]


class TestSchurToCoeffs:
    def test_examples(self):
        assert schur_to_coeffs(SchurParams([1]), 4).c == (1, 0, 0, 0)
        assert schur_to_coeffs(SchurParams([0, 1]), 4).c == (0, 1, 0, 0)
        got = schur_to_coeffs(SchurParams([F(1, 2), F(1, 2)]), 4)
        assert got.c == (F(1, 2), F(3, 8), F(-3, 32), F(3, 128))
        assert got.certified

    @given(st.lists(st.fractions(-1, 1, max_denominator=7), min_size=1, max_size=4))
    def test_against_sympy(self, gamma):
        got = schur_to_coeffs(SchurParams(gamma), 4).c
        assert [sp.Rational(v.numerator, v.denominator) for v in got] == sympy_schur(gamma, 4)

    def test_out_of_disk(self):
        with pytest.raises(ParamOutOfDisk):
            schur_to_coeffs(SchurParams([0, 1.1]))
        with pytest.raises(ParamOutOfDisk):
            schur_to_coeffs(SchurParams([0.8 + 0.7j]))
        schur_to_coeffs(SchurParams([1 + 1e-16]))

    def test_exact_when_rational(self):
        c = schur_to_coeffs(SchurParams([F(1, 3), F(-2, 5), F(1, 7)])).c
        assert all(isinstance(v, Fraction) for v in c)

    def test_vectorised_matches_scalar(self):
        g = sample_gamma(3, 3, 50, "complex")
        arr = coeff_arrays(g, 4)
        for row, cs in zip(g, arr):
            ref = schur_to_coeffs(SchurParams(list(row))).c
            assert np.allclose(cs, ref, atol=1e-15)


class TestLemmas:
    def test_carlson_examples(self):
        assert carlson_satisfied((0, 1, 0, 0))
        assert not carlson_satisfied((0.9, 0.5, 0, 0))
        with pytest.raises(ArityMismatch):
            carlson_satisfied((0.1,))

    @given(st.lists(st.floats(-1, 1), min_size=1, max_size=6))
    def test_certified_outputs_satisfy_carlson(self, gamma):
        assert carlson_satisfied(schur_to_coeffs(SchurParams(gamma), 4))

    @given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 2 * np.pi)), min_size=1, max_size=5))
    def test_complex_outputs_satisfy_carlson(self, polar):
        gamma = [r * np.exp(1j * t) for r, t in polar]
        assert carlson_satisfied(schur_to_coeffs(SchurParams(gamma), 4))

    @pytest.mark.parametrize("mu,nu,ok", [
        (F(1, 10), 0, True), (F(-1, 10), 0, True), (F(11, 10), 0, True), (F(1, 2), 0, True),
        (F(5, 2), 0, False), (1, F(-3, 4), True), (1, F(-9, 10), False), (0, F(11, 10), False),
    ])
    def test_admissible(self, mu, nu, ok):
        assert ps_admissible(PSParams(F(mu), F(nu))) is ok

    def test_d2_lower_edge(self):
        lower = F(4, 27) * F(21, 10) ** 3 - F(21, 10)
        assert ps_admissible((F(11, 10), lower))
        assert not ps_admissible((F(11, 10), lower - F(1, 10 ** 9)))

    def test_functional_examples(self):
        assert ps_functional((0, 0, 1, 0), (F(3, 2), F(-1, 3))) == 1
        assert ps_functional((F(1, 2), F(3, 8), F(-3, 32), F(3, 128)), (F(1, 2), 0)) == 0
        assert ps_functional((0, 1, 0, 0), (F(11, 10), 0)) == 0
        with pytest.raises(ArityMismatch):
            ps_functional((0, 1), (0, 0))

    def test_grid_is_admissible_and_covers_both_regions(self):
        grid = ps_grid()
        assert all(ps_admissible(p) for p in grid)
        assert (F(1, 10), 0) in grid and (F(11, 10), 0) in grid and (F(-2), 1) in grid

    def test_small_lemma_run(self):
        for field in ("real", "complex"):
            stats = check_lemmas(seed=1, m=4, count=2000, field=field)
            assert stats["passed"], stats
            assert stats["ps_max"] <= 1 + 1e-12


class TestSampler:
    def test_one_sample(self):
        (c,) = sample_body(1, 3, 1)
        assert c.certified and carlson_satisfied(c)

    def test_m_zero(self):
        for c in sample_body(5, 0, 20):
            assert c.c[1:] == (0.0, 0.0, 0.0)

    def test_deterministic(self):
        assert sample_body(7, 3, 30, "complex") == sample_body(7, 3, 30, "complex")
        assert sample_body(7, 3, 30) != sample_body(8, 3, 30)

    def test_complex_in_disk(self):
        g = sample_gamma(2, 2, 500, "complex")
        assert g.shape == (500, 3) and np.all(np.abs(g) <= 1)

    def test_bad_args(self):
        with pytest.raises(ValueError):
            sample_gamma(1, -1, 3)
        with pytest.raises(ValueError):
            sample_gamma(1, 1, 3, "quaternion")
