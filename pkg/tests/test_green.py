import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy import special

from krein_gap.errors import DomainError, PoleError, ValidationError
from krein_gap.green import (
    GreenQuery,
    PointPerturbation,
    decaying_sqrt,
    denominator,
    eigenvalue_bisection,
    eigenvalue_closed_form,
    free_green,
    negative_eigenvalue,
    perturbed_green,
)

GAMMA = 0.5772156649015329
coords3 = st.tuples(*[st.floats(-3, 3)] * 3)


class TestFree:
    def test_three_dimensional(self):
        g = free_green(GreenQuery(-1.0, (0, 0, 0), (1, 0, 0)))
        assert_allclose(g, math.exp(-1) / (4 * math.pi), rtol=1e-14)
        # the quoted example value is good to about four digits
        assert_allclose(g.real, 0.029270, rtol=5e-4)

    def test_newton_limit(self):
        g = free_green(GreenQuery(-1e-14, (0, 0, 0), (0, 1, 0)))
        assert_allclose(g, 1 / (4 * math.pi), rtol=1e-6)

    def test_two_dimensional(self):
        g = free_green(GreenQuery(-1.0, (0, 0), (1, 0)))
        assert_allclose(g, special.k0(1.0) / (2 * math.pi), rtol=1e-12)
        assert_allclose(g.real, 0.067014, rtol=5e-4)

    def test_branch_decays(self):
        for z in (1 + 1j, -1 + 0.1j, 4 + 1e-3j, -2.0):
            assert decaying_sqrt(z).imag > 0
        assert abs(free_green(GreenQuery(1 + 1j, (0, 0, 0), (30, 0, 0)))) < 1e-6

    def test_query_validation(self):
        with pytest.raises(ValidationError):
            GreenQuery(-1.0, (1, 0), (1, 0))
        with pytest.raises(ValidationError):
            GreenQuery(-1.0, (1, 0), (1, 0, 0))
        with pytest.raises(DomainError):
            free_green(GreenQuery(1 + 1j, (0, 0), (1, 0)))
        with pytest.raises(ValidationError):
            PointPerturbation(4, 0.0)


class TestPerturbed:
    def test_pole_at_eigenvalue(self):
        p = PointPerturbation(3, -1.0)
        q = GreenQuery(-16 * math.pi**2 * (1 + 1e-6), (1, 0, 0), (0, 1, 0))
        assert np.isfinite(perturbed_green(p, q))
        with pytest.raises(PoleError):
            perturbed_green(p, GreenQuery(-16 * math.pi**2, (1, 0, 0), (0, 1, 0)))

    def test_large_alpha_recovers_free(self):
        q = GreenQuery(-1.0, (1, 0, 0), (0, 2, 0))
        diffs = [abs(perturbed_green(PointPerturbation(3, a), q) - free_green(q))
                 for a in (1e2, 1e4, 1e6)]
        assert diffs[0] > diffs[1] > diffs[2]
        assert diffs[2] < 1e-7

    def test_two_dimensional_value(self):
        q = GreenQuery(-1.0, (1, 0), (0, 1))
        k1, kr = special.k0(1.0), special.k0(math.sqrt(2))
        coef = 2 * math.pi / (GAMMA + math.log(0.5))
        want = kr / (2 * math.pi) + coef * (k1 / (2 * math.pi)) ** 2
        assert_allclose(perturbed_green(PointPerturbation(2, 0.0), q), want, rtol=1e-12)

    @given(coords3, coords3, st.floats(-2, 2), st.floats(-5, 5), st.floats(0.1, 5))
    def test_symmetry_3d(self, x, xp, alpha, re, im):
        if math.dist(x, xp) < 1e-3 or min(math.dist(x, (0, 0, 0)), math.dist(xp, (0, 0, 0))) < 1e-3:
            return
        p = PointPerturbation(3, alpha)
        a = perturbed_green(p, GreenQuery(complex(re, im), x, xp))
        b = perturbed_green(p, GreenQuery(complex(re, im), xp, x))
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    def test_symmetry_2d(self):
        p = PointPerturbation(2, 0.3)
        a = perturbed_green(p, GreenQuery(-2.0, (1, 0.5), (-0.3, 2)))
        b = perturbed_green(p, GreenQuery(-2.0, (-0.3, 2), (1, 0.5)))
        assert abs(a - b) < 1e-12


class TestEigenvalues:
    @pytest.mark.parametrize("alpha", [-2.0, -1.0, -0.1])
    def test_three_dimensional(self, alpha):
        assert_allclose(negative_eigenvalue(PointPerturbation(3, alpha)),
                        -16 * math.pi**2 * alpha**2, rtol=1e-10)

    @pytest.mark.parametrize("alpha", [-2.0, -0.1, 0.0, 0.1, 0.7, 2.0])
    def test_three_dimensional_sign_dichotomy(self, alpha):
        assert (negative_eigenvalue(PointPerturbation(3, alpha)) is not None) == (alpha < 0)

    def test_examples(self):
        assert_allclose(negative_eigenvalue(PointPerturbation(3, -1.0)), -157.9137, atol=1e-4)
        assert_allclose(negative_eigenvalue(PointPerturbation(2, 0.0)), -1.26096, rtol=5e-5)
        assert_allclose(negative_eigenvalue(PointPerturbation(2, 0.0)),
                        -4 * math.exp(-2 * GAMMA), rtol=1e-14)

    @pytest.mark.parametrize("alpha", [-1.0, 0.0, 1.0])
    def test_two_dimensional(self, alpha):
        want = -4 * math.exp(2 * special.digamma(1.0) - 4 * math.pi * alpha)
        p = PointPerturbation(2, alpha)
        assert_allclose(negative_eigenvalue(p), want, rtol=1e-10)
        assert_allclose(eigenvalue_bisection(p), want, rtol=1e-10)

    def test_two_dimensional_monotone(self):
        alphas = np.linspace(-3, 3, 61)
        vals = np.array([negative_eigenvalue(PointPerturbation(2, a)) for a in alphas])
        assert np.all(vals < 0) and np.all(np.diff(vals) > 0)
        assert vals[-1] > -1e-8

    def test_bracket_widening(self):
        # root far below kappa = 1e-9
        p = PointPerturbation(2, 5.0)
        assert_allclose(eigenvalue_bisection(p), eigenvalue_closed_form(p), rtol=1e-10)

    @pytest.mark.parametrize("dim, alpha", [(3, -1.0), (3, -0.3), (2, -0.5), (2, 0.4)])
    def test_denominator_vanishes_and_changes_sign(self, dim, alpha):
        p = PointPerturbation(dim, alpha)
        e = negative_eigenvalue(p)
        assert abs(denominator(p, e)) <= 1e-9
        below = denominator(p, e * (1 + 1e-6)).real
        above = denominator(p, e * (1 - 1e-6)).real
        assert below * above < 0
