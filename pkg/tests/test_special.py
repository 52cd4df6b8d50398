import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy import special

from conftest import BACKENDS
from krein_gap.errors import DomainError
from krein_gap.special import bessel_k0, bessel_k0_large, bessel_k0_series, digamma, euler_gamma


def _series_oracle(x, terms=20):
    """Ascending series written out term by term."""
    gamma = 0.5772156649015329
    total, term, harmonic = 0.0, 1.0, 0.0
    for k in range(terms):
        if k:
            term *= (x * x / 4) / (k * k)
            harmonic += 1.0 / k
        total += term * (harmonic - math.log(x / 2) - gamma)
    return total


class TestK0:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_value_at_one(self, backend):
        assert abs(bessel_k0(1.0, backend) - 0.4210244382) <= 1e-9
        assert_allclose(bessel_k0(1.0, backend), _series_oracle(1.0), rtol=1e-14)

    def test_value_at_ten(self):
        v = bessel_k0(10.0)
        assert_allclose(v, 1.778e-5, rtol=1e-3)
        assert_allclose(v / (math.exp(-10) * math.sqrt(math.pi / 20)), 1.0, atol=0.02)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_against_scipy(self, backend):
        x = np.geomspace(1e-8, 600, 2000)
        assert_allclose(bessel_k0(x, backend), special.k0(x), rtol=1e-12)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_seam(self, backend):
        x = np.linspace(1.5, 2.5, 101)
        s, l = bessel_k0_series(x, backend), bessel_k0_large(x, backend)
        assert np.max(np.abs(s - l) / l) <= 1e-10

    def test_small_argument_log(self):
        x = 1e-10
        assert_allclose(bessel_k0(x), -math.log(x / 2) - euler_gamma(), rtol=1e-12)

    def test_shape(self):
        assert isinstance(bessel_k0(2.0), float)
        assert bessel_k0(np.ones((2, 3))).shape == (2, 3)

    @pytest.mark.parametrize("bad", [0.0, -1.0, np.nan, [1.0, -2.0]])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            bessel_k0(bad)

    @given(st.floats(1e-6, 700))
    def test_backends_agree(self, x):
        a, b = (bessel_k0(x, be) for be in BACKENDS)
        assert abs(a - b) <= 1e-14 * abs(b)


class TestDigamma:
    def test_psi_one(self):
        assert digamma(1.0) == -euler_gamma()
        assert_allclose(digamma(2.0), digamma(1.0) + 1.0, rtol=1e-13)

    @given(st.floats(1e-3, 1e3))
    def test_against_scipy(self, x):
        assert_allclose(digamma(x), special.digamma(x), rtol=1e-12, atol=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)
