import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from krein_gap import random_models as rm
from krein_gap.cayley import resolvent_at_minus_one, to_contraction
from krein_gap.errors import DomainError, NotAnOperatorError, SpectralPointError
from krein_gap.interval import gap_operators
from krein_gap.linalg import OrthoSplit, psd_check, psd_leq
from krein_gap.resolvent import (
    PerturbationParam,
    build_perturbation,
    extreme_perturbations,
    krein_resolvent,
    lift,
    resolvent_direct,
    resolvent_order_holds,
)

seeds = st.integers(0, 2**32 - 1)
POINTS = (-0.5, -2.5, 1 + 2j, -10.0)
E1 = OrthoSplit.coordinate(2, [0])


def _rel(a, b):
    return np.abs(a - b).max() / np.abs(b).max()


class TestBuild:
    def test_zero_parameter_returns_A(self, rng):
        a = rm.psd_operator(rng, 4)
        sp = rm.split(rng, 4, 2)
        assert_allclose(build_perturbation(a, sp, np.zeros((2, 2))).entries, a, atol=1e-10)

    def test_resolvent_identity(self, rng):
        a, sp, y = rm.resolvent_instance(rng, 5, 2)
        a_y = build_perturbation(a, sp, y).entries
        assert_allclose(resolvent_at_minus_one(a_y), resolvent_at_minus_one(a) - lift(sp, y),
                        atol=1e-10)

    def test_out_of_interval_parameter(self):
        a = np.diag([1.0, 2.0])
        with pytest.raises(DomainError, match="upper bound"):
            build_perturbation(a, E1, [[5.0]])
        with pytest.raises(DomainError, match="lower bound"):
            build_perturbation(a, E1, [[-5.0]])

    def test_nonnegative_only_switch(self):
        a = np.diag([1.0, 2.0])
        with pytest.raises(DomainError):
            PerturbationParam.for_model(a, E1, [[-0.01]], nonnegative_only=True)
        PerturbationParam.for_model(a, E1, [[-0.01]])

    def test_upper_endpoint_of_rotated_identity(self):
        # A = I, M spanned by (e1 + e2)/sqrt2: Y = G2 = 1/2 reaches eigenvalue 1
        sp = OrthoSplit.from_subspace(np.array([[1.0], [1.0]]) / np.sqrt(2), 2)
        g = gap_operators(to_contraction(np.eye(2)), sp)
        assert_allclose(g.G2, [[0.5]], atol=1e-10)
        with pytest.raises(NotAnOperatorError):
            build_perturbation(np.eye(2), sp, g.G2)

    @given(seeds)
    def test_restriction_property(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 7))
        a, sp, y = rm.resolvent_instance(rng, dim, int(rng.integers(1, dim)))
        a_y = build_perturbation(a, sp, y).entries
        g = resolvent_at_minus_one(a) @ sp.basisM
        assert_allclose(a_y @ g, a @ g, atol=1e-9 * max(1.0, np.abs(a_y).max()))

    @given(seeds)
    def test_nonnegative(self, seed):
        rng = np.random.default_rng(seed)
        a, sp, y = rm.resolvent_instance(rng, 4, 2)
        assert psd_check(build_perturbation(a, sp, y), 1e-9)


class TestResolvent:
    def test_direct_diagonal(self):
        assert_allclose(resolvent_direct(np.diag([1.0, 2.0]), -1), np.diag([0.5, 1 / 3]))
        assert_allclose(resolvent_direct(np.zeros((2, 2)), -1), np.eye(2))

    def test_direct_rejects_eigenvalue(self):
        with pytest.raises(SpectralPointError):
            resolvent_direct(np.diag([1.0, 2.0]), 2.0)

    def test_spectral_half_axis_rejected(self, rng):
        a, sp, y = rm.resolvent_instance(rng, 3, 1)
        with pytest.raises(SpectralPointError):
            krein_resolvent(a, sp, y, 0.5)

    @pytest.mark.parametrize("z", POINTS)
    def test_zero_parameter(self, rng, z):
        a = rm.psd_operator(rng, 3)
        sp = rm.split(rng, 3, 1)
        assert_allclose(krein_resolvent(a, sp, [[0.0]], z), resolvent_direct(a, z), atol=1e-13)

    def test_formula_near_minus_one(self, rng):
        a, sp, y = rm.resolvent_instance(rng, 4, 2)
        direct = resolvent_direct(build_perturbation(a, sp, y), -1 + 1e-6j)
        assert _rel(krein_resolvent(a, sp, y, -1 + 1e-6j), direct) < 1e-8

    def test_extra_prefactor_breaks_formula(self, rng):
        a, sp, y = rm.resolvent_instance(rng, 4, 2)
        direct = resolvent_direct(build_perturbation(a, sp, y), -2.5)
        assert _rel(krein_resolvent(a, sp, y, -2.5), direct) < 1e-10
        assert _rel(krein_resolvent(a, sp, y, -2.5, literal=True), direct) > 1e-6

    @given(seeds)
    def test_matches_direct_inversion(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 7))
        a, sp, y = rm.resolvent_instance(rng, dim, int(rng.integers(1, min(3, dim) + 1)))
        a_y = build_perturbation(a, sp, y)
        for z in POINTS:
            assert _rel(krein_resolvent(a, sp, y, z), resolvent_direct(a_y, z)) <= 1e-8

    def test_real_point_gives_symmetric_resolvent(self, rng):
        a, sp, y = rm.resolvent_instance(rng, 4, 2)
        r = krein_resolvent(a, sp, y, -2.5)
        assert_allclose(r, r.T.conj(), atol=1e-12)


class TestExtremes:
    def test_zero_model(self):
        ext = extreme_perturbations(np.zeros((2, 2)), E1)
        assert_allclose(ext.minimal.operator, np.zeros((2, 2)), atol=1e-10)
        assert ext.maximal.is_relation

    def test_diagonal_model(self):
        a = np.diag([1.0, 2.0])
        ext = extreme_perturbations(a, E1)
        # decoupled: the N-entry runs over [0, inf); A_mu puts 0 there
        assert_allclose(ext.minimal.operator, np.diag([1.0, 0.0]), atol=1e-8)
        assert ext.maximal.is_relation
        assert resolvent_order_holds(ext, E1, a, np.zeros((1, 1)))

    def test_unique_case(self):
        a = np.array([[2.0, 0.0], [0.0, 0.0]])
        sp = OrthoSplit.from_subspace(np.array([[1.0], [1.0]]) / np.sqrt(2), 2)
        k = to_contraction(a).entries
        g = gap_operators(k, sp)
        if np.abs(g.G1).max() < 1e-9 and np.abs(g.G2).max() < 1e-9:
            ext = extreme_perturbations(a, sp)
            assert_allclose(ext.minimal.operator, a, atol=1e-8)

    def test_running_example_endpoints(self, running_K):
        from krein_gap.cayley import to_operator

        a = to_operator(running_K).entries
        ext = extreme_perturbations(a, E1)
        # I - K_X is singular at Xmax, so the upper end is never an operator here
        assert not ext.minimal.is_relation and ext.maximal.is_relation
        assert_allclose(np.linalg.det(ext.minimal.operator), 0.0, atol=1e-12)
        assert resolvent_order_holds(ext, E1, a, np.zeros((1, 1)))

    @given(seeds)
    def test_order_chain_for_interior_parameters(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 6))
        sp = rm.split(rng, dim, int(rng.integers(1, dim)))
        a = rm.psd_operator(rng, dim)
        ext = extreme_perturbations(a, sp)
        y = rm.admissible_Y(rng, ext.gaps.G1, ext.gaps.G2)
        assert resolvent_order_holds(ext, sp, a, y)

    @given(seeds)
    def test_monotone_in_parameter(self, seed):
        rng = np.random.default_rng(seed)
        a, sp, _ = rm.resolvent_instance(rng, 4, 2)
        g = gap_operators(to_contraction(a), sp)
        y1 = rm.admissible_Y(rng, g.G1, g.G2, 0.1, 0.4)
        y2 = rm.interpolate(rng, y1, g.G2, 0.1, 0.9)
        try:
            r1 = resolvent_at_minus_one(build_perturbation(a, sp, y1).entries)
            r2 = resolvent_at_minus_one(build_perturbation(a, sp, y2).entries)
        except NotAnOperatorError:
            return
        assert psd_leq(r2, r1, 1e-8)
