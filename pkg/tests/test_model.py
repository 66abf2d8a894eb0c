import math

import pytest
from hypothesis import given, settings, strategies as st

from symflow.errors import ConfigurationError, DomainError, ParameterError
from symflow.model import (FluidParams, JetPoint, TXDomain, UHBox, UHFunction,
                           apply_discrete_symmetry, linearized_residual,
                           mswe_residual, sample_manifold_jet,
                           single_f_residual)
from symflow.solutions import constant_solution, galilean_solution


class TestFluidParams:
    def test_defaults(self):
        p = FluidParams(H=2.0)
        assert p.gravity == 1.0
        assert p.pressure_coeff(1.0) == 3.0

    def test_gravity_must_be_positive(self):
        with pytest.raises(ParameterError):
            FluidParams(H=1.0, gravity=0.0)

    def test_pressure_coeff_rejects_nonpositive_height(self):
        with pytest.raises(DomainError):
            FluidParams(H=1.0).pressure_coeff(0.0)


class TestResiduals:
    def test_constant_state_trivially_on_manifold(self, params):
        jet = JetPoint(0.3, -0.2, 1.0, 2.0, 0, 0, 0, 0)
        assert mswe_residual(jet, params) == (0.0, 0.0)

    def test_scaling_family_point(self, params):
        # slice of u = x/t, h = 1/t at (t, x) = (1, 0)
        jet = JetPoint(1, 0, 0, 1, 0, 1, -1, 0)
        r1, r2 = mswe_residual(jet, params)
        assert r1 == 0.0 and r2 == 0.0

    def test_direct_substitution(self):
        jet = JetPoint(0, 0, 1, 1, 1, 0, 0, 0)
        assert mswe_residual(jet, FluidParams(H=1.0)) == (1.0, 0.0)

    def test_rejects_nonpositive_height(self):
        with pytest.raises(DomainError):
            JetPoint(0, 0, 1, -1, 0, 0, 0, 0)

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            JetPoint(0, 0, math.inf, 1, 0, 0, 0, 0)


class TestLinearizedResidual:
    def test_constant_pairs(self, params):
        from symflow.solutions import constant_pair
        for f0, g0 in [(1.0, 0.0), (0.0, 1.0)]:
            pair = constant_pair(f0, g0, params=params)
            for u, h in [(0.0, 1.0), (2.0, 0.5), (-1.0, 3.0)]:
                assert linearized_residual(pair, u, h, params) == (0.0, 0.0)

    def test_reciprocal_pair_hand_check(self):
        from symflow.solutions import simple_pair
        p = FluidParams(H=1.0)
        pair = simple_pair(c2=1.0, params=p)  # (1/h, u/h)
        rho1, rho2 = linearized_residual(pair, 3.0, 2.0, p)
        assert abs(rho1) < 1e-14 and abs(rho2) < 1e-14

    def test_rejects_nonpositive_height(self, params, catalog_pairs):
        with pytest.raises(DomainError):
            linearized_residual(catalog_pairs["pair-c2"], 0.0, -1.0, params)


class TestSingleFCompatibility:
    def test_reciprocal_height(self, params):
        f = UHFunction(lambda u, h: 1.0 / h,
                       du=lambda u, h: 0.0, dh=lambda u, h: -1.0 / h ** 2,
                       duu=lambda u, h: 0.0, duh=lambda u, h: 0.0,
                       dhh=lambda u, h: 2.0 / h ** 3)
        for u, h in [(0.5, 0.8), (-2.0, 3.0)]:
            assert abs(single_f_residual(f, u, h, params)) < 1e-14

    def test_linear_velocity(self, params):
        f = UHFunction(lambda u, h: u, du=lambda u, h: 1.0,
                       dh=lambda u, h: 0.0, duu=lambda u, h: 0.0,
                       duh=lambda u, h: 0.0, dhh=lambda u, h: 0.0)
        assert single_f_residual(f, 1.7, 0.4, params) == 0.0

    def test_ratio_cancellation(self):
        p = FluidParams(H=2.0)
        f = UHFunction(lambda u, h: u / h,
                       du=lambda u, h: 1.0 / h,
                       dh=lambda u, h: -u / h ** 2,
                       duu=lambda u, h: 0.0,
                       duh=lambda u, h: -1.0 / h ** 2,
                       dhh=lambda u, h: 2.0 * u / h ** 3)
        assert abs(single_f_residual(f, 1.0, 1.0, p)) < 1e-14

    def test_fd_fallback_agrees_with_analytic(self, params):
        f_fd = UHFunction(lambda u, h: u / h, analytic=False)
        assert abs(single_f_residual(f_fd, 1.0, 1.0, params)) < 1e-9


class TestManifoldSampling:
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
           H=st.sampled_from([0.0, 0.5, 1.0, 2.0]))
    @settings(max_examples=40, deadline=None)
    def test_sampled_jets_lie_on_the_manifold(self, seed, H):
        p = FluidParams(H=H)
        jet = sample_manifold_jet(seed, p)
        r1, r2 = mswe_residual(jet, p)
        assert abs(r1) < 1e-12 and abs(r2) < 1e-12

    def test_sampler_grouping_cancels_exactly(self, params):
        jet = sample_manifold_jet(99, params)
        assert mswe_residual(jet, params) == (0.0, 0.0)

    def test_zero_slopes_give_steady_jet(self, params):
        jet = sample_manifold_jet(5, params,
                                  box={"u_x": (0.0, 0.0), "h_x": (0.0, 0.0)})
        assert jet.u_t == 0.0 and jet.h_t == 0.0

    def test_seed_determinism(self, params):
        a = sample_manifold_jet(123, params)
        b = sample_manifold_jet(123, params)
        assert a == b

    def test_invalid_box_rejected(self, params):
        with pytest.raises(ConfigurationError):
            sample_manifold_jet(0, params, box={"h": (-1.0, 2.0)})


class TestDiscreteSymmetries:
    def test_s1_on_galilean_flips_shift(self):
        fld = galilean_solution(0.7, 1.0)
        s1 = apply_discrete_symmetry(fld, "S1")
        # u(-t, -x) = (-x + c1)/(-t) = (x - c1)/t
        t, x = -1.5, 0.4
        u, h = s1(t, x)
        assert u == pytest.approx((x - 0.7) / t, abs=1e-14)
        assert h == pytest.approx(1.0 / (-t), abs=1e-14)
        assert h > 0

    def test_s2_on_galilean_flips_shift(self):
        fld = galilean_solution(0.7, 1.3)
        s2 = apply_discrete_symmetry(fld, "S2")
        ref = galilean_solution(-0.7, 1.3)
        t, x = 1.5, -0.4
        assert s2(t, x) == pytest.approx(ref(t, x), abs=1e-14)

    @pytest.mark.parametrize("which", ["S1", "S2"])
    def test_involution(self, which, rng):
        fld = galilean_solution(0.2, 0.8)
        twice = apply_discrete_symmetry(
            apply_discrete_symmetry(fld, which), which)
        assert twice.domain == fld.domain
        for t, x in fld.domain.interior_samples(rng, 25):
            assert twice(t, x) == pytest.approx(fld(t, x), abs=1e-14)

    def test_unknown_symmetry_rejected(self):
        with pytest.raises(ParameterError):
            apply_discrete_symmetry(constant_solution(0.0, 1.0), "S3")

    @pytest.mark.parametrize("which", ["S1", "S2"])
    def test_transformed_fields_stay_solutions(self, which, params,
                                               catalog_fields):
        from symflow.hodograph import verify_field
        for fld in catalog_fields.values():
            out = apply_discrete_symmetry(fld, which)
            rep = verify_field(out, params, samples=50, seed=1)
            assert rep.max_abs < 1e-9


class TestCatalogFieldResiduals:
    def test_fd_residuals_below_tolerance(self, params, catalog_fields):
        from symflow.hodograph import verify_field
        for eid, fld in catalog_fields.items():
            rep = verify_field(fld, params, samples=100, seed=3,
                               use_analytic=False)
            assert rep.max_abs < 1e-5, (eid, rep)

    def test_analytic_residuals_at_roundoff(self, params, catalog_fields):
        from symflow.hodograph import verify_field
        for eid, fld in catalog_fields.items():
            rep = verify_field(fld, params, samples=200, seed=3)
            assert rep.max_abs < 1e-12, (eid, rep)


class TestDomains:
    def test_empty_rect_rejected(self):
        with pytest.raises(ConfigurationError):
            TXDomain(1.0, 1.0, 0.0, 1.0)

    def test_uh_box_needs_positive_height(self):
        with pytest.raises(ConfigurationError):
            UHBox(-1.0, 1.0, -0.5, 2.0)

    def test_interior_samples_stay_inside(self, rng):
        d = TXDomain(0.0, 1.0, -2.0, -1.0)
        for t, x in d.interior_samples(rng, 50):
            assert d.contains(t, x)
