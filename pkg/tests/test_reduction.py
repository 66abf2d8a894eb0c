import math

import numpy as np
import pytest

from symflow import reduction
from symflow.errors import DomainError, ParameterError, SonicPointError
from symflow.hodograph import verify_field
from symflow.solutions import simple_pair


class TestReducedRHS:
    def test_zero_parameter_freezes_profile(self, params):
        s = reduction.ReducedState(0.7, -0.3, 1.4)
        assert reduction.reduced_rhs_case_i(0.0, params, s) == (0.0, 0.0)

    def test_hand_value(self, params):
        # a=1, U=p, H_profile=1, transport 1: D = -2, so (0, -1/2)
        s = reduction.ReducedState(0.4, 0.4, 1.0)
        du, dh = reduction.reduced_rhs_case_i(1.0, params, s)
        assert (du, dh) == pytest.approx((0.0, -0.5))

    def test_sonic_state_raises(self, params):
        # (U - p)^2 = H_profile + transport
        s = reduction.ReducedState(0.0, math.sqrt(2.0), 1.0)
        with pytest.raises(SonicPointError):
            reduction.reduced_rhs_case_i(1.0, params, s)

    def test_back_substitution_consistency(self, params, rng):
        for _ in range(50):
            s = reduction.ReducedState(float(rng.uniform(-1, 1)),
                                       float(rng.uniform(-1, 1)),
                                       float(rng.uniform(0.5, 2)))
            try:
                du, dh = reduction.reduced_rhs_case_i(1.0, params, s)
            except SonicPointError:
                continue
            r1, r2 = reduction.reduced_residual_case_i(1.0, params, s, du, dh)
            assert abs(r1) < 1e-12 and abs(r2) < 1e-12


class TestIntegration:
    def test_zero_parameter_constant_trajectory(self, params):
        traj = reduction.integrate_case_i(0.0, params, 0.0, (0.3, 1.1), 1.0)
        assert traj.status == "completed"
        u, h = traj(0.8)
        assert (u, h) == pytest.approx((0.3, 1.1), abs=1e-12)

    def test_profile_solves_reduced_system(self, params):
        # differentiating the dense interpolant needs a tight integration
        # tolerance for the 1e-8 defect target
        traj = reduction.integrate_case_i(1.0, params, 0.0, (0.0, 1.0), 0.5,
                                          rtol=1e-11, atol=1e-13)
        assert traj.status == "completed"
        # defect check by dense differentiation
        for p in np.linspace(0.02, 0.48, 40):
            u, h = traj(p)
            eps = 1e-6
            um, hm = traj(p - eps)
            up, hp = traj(p + eps)
            du = (up - um) / (2 * eps)
            dh = (hp - hm) / (2 * eps)
            r1, r2 = reduction.reduced_residual_case_i(
                1.0, params, reduction.ReducedState(p, u, h), du, dh)
            assert abs(r1) < 1e-8 and abs(r2) < 1e-8

    def test_tolerance_refinement_agreement(self, params):
        a, p_end = 1.0, 0.5
        t1 = reduction.integrate_case_i(a, params, 0.0, (0.0, 1.0), p_end,
                                        rtol=1e-9)
        t2 = reduction.integrate_case_i(a, params, 0.0, (0.0, 1.0), p_end,
                                        rtol=5e-10)
        assert t1(p_end) == pytest.approx(t2(p_end), abs=1e-8)

    def test_sonic_start_rejected(self, params):
        with pytest.raises(SonicPointError):
            reduction.integrate_case_i(1.0, params, 0.0,
                                       (math.sqrt(2.0), 1.0), 0.5)

    def test_sonic_approach_halts_with_partial_trajectory(self, params):
        # drive toward the degeneracy: D shrinks as p grows along this run
        traj = reduction.integrate_case_i(1.0, params, 0.0, (0.0, 1.0), 6.0)
        assert traj.status in ("sonic", "h-floor")
        lo, hi = traj.p_range
        assert hi < 6.0
        # no state inside the trajectory crossed the degeneracy
        for p in np.linspace(lo, hi, 50):
            u, h = traj(p)
            assert (u - p) ** 2 - params.gravity * (h + params.H) < 0.0

    def test_samples_export_shape(self, params):
        traj = reduction.integrate_case_i(1.0, params, 0.0, (0.0, 1.0), 0.5)
        rows = traj.samples(100)
        assert rows.shape == (100, 3)
        assert np.all(np.diff(rows[:, 0]) > 0)


class TestLifts:
    def test_constant_trajectory_lifts_to_constant_field(self, params):
        traj = reduction.integrate_case_i(0.0, params, -1.0, (0.3, 1.1), 1.0)
        fld = reduction.lift_case_i(traj, 0.0)
        rep = verify_field(fld, params, samples=40, seed=0)
        assert rep.max_abs < 1e-10

    def test_unit_time_slice_is_shifted_profile(self, params):
        traj = reduction.integrate_case_i(1.0, params, 0.0, (0.0, 1.0), 0.5)
        fld = reduction.lift_case_i(traj, 1.0)
        # at t = 1 the similarity variable is x + 1 and the log term drops
        for x in np.linspace(fld.domain.x0, fld.domain.x1, 10):
            u, h = fld(1.0, x)
            uu, hh = traj(x + 1.0)
            assert (u, h) == pytest.approx((uu, hh), abs=1e-14)

    def test_lifted_field_is_exact_solution(self, params):
        traj = reduction.integrate_case_i(1.0, params, 0.0, (0.0, 1.0), 0.5)
        fld = reduction.lift_case_i(traj, 1.0)
        rep = verify_field(fld, params, samples=80, seed=1)
        assert rep.max_abs < 1e-5

    def test_case_ii_reduction_reproduces_closed_form(self):
        # profile U = c1/p, H = c2/p with p = t, plus the boost ansatz
        c1, c2 = 0.7, 1.3
        fld = reduction.case_ii_field(c1, c2)
        for t in (0.6, 1.0, 2.5):
            for x in (-1.0, 0.0, 2.0):
                u_ansatz = c1 / t + x / t
                h_ansatz = c2 / t
                assert fld(t, x) == pytest.approx((u_ansatz, h_ansatz),
                                                  abs=1e-14)


class TestGeneralAnsatz:
    def test_pure_scaling_reduction(self, params):
        traj = reduction.integrate_case_i(0.0, params, 0.5, (0.3, 1.1), 1.5)
        fld = reduction.lift_general_ia(1.0, 0.0, 0.0, 0.0, traj)
        t, x = 1.2, 0.9
        u, h = fld(t, x)
        uu, hh = traj(x / t)
        assert (u, h) == pytest.approx((uu, hh), abs=1e-14)

    def test_needs_nonzero_leading_coefficient(self, params):
        traj = reduction.integrate_case_i(0.0, params, 0.0, (0.3, 1.1), 1.0)
        with pytest.raises(ParameterError):
            reduction.lift_general_ia(0.0, 1.0, 0.0, 0.0, traj)

    def test_log_argument_domain_guard(self, params):
        traj = reduction.integrate_case_i(0.0, params, 0.0, (0.3, 1.1), 1.0)
        with pytest.raises(DomainError):
            reduction.lift_general_ia(2.0, 0.0, 0.0, 1.0, traj,
                                      t_window=(-1.0, -0.6))

    def test_sign_audit(self, params):
        audit = reduction.general_ansatz_sign_audit(
            1.0, params, 0.0, (0.0, 1.0), 0.5, samples=50, seed=0)
        # plain class-(i) lift is an exact solution
        assert audit["plain_lift_residual"] < 1e-5
        # as displayed, the general ansatz does not reduce the system
        assert audit["printed_sign_residual"] > 1e-1
        # flipping the log sign reconciles with the plain lift exactly
        assert audit["flipped_sign_match_gap"] < 1e-12
        assert audit["matched_points"] > 0


class TestCaseIII:
    def test_traveling_wave_constants(self, params):
        pair = simple_pair(c4=1.0, c5=0.5, params=params)  # (1, const)
        s = reduction.ReducedState(0.2, 0.8, 1.2)
        assert reduction.case_iii_residual(pair, s, 0.0, 0.0, params) \
            == (0.0, 0.0)

    def test_stationary_and_space_independent_pairs(self, params):
        from symflow.solutions import constant_pair
        s = reduction.ReducedState(0.0, 0.5, 1.0)
        for f0, g0 in [(1.0, 0.0), (0.0, 1.0)]:
            pair = constant_pair(f0, g0, params=params)
            assert reduction.case_iii_residual(pair, s, 0.0, 0.0, params) \
                == (0.0, 0.0)

    def test_generic_derivatives_leave_residual(self, params):
        pair = simple_pair(c4=1.0, c5=0.5, params=params)
        s = reduction.ReducedState(0.2, 0.8, 1.2)
        r1, r2 = reduction.case_iii_residual(pair, s, 0.3, -0.2, params)
        assert abs(r1) > 1e-3 and abs(r2) > 1e-3
