import math

import numpy as np
import pytest

from symflow.errors import ParameterError
from symflow.model import FluidParams, single_f_residual
from symflow.solutions import (bessel_f, bessel_f_box, bessel_order,
                               bessel_wronskian_error, catalog_entry,
                               catalog_ids, galilean_solution, printed_c316_g,
                               simple_pair)


class TestGalilean:
    def test_pointwise_values(self):
        fld = galilean_solution(0.0, 1.0)
        assert fld(2.0, 4.0) == pytest.approx((2.0, 0.5))
        fld = galilean_solution(1.0, 1.0)
        assert fld(1.0, 0.0) == pytest.approx((1.0, 1.0))

    def test_analytic_residual_vanishes(self, params, rng):
        from symflow.model import mswe_residual
        fld = galilean_solution(0.4, 2.0)
        for t, x in fld.domain.interior_samples(rng, 100):
            jet = fld.jet(t, x)
            r1, r2 = mswe_residual(jet, params)
            assert abs(r1) < 1e-13 and abs(r2) < 1e-13

    def test_height_scale_must_be_positive(self):
        with pytest.raises(ParameterError):
            galilean_solution(0.0, -1.0)


class TestSimplePair:
    @pytest.mark.parametrize("kw", [dict(c1=1.0), dict(c2=1.0), dict(c3=1.0),
                                    dict(c1=0.3, c2=-1.0, c3=0.7, c4=2.0,
                                         c5=-0.5)])
    def test_printed_formulas_solve_linearized_system(self, kw, params):
        pair = simple_pair(**kw, params=params)
        assert pair.max_linearized_residual(n=60, seed=1) < 1e-7

    def test_gravity_parameter_kept(self):
        p = FluidParams(H=1.5, gravity=2.0)
        pair = simple_pair(c1=1.0, c3=0.5, params=p)
        assert pair.max_linearized_residual(n=60, seed=2, params=p) < 1e-12

    def test_degenerate_f_rejected(self, params):
        with pytest.raises(ParameterError):
            simple_pair(c5=1.0, params=params)

    def test_quadrature_reconstruction_matches_printed_g(self, params):
        # dual route: path-integrate g from the printed f and compare
        from symflow.hodograph import pair_from_f
        printed = simple_pair(c3=1.0, params=params)
        base = (0.0, 1.0)
        rebuilt = pair_from_f(printed.f, base, printed.g(*base), params,
                              box=printed.box)
        rng = np.random.default_rng(3)
        for u, h in printed.box.samples(rng, 40):
            assert rebuilt.g(u, h) == pytest.approx(printed.g(u, h), abs=1e-8)


class TestBesselFamily:
    @pytest.mark.parametrize("c", [0.125, 3.0 / 16.0, 0.25])
    def test_compatibility_residual(self, c, params, rng):
        f = bessel_f(c, params=params)
        box = bessel_f_box()
        worst = max(abs(single_f_residual(f, u, h, params))
                    for u, h in box.samples(rng, 100))
        assert worst < 1e-7

    def test_imaginary_order_rejected(self, params):
        with pytest.raises(ParameterError):
            bessel_f(0.3, params=params)
        with pytest.raises(ParameterError):
            bessel_f(-0.1, params=params)

    def test_order_formula(self):
        assert bessel_order(3.0 / 16.0) == pytest.approx(0.5)
        assert bessel_order(0.25) == 0.0

    def test_half_order_reduces_to_trigonometric_form(self, params, rng):
        c = 3.0 / 16.0
        alpha = math.sqrt(c / (params.gravity * params.H))
        f = bessel_f(c, c1=1.0, c3=1.0, params=params)

        def closed(u, h):
            return h ** -0.75 * math.sin(alpha * u) \
                * math.sin(2.0 * alpha * math.sqrt(h))

        ratios = [f(u, h) / closed(u, h)
                  for u, h in bessel_f_box().samples(rng, 50)]
        assert max(ratios) - min(ratios) < 1e-8

    def test_wronskian(self):
        for b in (0.0, 0.5, math.sqrt(0.5)):
            err = bessel_wronskian_error(b, np.linspace(0.1, 20.0, 100))
            assert err < 1e-10

    def test_second_kind_component(self, params, rng):
        f = bessel_f(0.125, c1=0.0, c2=1.0, c3=0.0, c4=1.0, params=params)
        worst = max(abs(single_f_residual(f, u, h, params))
                    for u, h in bessel_f_box().samples(rng, 50))
        assert worst < 1e-7

    def test_gravity_moves_velocity_frequency(self, rng):
        p = FluidParams(H=1.0, gravity=3.0)
        f = bessel_f(0.2, params=p)
        worst = max(abs(single_f_residual(f, u, h, p))
                    for u, h in bessel_f_box().samples(rng, 50))
        assert worst < 1e-7


class TestPrintedCompanionAudit:
    def test_printed_g_fails_linearized_system(self, params, catalog_pairs):
        # measured, not guessed: the g display for c = 3/16 mixes its
        # arguments and does not solve the linearized system, while the
        # path-integrated reconstruction does
        from symflow.hodograph import HodographPair
        f = bessel_f(3.0 / 16.0, params=params)
        printed = HodographPair(f, printed_c316_g(params=params),
                                bessel_f_box(), params, label="printed")
        measured = printed.max_linearized_residual(n=100, seed=4)
        rebuilt = catalog_pairs["bessel-c316"]
        assert measured > 1e-2
        assert rebuilt.max_linearized_residual(n=100, seed=4) < 1e-7


class TestCatalog:
    def test_has_required_entries(self, catalog_entries):
        assert len(catalog_entries) >= 6
        for required in ("constant", "galilean", "pair-c1", "pair-c2",
                         "pair-c3", "bessel-c316"):
            assert required in catalog_entries

    def test_galilean_marked_boost_invariant(self, catalog_entries):
        assert "boost" in catalog_entries["galilean"].note

    def test_constant_entry_residual(self, params):
        from symflow.hodograph import verify_field
        fld = catalog_entry("constant").build()
        assert verify_field(fld, params, samples=50, seed=0).max_abs == 0.0

    def test_pair_entries_pass_membership(self, catalog_pairs):
        for pid, pair in catalog_pairs.items():
            assert pair.max_linearized_residual(n=100, seed=0) < 1e-7, pid

    def test_unknown_id_rejected(self):
        with pytest.raises(ParameterError):
            catalog_entry("no-such-entry")

    def test_ids_are_stable(self):
        assert catalog_ids() == ["constant", "galilean", "pair-c1", "pair-c2",
                                 "pair-c3", "bessel-c316"]

    def test_separable_entry_absent_on_swe_branch(self, params_swe):
        from symflow.solutions import catalog
        ids = [e.id for e in catalog(params_swe)]
        assert "bessel-c316" not in ids
        assert "pair-c3" in ids

    def test_constant_pair_values(self, params):
        from symflow.solutions import constant_pair
        pair = constant_pair(1.0, 0.5, params=params)
        assert pair.forward(0.3, 1.7) == (1.0, 0.5)
        with pytest.raises(ParameterError):
            constant_pair(0.0, 0.0, params=params)
