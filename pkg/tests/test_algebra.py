import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symflow import algebra
from symflow.errors import PreconditionError
from symflow.hodograph import HodographPair
from symflow.model import FluidParams, UHBox, UHFunction
from symflow.solutions import simple_pair


@pytest.fixture(scope="module")
def pair_c2():
    return simple_pair(c2=1.0, params=FluidParams(H=1.0))


@pytest.fixture(scope="module")
def pair_c3():
    return simple_pair(c3=1.0, params=FluidParams(H=1.0))


def pair_values_close(p1, p2, pts, tol=1e-12):
    return all(abs(p1.f(u, h) - p2.f(u, h)) < tol
               and abs(p1.g(u, h) - p2.g(u, h)) < tol for u, h in pts)


PTS = [(0.4, 1.2), (-0.7, 0.8), (0.0, 1.9)]


class TestAdjointClosedForms:
    def test_scaling_flow_scales_pair(self, pair_c2):
        elem = algebra.AlgebraElement(0.0, 0.0, pair_c2)
        out = algebra.adjoint("scaling", math.log(2.0), elem)
        assert pair_values_close(out.pair, pair_c2.scaled(2.0), PTS)

    def test_pair_flow_shifts_scaling(self, params):
        one_zero = simple_pair(c4=1.0, params=params)     # (1, 0)
        out = algebra.adjoint(one_zero, 0.4, algebra.AlgebraElement(1, 0, None))
        assert out.a == 1.0 and out.b == 0.0
        for u, h in PTS:
            assert out.pair.f(u, h) == pytest.approx(-0.4, abs=1e-14)
            assert out.pair.g(u, h) == pytest.approx(0.0, abs=1e-14)

    def test_boost_flow_on_time_translation_pair(self, params):
        one_zero = simple_pair(c4=1.0, params=params)
        out = algebra.adjoint("boost", 0.25,
                              algebra.AlgebraElement(0, 0, one_zero))
        for u, h in PTS:
            assert out.pair.f(u, h) == pytest.approx(1.0, abs=1e-14)
            assert out.pair.g(u, h) == pytest.approx(0.25, abs=1e-14)

    def test_pair_flow_on_boost_adds_u_derived_pair(self, params, pair_c3):
        out = algebra.adjoint(pair_c3, 0.5, algebra.AlgebraElement(0, 1, None))
        ud = pair_c3.u_derived()
        for u, h in PTS:
            assert out.pair.f(u, h) == pytest.approx(0.5 * ud.f(u, h), abs=1e-13)
            assert out.pair.g(u, h) == pytest.approx(0.5 * ud.g(u, h), abs=1e-13)


class TestAdjointSeriesConsistency:
    POINTS = [(1.2, 0.3, -0.4, 1.1), (0.7, -0.6, 0.8, 0.9)]

    @pytest.mark.parametrize("eps", [0.05, 0.1, -0.1])
    def test_gap_below_quartic_bound(self, eps, params):
        pc1 = simple_pair(c1=1.0, params=params)
        pc3 = simple_pair(c3=1.0, params=params)
        cases = [
            ("scaling", algebra.AlgebraElement(0, 0, pc1)),
            ("boost", algebra.AlgebraElement(0, 0, pc1)),
            (pc3, algebra.AlgebraElement(1, 0, None)),
            (pc3, algebra.AlgebraElement(0, 1, None)),
        ]
        bound = 10.0 * abs(eps) ** 4
        for flow, target in cases:
            gap = algebra.adjoint_series_gap(flow, eps, target, self.POINTS)
            assert gap <= bound


class TestCommutatorTable:
    def test_default_catalog_relations(self, params):
        report = algebra.commutator_table_check(samples=50, seed=0,
                                                params=params)
        assert report["max_relation_deviation"] < 1e-7
        assert report["max_membership_residual"] < 1e-7

    def test_corrupted_pair_reported(self, params):
        bad = HodographPair(
            UHFunction(lambda u, h: h, du=lambda u, h: 0.0,
                       dh=lambda u, h: 1.0, duu=lambda u, h: 0.0,
                       duh=lambda u, h: 0.0, dhh=lambda u, h: 0.0,
                       label="h"),
            UHFunction.constant(0.0),
            UHBox(-1, 1, 0.5, 2), params, label="corrupt")
        report = algebra.commutator_table_check(samples=20, seed=0,
                                                params=params, pairs=[bad])
        assert report["membership"]["corrupt"] > 0.4
        # the bracket identities themselves still hold for any smooth pair
        assert report["max_relation_deviation"] < 1e-7


class TestNormalizeFullAlgebra:
    def test_scaling_dominant(self, pair_c2):
        cls = algebra.normalize_g(algebra.AlgebraElement(2.0, 1.0, pair_c2))
        assert cls.tag == algebra.TAG_D_PLUS_AG
        assert cls.a == pytest.approx(0.5)

    def test_boost_only(self, pair_c2):
        cls = algebra.normalize_g(algebra.AlgebraElement(0.0, 3.0, pair_c2))
        assert cls.tag == algebra.TAG_G_ONLY

    def test_pair_class_multiplier_invariance(self, pair_c2):
        base = algebra.normalize_g(algebra.AlgebraElement(0, 0, pair_c2))
        for c in (2.0, -3.5, 0.1):
            other = algebra.normalize_g(
                algebra.AlgebraElement(0, 0, pair_c2.scaled(c)))
            assert other == base

    def test_pair_class_shift_invariance(self, pair_c3):
        base = algebra.normalize_g(algebra.AlgebraElement(0, 0, pair_c3))
        for eps in (0.4, -0.9):
            other = algebra.normalize_g(
                algebra.AlgebraElement(0, 0, pair_c3.boosted(eps)))
            assert other == base

    def test_constant_pairs_fall_in_one_class(self, params):
        # (1, c) is boost-shiftable to (1, 0) for every c
        a = algebra.normalize_g(algebra.AlgebraElement(
            0, 0, simple_pair(c4=1.0, c5=0.0, params=params)))
        b = algebra.normalize_g(algebra.AlgebraElement(
            0, 0, simple_pair(c4=1.0, c5=2.0, params=params)))
        assert a == b

    def test_distinct_pairs_distinct_classes(self, pair_c2, pair_c3):
        a = algebra.normalize_g(algebra.AlgebraElement(0, 0, pair_c2))
        b = algebra.normalize_g(algebra.AlgebraElement(0, 0, pair_c3))
        assert a != b

    def test_zero_element_rejected(self):
        with pytest.raises(PreconditionError):
            algebra.normalize_g(algebra.AlgebraElement(0.0, 0.0, None))

    def test_idempotence(self, pair_c3):
        for elem in (algebra.AlgebraElement(1.5, -2.0, pair_c3),
                     algebra.AlgebraElement(0.0, 0.7, pair_c3),
                     algebra.AlgebraElement(0.0, 0.0, pair_c3)):
            cls = algebra.normalize_g(elem)
            again = algebra.normalize_g(cls.representative_g())
            assert again == cls


class TestNormalizeG1:
    def test_examples(self):
        cls = algebra.normalize_g1(algebra.G1Element(1, 0.5, 1, 1))
        assert cls.tag == algebra.TAG_D_PLUS_AG and cls.a == pytest.approx(0.5)
        cls = algebra.normalize_g1(algebra.G1Element(0, 1, 7, 0))
        assert cls.tag == algebra.TAG_G_DELTA_DT and cls.delta == 0
        cls = algebra.normalize_g1(algebra.G1Element(0, 0, 0, 5))
        assert cls.tag == algebra.TAG_DT_DELTA_DX and cls.delta == 0
        cls = algebra.normalize_g1(algebra.G1Element(0, 0, -2, 0))
        assert cls.tag == algebra.TAG_DX_ONLY

    def test_delta_detects_mixture(self):
        cls = algebra.normalize_g1(algebra.G1Element(0, 2, 0, 3))
        assert cls.tag == algebra.TAG_G_DELTA_DT and cls.delta == 1
        cls = algebra.normalize_g1(algebra.G1Element(0, 0, 3, 3))
        assert cls.tag == algebra.TAG_DT_DELTA_DX and cls.delta == 1

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            algebra.normalize_g1(algebra.G1Element(0, 0, 0, 0))

    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=60, deadline=None)
    def test_orbit_invariance(self, seed):
        rng = np.random.default_rng(seed)
        v = algebra.G1Element.from_array(rng.normal(size=4))
        word = algebra.g1_random_word(rng)
        assert algebra.normalize_g1(algebra.g1_apply_word(word, v)) \
            == algebra.normalize_g1(v)

    @given(lam=st.floats(-20, 20).filter(lambda x: abs(x) > 1e-3),
           seed=st.integers(0, 10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_span_invariance(self, lam, seed):
        rng = np.random.default_rng(seed)
        v = algebra.G1Element.from_array(rng.normal(size=4))
        w = algebra.G1Element.from_array(lam * v.as_array())
        assert algebra.normalize_g1(w) == algebra.normalize_g1(v)

    def test_idempotence_on_representatives(self, rng):
        for _ in range(200):
            v = algebra.G1Element.from_array(rng.normal(size=4))
            cls = algebra.normalize_g1(v)
            assert algebra.normalize_g1(cls.representative_g1()) == cls


class TestOrbitSearch:
    def test_boost_part_with_translation_reduces(self):
        w = algebra.orbit_equivalent_g1(algebra.G1Element(0, 1, 1, 0),
                                        algebra.G1Element(0, 1, 0, 0),
                                        trials=8, seed=0)
        assert w.found and abs(w.flows["dt"] - 1.0) < 1e-6

    def test_scaling_and_boost_inequivalent(self):
        w = algebra.orbit_equivalent_g1(algebra.G1Element(1, 0, 0, 0),
                                        algebra.G1Element(0, 1, 0, 0),
                                        trials=8, seed=0)
        assert not w.found

    def test_identity_witness(self):
        v = algebra.G1Element(0.3, -1.2, 0.7, 2.0)
        assert algebra.orbit_equivalent_g1(v, v, trials=4, seed=0).found

    def test_delta_in_translation_class_is_removable(self):
        w = algebra.orbit_equivalent_g1(algebra.G1Element(0, 0, 1, 1),
                                        algebra.G1Element(0, 0, 0, 1),
                                        trials=8, seed=0)
        assert w.found and abs(w.flows["boost"] + 1.0) < 1e-6

    def test_orbit_closure_is_not_chased(self):
        # dt + dx and dx only touch in the closure; must stay inequivalent
        w = algebra.orbit_equivalent_g1(algebra.G1Element(0, 0, 1, 1),
                                        algebra.G1Element(0, 0, 1, 0),
                                        trials=8, seed=0)
        assert not w.found
        w = algebra.orbit_equivalent_g1(algebra.G1Element(0, 1, 0, 1),
                                        algebra.G1Element(0, 1, 0, 0),
                                        trials=8, seed=0)
        assert not w.found

    def test_generic_same_class_equivalent(self):
        w = algebra.orbit_equivalent_g1(algebra.G1Element(2, 1, 3, -1),
                                        algebra.G1Element(4, 2, 0, 0),
                                        trials=8, seed=0)
        assert w.found

    def test_different_ratios_inequivalent(self):
        w = algebra.orbit_equivalent_g1(algebra.G1Element(1, 0.5, 0, 0),
                                        algebra.G1Element(1, 0.7, 0, 0),
                                        trials=8, seed=0)
        assert not w.found
