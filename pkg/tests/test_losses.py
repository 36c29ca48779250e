"""Unit and property tests for margin_lab.losses.

Expected values marked as oracle-frozen were computed with the independent
naive implementations in _oracles.py (finite differences and bisection) and
then pinned as constants.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from margin_lab.losses import (
    EXP,
    HINGE,
    LOG,
    SEMICIRCLE,
    LossSpec,
    log1mexp,
    parse_loss,
    poly,
)

from _oracles import bisect_inverse, fd_deriv

SMOOTH = [EXP, LOG, poly(1.0), poly(2.0), poly(3.5), SEMICIRCLE]
ALL = SMOOTH + [HINGE]

moderate_z = st.floats(min_value=-30.0, max_value=30.0, allow_nan=False)
wide_z = st.floats(min_value=-700.0, max_value=700.0, allow_nan=False)


class TestPinnedValues:
    def test_value_at_zero(self):
        assert EXP.value(0.0) == 1.0
        assert LOG.value(0.0) == pytest.approx(math.log(2.0), rel=1e-15)
        assert SEMICIRCLE.value(0.0) == 1.0
        assert poly(2.0).value(0.0) == 1.0
        assert HINGE.value(0.0) == 0.0

    def test_hinge_values(self):
        assert HINGE.value(-3.0) == 3.0
        assert HINGE.value(2.0) == 0.0
        assert HINGE.deriv(-1.0) == -1.0
        assert HINGE.deriv(0.0) == -1.0  # fixed subgradient at the kink
        assert HINGE.deriv(0.5) == 0.0

    def test_deriv_pinned(self):
        assert EXP.deriv(0.0) == -1.0
        assert LOG.deriv(0.0) == pytest.approx(-0.5, rel=1e-15)
        # oracle-frozen: central FD of the left-branch poly formula, k=1, z=-1
        assert poly(1.0).deriv(-1.0) == pytest.approx(-1.75, abs=1e-12)

    def test_inverse_pinned(self):
        assert EXP.inverse(1.0) == 0.0
        assert SEMICIRCLE.inverse(1.0) == 0.0
        assert poly(2.0).inverse(0.25) == pytest.approx(1.0, rel=1e-12)
        assert LOG.inverse(math.log(2.0)) == pytest.approx(0.0, abs=1e-15)

    def test_neg_inv_deriv_pinned(self):
        assert EXP.neg_inv_deriv(0.5) == 2.0
        assert LOG.neg_inv_deriv(math.log(2.0)) == pytest.approx(2.0, rel=1e-14)
        assert SEMICIRCLE.neg_inv_deriv(1.0) == 2.0

    def test_lipschitz_const_pinned(self):
        assert LOG.with_n(100).lipschitz_const() == 1.0
        assert EXP.with_n(7).lipschitz_const() == 1.0
        assert poly(2.0).with_n(16).lipschitz_const() == 4.0
        assert SEMICIRCLE.with_n(9).lipschitz_const() == 10.0

    def test_parse_loss(self):
        assert parse_loss("exp") == EXP
        assert parse_loss("log") == LOG
        assert parse_loss("semicircle") == SEMICIRCLE
        assert parse_loss("hinge") == HINGE
        assert parse_loss("poly:2") == poly(2.0)
        assert parse_loss("poly:3.5").k == 3.5
        with pytest.raises(ValueError):
            parse_loss("gauss")
        with pytest.raises(ValueError):
            parse_loss("poly:abc")
        assert parse_loss("poly:0.5").k == 0.5  # any k > 0 is a valid degree
        with pytest.raises(ValueError, match="k must be > 0"):
            parse_loss("poly:0")

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            LossSpec("nope")
        with pytest.raises(ValueError):
            LossSpec("poly", k=0.0)
        with pytest.raises(ValueError):
            LossSpec("exp", n=0)
        assert poly(2.0).name == "poly:2"
        assert EXP.with_n(12).n == 12

    def test_unsupported_for_hinge(self):
        for call in (
            lambda: HINGE.inverse(0.5),
            lambda: HINGE.neg_inv_deriv(0.5),
            lambda: HINGE.lipschitz_const(),
        ):
            with pytest.raises(ValueError):
                call()

    def test_inverse_domain_errors(self):
        for spec in SMOOTH:
            with pytest.raises(ValueError):
                spec.inverse(0.0)
            with pytest.raises(ValueError):
                spec.inverse(-1.0)
            with pytest.raises(ValueError):
                spec.neg_inv_deriv(0.0)


class TestOracleRoutes:
    """Dual-route agreement with the naive oracle implementations."""

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    def test_fd_derivative_agrees(self, spec):
        for z in [-5.0, -1.0, -0.3, 0.17, 1.0, 4.0, 12.0]:
            want = fd_deriv(spec.kind, z, k=spec.k)
            got = spec.deriv(z)
            assert got == pytest.approx(want, rel=1e-5, abs=1e-9)

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    def test_bisection_inverse_agrees(self, spec):
        for u in [0.05, 0.4, 1.0, 2.5, 9.0]:
            want = bisect_inverse(spec.kind, u, k=spec.k)
            got = spec.inverse(u)
            assert got == pytest.approx(want, rel=1e-8, abs=1e-8)

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    def test_neg_inv_deriv_is_reciprocal_slope(self, spec):
        # (-l^{-1})'(u) must equal -1 / l'(l^{-1}(u))
        for u in [0.03, 0.5, 1.0, 3.0, 20.0]:
            z = spec.inverse(u)
            want = -1.0 / spec.deriv(z)
            assert spec.neg_inv_deriv(u) == pytest.approx(want, rel=1e-10)


class TestProperties:
    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    @given(z=moderate_z)
    @settings(max_examples=60, deadline=None)
    def test_positive_and_decreasing(self, spec, z):
        v = spec.value(z)
        assert v > 0.0
        assert spec.deriv(z) < 0.0
        assert spec.value(z + 0.5) < v

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    @given(z=moderate_z)
    @settings(max_examples=60, deadline=None)
    def test_convexity(self, spec, z):
        assert spec.second_deriv(z) >= 0.0
        a, b = z - 0.7, z + 0.9
        mid = spec.value((a + b) / 2.0)
        assert mid <= (spec.value(a) + spec.value(b)) / 2.0 + 1e-12

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    @given(z=st.floats(min_value=-25.0, max_value=25.0, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_inverse_round_trip(self, spec, z):
        u = spec.value(z)
        back = spec.inverse(u)
        assert back == pytest.approx(z, rel=1e-10, abs=1e-10)

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    @given(z=wide_z)
    @settings(max_examples=60, deadline=None)
    def test_log_value_consistent(self, spec, z):
        lv = spec.log_value(z)
        v = spec.value(z)
        if 0.0 < v < math.inf:
            assert lv == pytest.approx(math.log(v), rel=1e-12, abs=1e-12)
        assert math.isfinite(lv) or lv == math.inf

    @pytest.mark.parametrize("spec", ALL, ids=lambda s: s.name)
    @given(z=st.floats(min_value=-600.0, max_value=600.0, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_log_abs_deriv_consistent(self, spec, z):
        lad = spec.log_abs_deriv(z)
        d = spec.deriv(z)
        if d != 0.0 and math.isfinite(d):
            assert lad == pytest.approx(math.log(abs(d)), rel=1e-12, abs=1e-12)
        if d == 0.0:
            assert lad == -math.inf

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    @given(u=st.floats(min_value=1e-6, max_value=1e6, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_log_neg_inv_deriv_consistent(self, spec, u):
        want = spec.neg_inv_deriv(u)
        got = spec.log_neg_inv_deriv(u, math.log(u))
        assert got == pytest.approx(math.log(want), rel=1e-10, abs=1e-10)

    @pytest.mark.parametrize("spec", SMOOTH, ids=lambda s: s.name)
    def test_curvature_ratio_nonincreasing(self, spec):
        zs = np.linspace(-40.0, 40.0, 4001)
        ratio = spec.deriv(zs) ** 2 / (spec.value(zs) * spec.second_deriv(zs))
        assert np.all(np.diff(ratio) <= 1e-12)


class TestDeepTails:
    """Log-domain continuations where plain float64 under/overflows."""

    def test_exp_deep(self):
        assert EXP.log_value(1000.0) == -1000.0
        assert EXP.value(1000.0) == 0.0
        assert EXP.log_neg_inv_deriv(0.0, -1000.0) == 1000.0

    def test_log_loss_deep(self):
        # softplus(-z) ~ e^{-z} for huge z: log_value must track -z
        assert LOG.log_value(800.0) == pytest.approx(-800.0, rel=1e-12)
        assert LOG.log_value(50.0) == pytest.approx(
            math.log(math.log1p(math.exp(-50.0))), rel=1e-12
        )
        # inverse decay rate explodes like 1/u as u -> 0
        got = LOG.log_neg_inv_deriv(0.0, -900.0)
        assert got == pytest.approx(900.0, rel=1e-12)

    def test_log1mexp_branches(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 50
        for u in [1e-12, 1e-3, 0.5, math.log(2.0), 1.0, 5.0, 50.0]:
            want = float(mp.log(1 - mp.exp(-mp.mpf(u))))
            assert log1mexp(u) == pytest.approx(want, rel=1e-13)
        assert log1mexp(1e-300) == pytest.approx(math.log(1e-300), rel=1e-12)

    def test_semicircle_no_overflow(self):
        z = 1e200  # z*z would overflow; hypot must keep this finite
        assert SEMICIRCLE.log_value(z) == pytest.approx(math.log(2.0) - math.log(2e200), rel=1e-10)
        assert math.isfinite(SEMICIRCLE.log_abs_deriv(z))

    def test_vectorized_matches_scalar(self):
        zs = np.array([-3.0, -0.5, 0.0, 0.5, 3.0])
        for spec in ALL:
            vec = spec.value(zs)
            assert isinstance(vec, np.ndarray)
            for i, z in enumerate(zs):
                assert vec[i] == spec.value(float(z))
