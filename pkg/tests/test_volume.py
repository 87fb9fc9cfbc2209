"""Shell volumes, renormalized volume, and the flow/area lower bounds."""

import math

import pytest

from renvol.errors import DecayError
from renvol.metric import ads_schwarzschild, custom_profile, hyperbolic, rn_ads
from renvol.quadrature import Integral, Tolerance
from renvol.volume import (
    area_lower_bound,
    barrier_clearance,
    flow_time,
    flow_volume_lower_bound,
    isoperimetric_identity,
    model_bound_inner,
    renormalized_volume,
    volume_between,
)

from helpers import hyperbolic_ball_volume

FOUR_PI = 4.0 * math.pi

# reference shell values, precomputed with mpmath at 50-digit precision
ADS2_SHELL_1_TO_2 = 23.76413818787774962224794
ADS2_RENORMALIZED = 10.57979709432415597175408


class TestVolumeBetween:
    def test_reference_ball_closed_form(self):
        for s in (0.5, 1.0, 3.0):
            got = volume_between(hyperbolic(), 0.0, s)
            assert got.value == pytest.approx(hyperbolic_ball_volume(s), rel=1e-12)

    def test_empty_shell(self):
        assert volume_between(hyperbolic(), 2.0, 2.0) == Integral(0.0, 0.0, 0)

    def test_model_shell_from_horizon(self):
        # lower endpoint sits exactly on the horizon, where the integrand
        # has an inverse-sqrt singularity
        got = volume_between(ads_schwarzschild(2.0), 1.0, 2.0)
        assert got.value == pytest.approx(ADS2_SHELL_1_TO_2, rel=1e-10)

    def test_additive_in_the_upper_limit(self):
        p = rn_ads(4.0, 1.0)
        lo = p.horizon.radius
        a = volume_between(p, lo, 3.0).value
        b = volume_between(p, 3.0, 7.0).value
        whole = volume_between(p, lo, 7.0).value
        assert a + b == pytest.approx(whole, rel=1e-9)

    def test_starting_below_horizon_rejected(self):
        with pytest.raises(ValueError, match="inside the horizon"):
            volume_between(ads_schwarzschild(2.0), 0.5, 2.0)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            volume_between(hyperbolic(), 2.0, 1.0)
        with pytest.raises(ValueError):
            volume_between(hyperbolic(), -1.0, 1.0)


class TestRenormalizedVolume:
    def test_reference_is_zero(self):
        res = renormalized_volume(hyperbolic())
        assert res.value == 0.0
        assert res.tail_correction == 0.0
        assert res.stability == 0.0

    def test_model_value_against_oracle(self):
        res = renormalized_volume(ads_schwarzschild(2.0))
        assert res.value == pytest.approx(ADS2_RENORMALIZED, rel=1e-10)
        assert res.truncation_radius == 1e3
        assert res.evaluations > 0

    def test_tail_matches_leading_order(self):
        # the tail behaves like 2*pi*m/r to leading order
        res = renormalized_volume(ads_schwarzschild(2.0))
        assert res.tail_correction == pytest.approx(FOUR_PI / 2.0 * 2.0 / 1e3, rel=1e-5)

    def test_truncation_independence(self):
        near = renormalized_volume(ads_schwarzschild(2.0), truncation_radius=1e3)
        far = renormalized_volume(ads_schwarzschild(2.0), truncation_radius=1e4)
        assert near.value == pytest.approx(far.value, abs=1e-9)
        assert near.stability < 1e-9
        assert far.stability < 1e-9

    def test_charged_profile(self):
        res = renormalized_volume(rn_ads(4.0, 1.0))
        assert res.stability < 1e-9
        bigger = renormalized_volume(rn_ads(5.0, 1.0))
        assert bigger.value > res.value

    def test_slow_decay_is_rejected(self):
        with pytest.raises(DecayError, match="decays like"):
            renormalized_volume(custom_profile("1 + s^2 - s"))

    def test_truncation_inside_horizon_rejected(self):
        with pytest.raises(ValueError):
            renormalized_volume(ads_schwarzschild(2.0), truncation_radius=0.5)
        with pytest.raises(ValueError):
            renormalized_volume(hyperbolic(), truncation_radius=math.inf)


class TestFlowBound:
    @pytest.mark.parametrize(
        "p,tau",
        [
            (ads_schwarzschild(2.0), 2.0 * math.log(2.0)),
            (ads_schwarzschild(0.5), 1.0),
            (rn_ads(4.0, 1.0), 1.0),
            (rn_ads(2.0, 0.5), 2.0),
        ],
    )
    def test_attains_the_volume_on_symmetric_profiles(self, p, tau):
        lo = p.horizon.radius
        bound = flow_volume_lower_bound(p, tau)
        vol = volume_between(p, lo, lo * math.exp(0.5 * tau))
        assert bound.value == pytest.approx(vol.value, rel=1e-12)

    def test_zero_duration(self):
        assert flow_volume_lower_bound(ads_schwarzschild(2.0), 0.0) == Integral(0.0, 0.0, 0)

    def test_negative_duration(self):
        with pytest.raises(ValueError):
            flow_volume_lower_bound(ads_schwarzschild(2.0), -1.0)

    def test_requires_a_horizon(self):
        with pytest.raises(ValueError, match="horizon"):
            flow_volume_lower_bound(hyperbolic(), 1.0)


class TestAreaBound:
    def test_equality_on_model_family(self):
        # with the matched model the area bound IS twice the volume
        p = ads_schwarzschild(2.0)
        tau = 2.0 * math.log(2.0)
        cor = area_lower_bound(p.horizon.area, tau)
        vol = volume_between(p, 1.0, 2.0)
        assert cor.value == pytest.approx(2.0 * vol.value, rel=1e-12)

    def test_strict_on_positive_charge(self):
        p = rn_ads(4.0, 1.0)
        lo = p.horizon.radius
        tau = 1.0
        cor = area_lower_bound(p.horizon.area, tau)
        doubled = 2.0 * volume_between(p, lo, lo * math.exp(0.5 * tau)).value
        assert cor.value < doubled
        assert doubled - cor.value == pytest.approx(2.0278, rel=1e-3)

    def test_zero_duration(self):
        assert area_lower_bound(FOUR_PI, 0.0).value == 0.0

    def test_validations(self):
        with pytest.raises(ValueError):
            area_lower_bound(0.0, 1.0)
        with pytest.raises(ValueError):
            area_lower_bound(FOUR_PI, -0.5)


class TestModelBoundInner:
    def test_hand_checked_point(self):
        # A = 4*pi, t = ln 4: 4*pi*(7/8) + pi*(1/2) = 4*pi
        assert model_bound_inner(FOUR_PI, math.log(4.0)) == pytest.approx(FOUR_PI, rel=1e-15)

    def test_zero_at_start(self):
        assert model_bound_inner(FOUR_PI, 0.0) == 0.0

    def test_offset_start_returns_eps(self):
        assert model_bound_inner(FOUR_PI, 0.7, alpha=0.7, eps=1e-3) == 1e-3

    @pytest.mark.parametrize("area", [FOUR_PI, 2.5 * FOUR_PI, 40.0])
    @pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
    def test_matches_model_metric(self, area, t):
        # Z(A, t) = 4*pi*e^(-t)*fbar(s_h*e^(t/2)) on the model whose
        # horizon area is A; this is what makes the area bound collapse
        # to twice the model volume
        s_h = math.sqrt(area / FOUR_PI)
        mass = s_h**3 + s_h
        u = s_h * math.exp(0.5 * t)
        fbar = 1.0 + u * u - mass / u
        want = FOUR_PI * math.exp(-t) * fbar
        assert model_bound_inner(area, t) == pytest.approx(want, rel=1e-13)


class TestIsoIdentity:
    def test_model_identity(self):
        res = isoperimetric_identity(2.0, 2.0)
        assert res.rel_err < 1e-9
        assert res.lhs == pytest.approx(2.0 * ADS2_SHELL_1_TO_2, rel=1e-10)
        assert res.evaluations > 0

    def test_small_mass_tall_shell(self):
        res = isoperimetric_identity(0.5, 10.0)
        assert res.rel_err < 1e-9

    def test_degenerate_shell(self):
        s0 = ads_schwarzschild(2.0).horizon.radius
        res = isoperimetric_identity(2.0, s0)
        assert res.lhs == 0.0 and res.rhs == 0.0 and res.rel_err == 0.0

    def test_top_below_horizon(self):
        with pytest.raises(ValueError):
            isoperimetric_identity(2.0, 0.5)


class TestFlowTime:
    def test_radius_growth(self):
        horizon = ads_schwarzschild(2.0).horizon
        ft = flow_time(horizon, 2.0 * math.log(3.0))
        assert ft.radius == pytest.approx(3.0, rel=1e-15)
        assert ft.area == pytest.approx(horizon.area * 9.0, rel=1e-14)

    def test_zero_time_is_the_horizon(self):
        horizon = rn_ads(4.0, 1.0).horizon
        ft = flow_time(horizon, 0.0)
        assert ft.radius == horizon.radius

    def test_negative_time(self):
        with pytest.raises(ValueError):
            flow_time(ads_schwarzschild(2.0).horizon, -0.1)


class TestBarrierClearance:
    def test_closed_form(self):
        p = ads_schwarzschild(2.0, delta=0.2)
        for t in (0.0, 1.0, 4.0):
            assert barrier_clearance(p, t) == pytest.approx(
                math.exp(0.1 * t), rel=1e-15
            )

    def test_delta_override(self):
        p = ads_schwarzschild(2.0)
        assert barrier_clearance(p, 2.0, delta=0.1) == pytest.approx(
            math.exp(0.1), rel=1e-15
        )

    def test_clearance_grows_with_time(self):
        p = rn_ads(4.0, 1.0)
        values = [barrier_clearance(p, t) for t in (0.0, 1.0, 2.0, 3.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_requires_horizon(self):
        with pytest.raises(ValueError):
            barrier_clearance(hyperbolic(), 1.0)

    def test_bad_delta(self):
        with pytest.raises(ValueError):
            barrier_clearance(ads_schwarzschild(2.0), 1.0, delta=0.3)


def test_tight_tolerance_changes_little():
    loose = renormalized_volume(ads_schwarzschild(2.0), Tolerance(rel=1e-8))
    tight = renormalized_volume(ads_schwarzschild(2.0), Tolerance(rel=1e-12))
    assert loose.value == pytest.approx(tight.value, rel=1e-8)
    assert abs(tight.value - ADS2_RENORMALIZED) <= abs(loose.value - ADS2_RENORMALIZED) + 1e-12
