"""Spherically symmetric metrics g = f(s)^-1 ds^2 + s^2 g_(round sphere).

A metric in this class is described entirely by its radial profile f.
The reference space is f(s) = 1 + s^2; a profile is asymptotically close
to it when the defect q(s) = 1 + s^2 - f(s) decays fast enough, which
``validate_asymptotics`` checks by fitting the decay rate of the pointwise
metric deviation |q|/f on a logarithmic radius grid.

Closed-form geometry used throughout:

    scalar curvature   R(s) = 2*(1 - f - s*f')/s^2
    mean curvature     H(s) = 2*sqrt(f)/s          (coordinate sphere)
    quasi-local mass   m_H(s) = 32*pi^(3/2)*s*q(s)

The quasi-local (Hawking-type) mass is kept in its unnormalized form
sqrt(area) * (16*pi - integral(H^2 - 4)); no (16*pi)^(-3/2) factor is
applied anywhere in this package.

The defect q is evaluated with exact rational arithmetic whenever the
profile expression is free of exp/log/sqrt.  That matters: at s = 1e4
the float subtraction (1 + s^2) - f(s) already loses half its digits to
cancellation, and several consumers (mass constancy, tail corrections,
decay fitting) need q far beyond that radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import DecayError, DomainError
from .expressions import ExactUnsupported, Expression, parse
from .quadrature import find_root_bracketed

__all__ = [
    "RadialProfile",
    "Horizon",
    "AsymptoticsReport",
    "hyperbolic",
    "ads_schwarzschild",
    "rn_ads",
    "custom_profile",
    "ads_horizon_radius",
    "validate_asymptotics",
]

DEFAULT_DELTA = 0.2

_SCAN_LO = 1e-6
_SCAN_HI = 1e3
_SCAN_POINTS = 10_000

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class Horizon:
    """Outermost zero of the profile and the area of that sphere."""

    radius: float
    area: float


@dataclass(frozen=True)
class AsymptoticsReport:
    """Outcome of the decay-rate fit performed by validate_asymptotics.

    ``measured_rate`` is the fitted log-log slope of |q|/f (negative
    infinity when the defect vanishes identically on the grid), and
    ``derivative_slope`` is the corresponding slope for the sampled
    defect-derivative trend |q'|/s, reported for diagnosis only.
    """

    passed: bool
    measured_rate: float
    required_rate: float
    fit_points: int
    derivative_slope: float | None


@dataclass(frozen=True)
class RadialProfile:
    """A radial profile f together with parameter bindings.

    ``delta`` in (0, 1/4) is the decay exponent the profile claims: the
    metric deviation from the reference space should fall off like
    s^-(2 + 4*delta).  The claim is checked by validate_asymptotics, not
    here.  Instances are immutable; do not mutate ``params`` after
    construction.
    """

    f: Expression
    params: Mapping[str, float] = field(default_factory=dict)
    delta: float = DEFAULT_DELTA
    label: str = "custom"

    def __post_init__(self):
        if not (0.0 < self.delta < 0.25):
            raise ValueError("delta must lie in (0, 1/4), got %r" % (self.delta,))
        object.__setattr__(self, "params", dict(self.params))
        missing = self.f.parameters() - set(self.params)
        if missing:
            raise ValueError("unbound profile parameters: %s" % ", ".join(sorted(missing)))

    @cached_property
    def df(self) -> Expression:
        return self.f.derivative()

    @cached_property
    def _exact_params(self):
        return {name: Fraction(value) for name, value in self.params.items()}

    @cached_property
    def _rational(self) -> bool:
        return not self.f.has_transcendental()

    def value(self, s: float) -> float:
        """f(s)."""
        return self.f.evaluate(s, self.params)

    def slope(self, s: float) -> float:
        """f'(s)."""
        return self.df.evaluate(s, self.params)

    def defect(self, s: float) -> float:
        """q(s) = 1 + s^2 - f(s), free of cancellation where possible."""
        if self._rational:
            fs = Fraction(s)
            exact = 1 + fs * fs - self.f.evaluate_exact(fs, self._exact_params)
            return float(exact)
        return 1.0 + s * s - self.value(s)

    def defect_slope(self, s: float) -> float:
        """q'(s) = 2*s - f'(s), exact-path when the profile is rational."""
        if self._rational:
            fs = Fraction(s)
            exact = 2 * fs - self.df.evaluate_exact(fs, self._exact_params)
            return float(exact)
        return 2.0 * s - self.slope(s)

    def mass_aspect(self, s: float) -> float:
        """s * q(s); constant in s exactly when the defect decays like m/s."""
        return s * self.defect(s)

    @cached_property
    def horizon(self) -> Horizon | None:
        """Outermost root of f on the scan range, or None if f stays positive.

        Scans a geometric grid on (1e-6, 1e3] and refines the last sign
        change by safeguarded bracketed root finding.  Points where f is
        undefined are skipped.  A profile that is still negative at the
        outer scan edge cannot enclose a compact region and raises
        DecayError.
        """
        ratio = (_SCAN_HI / _SCAN_LO) ** (1.0 / (_SCAN_POINTS - 1))
        fn = self.value
        prev_s = None
        prev_f = None
        bracket = None
        exact_hit = None
        s = _SCAN_LO
        last_f = None
        for i in range(_SCAN_POINTS):
            try:
                fs = fn(s)
            except DomainError:
                prev_s = None
                prev_f = None
                s *= ratio
                continue
            last_f = fs
            if fs == 0.0:
                exact_hit = s
                bracket = None
            elif prev_f is not None and (prev_f > 0.0) != (fs > 0.0):
                bracket = (prev_s, s)
                exact_hit = None
            prev_s = s
            prev_f = fs
            s *= ratio
        if last_f is not None and last_f < 0.0:
            raise DecayError(
                "profile %r is negative at the outer scan edge; no enclosing "
                "region exists" % self.label
            )
        if bracket is not None:
            lo, hi = bracket
            root = find_root_bracketed(fn, lo, hi, tol=1e-14 * max(1.0, hi))
        elif exact_hit is not None:
            root = exact_hit
        else:
            return None
        return Horizon(root, _FOUR_PI * root * root)

    def mean_curvature(self, s: float) -> float:
        """H(s) = 2*sqrt(f(s))/s for the coordinate sphere of radius s."""
        if not s > 0.0:
            raise ValueError("radius must be positive, got %r" % (s,))
        fs = self.value(s)
        if fs < 0.0:
            raise DomainError("profile negative at s=%r; sphere is not spacelike-mean-convex" % (s,))
        return 2.0 * math.sqrt(fs) / s

    def scalar_curvature(self, s: float) -> float:
        """R(s) = 2*(1 - f - s*f')/s^2."""
        if not s > 0.0:
            raise ValueError("radius must be positive, got %r" % (s,))
        return 2.0 * (1.0 - self.value(s) - s * self.slope(s)) / (s * s)

    def hawking_mass(self, s: float) -> float:
        """Unnormalized quasi-local mass of the coordinate sphere at s.

        Equals sqrt(area) * (16*pi - integral over the sphere of H^2 - 4),
        which collapses to 32*pi^(3/2)*s*q(s) in this symmetric class.
        Requires s at or outside the horizon when one exists.
        """
        if not s > 0.0:
            raise ValueError("radius must be positive, got %r" % (s,))
        hz = self.horizon
        if hz is not None and s < hz.radius * (1.0 - 1e-12):
            raise ValueError(
                "radius %r lies inside the horizon at %r" % (s, hz.radius)
            )
        return 32.0 * math.pi ** 1.5 * s * self.defect(s)


def hyperbolic(delta: float = DEFAULT_DELTA) -> RadialProfile:
    """The reference profile f = 1 + s^2."""
    return RadialProfile(parse("1 + s^2"), {}, delta, "hyperbolic")


def ads_schwarzschild(m: float, delta: float = DEFAULT_DELTA) -> RadialProfile:
    """One-parameter model family f = 1 + s^2 - m/s, m > 0."""
    if not (m > 0.0 and math.isfinite(m)):
        raise ValueError("mass must be positive and finite, got %r" % (m,))
    return RadialProfile(parse("1 + s^2 - m/s"), {"m": m}, delta, "ads m=%g" % m)


def rn_ads(m: float, c: float, delta: float = DEFAULT_DELTA) -> RadialProfile:
    """Two-parameter family f = 1 + s^2 - m/s + c/s^2.

    The sign of c is the sign of R + 6 everywhere, which makes the family
    a convenient probe of the curvature hypothesis.
    """
    if not (m > 0.0 and math.isfinite(m)):
        raise ValueError("mass must be positive and finite, got %r" % (m,))
    if not math.isfinite(c):
        raise ValueError("charge term must be finite, got %r" % (c,))
    return RadialProfile(
        parse("1 + s^2 - m/s + c/s^2"), {"m": m, "c": c}, delta, "rn-ads m=%g c=%g" % (m, c)
    )


def custom_profile(
    text: str,
    params: Mapping[str, float] | None = None,
    delta: float = DEFAULT_DELTA,
    label: str | None = None,
) -> RadialProfile:
    """Build a profile from expression text; parameters bind at call time."""
    expr = parse(text)
    return RadialProfile(expr, params or {}, delta, label if label is not None else text)


def ads_horizon_radius(m: float) -> float:
    """Positive root of s^3 + s - m = 0 (horizon radius of the m-model).

    Safeguarded Newton iteration on the bracket [0, max(1, m^(1/3)) + 1];
    the cubic is strictly increasing so the root is unique and simple.
    """
    if not (m > 0.0 and math.isfinite(m)):
        raise ValueError("mass must be positive and finite, got %r" % (m,))
    lo = 0.0
    hi = max(1.0, m ** (1.0 / 3.0)) + 1.0
    x = min(hi - 1.0, max(0.5 * hi, 1e-3))
    for _ in range(200):
        g = x * x * x + x - m
        if g == 0.0:
            return x
        if g < 0.0:
            lo = x
        else:
            hi = x
        step = g / (3.0 * x * x + 1.0)
        nxt = x - step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 1e-16 * max(1.0, abs(x)):
            return nxt
        x = nxt
    return x


def validate_asymptotics(p: RadialProfile) -> AsymptoticsReport:
    """Fit the decay rate of the metric deviation |q|/f on s in [1e2, 1e6].

    Passes when the fitted log-log slope is at most -(2 + 4*delta) up to a
    fit tolerance of 0.05.  A defect that vanishes identically passes with
    rate -inf.  For profiles evaluated in float (transcendental trees) the
    samples drowned by rounding noise are excluded from the fit.

    Raises DomainError when f is nonpositive anywhere on the grid.
    """
    required = -(2.0 + 4.0 * p.delta)
    grid = np.geomspace(1e2, 1e6, 41)
    exact = p._rational
    log_s = []
    log_norm = []
    log_dslope = []
    for s in grid:
        s = float(s)
        fs = p.value(s)
        if not (fs > 0.0):
            raise DomainError("profile nonpositive at s=%r on the asymptotics grid" % (s,))
        q = p.defect(s)
        if not exact:
            # below this floor the float subtraction is pure rounding noise
            if abs(q) <= 64.0 * 2.220446049250313e-16 * (1.0 + s * s):
                continue
        if q == 0.0:
            continue
        norm = abs(q) / fs
        log_s.append(math.log(s))
        log_norm.append(math.log(norm))
        dq = p.defect_slope(s)
        if dq != 0.0:
            log_dslope.append((math.log(s), math.log(abs(dq) / s)))
    if len(log_s) < 2:
        return AsymptoticsReport(True, -math.inf, required, len(log_s), None)
    rate = float(np.polyfit(log_s, log_norm, 1)[0])
    dslope = None
    if len(log_dslope) >= 2:
        xs = [pair[0] for pair in log_dslope]
        ys = [pair[1] for pair in log_dslope]
        dslope = float(np.polyfit(xs, ys, 1)[0])
    passed = rate <= required + 0.05
    return AsymptoticsReport(passed, rate, required, len(log_s), dslope)
