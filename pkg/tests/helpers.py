"""Shared independent oracles for the test suite.

Everything here is deliberately dumb: plain bisection, composite
Simpson, central differences, and one closed-form antiderivative.  The
point is that none of it shares code (or failure modes) with the
library's adaptive machinery.
"""

import math


def bisect60(fn, lo, hi):
    """60 rounds of bisection; assumes a sign change on [lo, hi]."""
    flo = fn(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) == (fmid < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def simpson_composite(fn, a, b, panels):
    """Composite Simpson with `panels` even subdivisions."""
    if panels % 2:
        panels += 1
    h = (b - a) / panels
    total = fn(a) + fn(b)
    for i in range(1, panels):
        total += fn(a + i * h) * (4.0 if i % 2 else 2.0)
    return total * h / 3.0


def fd_derivative(fn, x, h=None):
    if h is None:
        h = 1e-6 * max(1.0, abs(x))
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def hyperbolic_ball_volume(s):
    """Closed form of the integral of 4*pi*t^2/sqrt(1+t^2) from 0 to s."""
    return 4.0 * math.pi * (0.5 * s * math.sqrt(1.0 + s * s) - 0.5 * math.asinh(s))
