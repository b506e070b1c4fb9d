"""Gaussian tail primitives.

All functions take and return plain floats. The upper tail is

    Q(x) = 1/sqrt(2 pi) * int_x^inf exp(-y^2/2) dy = erfc(x/sqrt(2)) / 2

and the hazard (inverse Mills ratio) is phi(t)/Q(t).  For positive
arguments both are evaluated through the scaled complementary error
function erfcx(u) = exp(u^2) erfc(u), so neither forms a tiny quotient.
"""

import math

from scipy import special as _sp

from .errors import DomainError

SQRT2 = math.sqrt(2.0)
LN2 = math.log(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _check_finite(x, name="x"):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def gaussian_pdf(x):
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def gaussian_tail(x):
    """Upper tail probability Q(x) of the standard normal."""
    x = _check_finite(x)
    if x > 0:
        u = x / SQRT2
        # erfcx keeps full relative precision deep in the tail
        return 0.5 * float(_sp.erfcx(u)) * math.exp(-u * u)
    return 0.5 * float(_sp.erfc(x / SQRT2))


def inverse_gaussian_tail(p):
    """Return x such that Q(x) = p, for 0 < p < 1.

    Seeded with the Cephes rational approximation of the normal quantile,
    then polished by Newton steps kept inside a bisection bracket.
    """
    p = float(p)
    if not (0.0 < p < 1.0):
        raise DomainError(f"tail probability must lie in (0, 1), got {p!r}")
    if p == 0.5:
        return 0.0
    x = -float(_sp.ndtri(p))
    lo, hi = x - 1.0, x + 1.0
    while gaussian_tail(lo) < p:
        lo -= 1.0
    while gaussian_tail(hi) > p:
        hi += 1.0
    for _ in range(100):
        err = gaussian_tail(x) - p
        if abs(err) <= 1e-14 * p:
            break
        # Q is decreasing: err > 0 means x is too small
        if err > 0:
            lo = x
        else:
            hi = x
        dens = gaussian_pdf(x)
        step = err / dens if dens > 0 else math.inf
        x_new = x + step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            break
        x = x_new
    return x


def hazard(t):
    """Inverse Mills ratio phi(t)/Q(t).

    Stable for large positive t (where it behaves like t + 1/t).  For
    t below about -38 the exact value is smaller than the smallest
    double and the result underflows to 0.
    """
    t = _check_finite(t, "t")
    if t > 0:
        return _SQRT_2_OVER_PI / float(_sp.erfcx(t / SQRT2))
    return gaussian_pdf(t) / gaussian_tail(t)


def log_two_tail(t):
    """Natural log of 2*Q(t)."""
    t = _check_finite(t, "t")
    if t >= 0:
        u = t / SQRT2
        return math.log(float(_sp.erfcx(u))) - u * u
    # 2Q(t) = 2 - 2Q(-t); log1p avoids cancellation as Q(-t) -> 0
    return LN2 + math.log1p(-gaussian_tail(-t))
