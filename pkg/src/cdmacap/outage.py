"""Outage operating points under additive white Gaussian noise.

With unit-energy BPSK chips and noise variance N0/2, the signal-to-noise
amplitude ratio is sqrt(P)/sigma = sqrt(2 Eb/N0).  A user is in outage
when its noise sample exceeds the bound kappa*sqrt(P), which happens with
probability Q(kappa * sqrt(2 Eb/N0)).
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConvergenceError, DomainError
from .saddle import DEFAULT_MAX_ITER, DEFAULT_TOL, LoadNoisePoint, capacity
from .special import gaussian_tail, inverse_gaussian_tail


def amplitude_ratio(ebn0_db):
    """sqrt(P)/sigma for a given Eb/N0 in dB."""
    return math.sqrt(2.0 * 10.0 ** (float(ebn0_db) / 10.0))


def ber_from_threshold(kappa, ebn0_db, two_sided=False):
    """Probability that the noise exceeds kappa*sqrt(P).

    ``two_sided`` uses Pr(|n| > kappa sqrt(P)) instead of the upper tail;
    it is only meant for sensitivity checks.
    """
    kappa = float(kappa)
    if not kappa >= 0:
        raise DomainError(f"kappa must be non-negative, got {kappa!r}")
    if math.isinf(kappa):
        return 0.0
    p = gaussian_tail(kappa * amplitude_ratio(ebn0_db))
    return 2.0 * p if two_sided else p


def threshold_from_ber(ber, ebn0_db, two_sided=False):
    ber = float(ber)
    upper = 1.0 if two_sided else 0.5
    if not 0.0 < ber < upper:
        raise DomainError(f"ber must lie in (0, {upper}), got {ber!r}")
    tail = ber / 2.0 if two_sided else ber
    return inverse_gaussian_tail(tail) / amplitude_ratio(ebn0_db)


@dataclass(frozen=True)
class OutagePoint:
    beta: float
    ebn0_db: float
    kappa: float
    ber: float
    rate_bits: Optional[float]
    clamped: Optional[bool]
    error: Optional[str] = None


def outage_curve(beta, ebn0_db, kappa_grid, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                 two_sided=False):
    """One OutagePoint per kappa, in grid order.

    Points whose saddle iteration fails keep their BER but carry
    ``rate_bits=None`` and the error text.
    """
    points = []
    for kappa in kappa_grid:
        point = LoadNoisePoint(beta, kappa).check_supported()
        ber = ber_from_threshold(point.kappa, ebn0_db, two_sided=two_sided)
        try:
            res = capacity(point, tol=tol, max_iter=max_iter)
        except ConvergenceError as exc:
            points.append(OutagePoint(point.beta, float(ebn0_db), point.kappa, ber,
                                      None, None, str(exc)))
            continue
        points.append(OutagePoint(point.beta, float(ebn0_db), point.kappa, ber,
                                  res.bits, res.clamped))
    return points


def rate_at_ber(beta, ebn0_db, target_ber, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Achievable rate (bits) when the per-user outage BER equals target_ber."""
    kappa = threshold_from_ber(target_ber, ebn0_db)
    return capacity(LoadNoisePoint(beta, kappa), tol=tol, max_iter=max_iter).bits
