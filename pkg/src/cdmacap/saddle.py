"""Asymptotic capacity of the sign-slicer CDMA downlink.

The capacity exponent in nats per symbol per user is

    g(a, b) = (1/beta) * (b - 1/2 + (1 - b)^2 / (2a) + ln(a) / 2) + ln(2 Q(t)),
    t       = (b + kappa - 1) / sqrt(a * beta),

evaluated at the saddle point b* = 0 and the fixed point

    a* = 1 + sqrt(a* beta) * hazard((kappa - 1) / sqrt(a* beta)).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BracketError, ConvergenceError, DomainError, ParameterRangeError
from .special import LN2, hazard, log_two_tail

BETA_RANGE = (0.001, 100.0)
KAPPA_RANGE = (0.0, 2.0)
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10000


@dataclass(frozen=True)
class LoadNoisePoint:
    """Channel operating point: load beta = K/N and noise threshold kappa."""

    beta: float
    kappa: float

    def __post_init__(self):
        beta, kappa = float(self.beta), float(self.kappa)
        if not (math.isfinite(beta) and beta > 0):
            raise DomainError(f"beta must be positive and finite, got {self.beta!r}")
        if not (math.isfinite(kappa) and kappa >= 0):
            raise DomainError(f"kappa must be non-negative and finite, got {self.kappa!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "kappa", kappa)

    @property
    def alpha(self):
        return 1.0 / self.beta

    def check_supported(self):
        lo, hi = BETA_RANGE
        if not lo <= self.beta <= hi:
            raise ParameterRangeError(f"beta={self.beta} outside supported range [{lo}, {hi}]")
        lo, hi = KAPPA_RANGE
        if not lo <= self.kappa <= hi:
            raise ParameterRangeError(f"kappa={self.kappa} outside supported range [{lo}, {hi}]")
        return self


def as_point(point):
    if isinstance(point, LoadNoisePoint):
        return point
    beta, kappa = point
    return LoadNoisePoint(beta, kappa)


@dataclass(frozen=True)
class SaddleSolution:
    a_star: float
    t_star: float
    iterations: int
    residual: float

    @property
    def b_star(self):
        return 0.0


@dataclass(frozen=True)
class CapacityResult:
    point: LoadNoisePoint
    nats: float
    bits: float
    clamped: bool
    saddle: SaddleSolution


def free_energy(a, b, point):
    """Capacity exponent g(a, b, beta, kappa) in nats."""
    point = as_point(point)
    a, b = float(a), float(b)
    if not (a > 0 and math.isfinite(a)):
        raise DomainError(f"a must be positive and finite, got {a!r}")
    beta = point.beta
    t = (b + point.kappa - 1.0) / math.sqrt(a * beta)
    bulk = b - 0.5 + (1.0 - b) ** 2 / (2.0 * a) + 0.5 * math.log(a)
    return bulk / beta + log_two_tail(t)


def _fixed_point_map(a, beta, kappa):
    s = math.sqrt(a * beta)
    t = (kappa - 1.0) / s
    return 1.0 + s * hazard(t), t


def solve_saddle(point, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Iterate the a* fixed point to |a - F(a)| <= tol.

    Plain iteration is tried first; if the residual ever grows the update
    is damped, a <- a + theta * (F(a) - a), with theta halved each time.
    """
    point = as_point(point).check_supported()
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter!r}")
    beta, kappa = point.beta, point.kappa

    a, _ = _fixed_point_map(1.0, beta, kappa)
    theta = 1.0
    prev = math.inf
    residual = math.inf
    for it in range(1, max_iter + 1):
        fa, t = _fixed_point_map(a, beta, kappa)
        residual = abs(fa - a)
        if residual <= tol:
            return SaddleSolution(a_star=a, t_star=t, iterations=it, residual=residual)
        if residual > prev:
            theta *= 0.5
        prev = residual
        a += theta * (fa - a)
    raise ConvergenceError(
        f"saddle iteration for beta={beta}, kappa={kappa} did not reach tol={tol} "
        f"in {max_iter} iterations (residual {residual:.3e})",
        last_iterate=a,
        residual=residual,
        iterations=max_iter,
    )


def capacity(point, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    point = as_point(point)
    sol = solve_saddle(point, tol=tol, max_iter=max_iter)
    nats = free_energy(sol.a_star, 0.0, point)
    clamped = nats < 0
    bits = 0.0 if clamped else nats / LN2
    return CapacityResult(point=point, nats=nats, bits=bits, clamped=clamped, saddle=sol)


def zero_capacity_threshold(beta, tol=1e-6, lo=1.0, hi=2.0):
    """Noise threshold kappa0 at which the capacity exponent crosses zero.

    Bisection on kappa over [lo, hi].  For loads above roughly 20 the
    crossing lies beyond kappa = 2 and a BracketError is raised.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")

    def nats(kappa):
        return capacity(LoadNoisePoint(beta, kappa)).nats

    f_lo, f_hi = nats(lo), nats(hi)
    if not (f_lo > 0 > f_hi):
        raise BracketError(
            f"no sign change of the capacity exponent on kappa in [{lo}, {hi}] "
            f"for beta={beta}: g({lo})={f_lo:.6g}, g({hi})={f_hi:.6g}",
            lo, hi, f_lo, f_hi,
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if nats(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SweepRow:
    beta: float
    kappa: float
    result: Optional[CapacityResult]
    error: Optional[str] = None

    @property
    def ok(self):
        return self.result is not None


def _sweep_point(args):
    beta, kappa, tol, max_iter = args
    try:
        return SweepRow(beta, kappa, capacity(LoadNoisePoint(beta, kappa), tol, max_iter))
    except ConvergenceError as exc:
        return SweepRow(beta, kappa, None, str(exc))


def capacity_sweep(
    beta_grid: Sequence[float],
    kappa_grid: Sequence[float],
    *,
    kappa_major: bool = False,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: int = 1,
) -> list:
    """Capacity over the product of two grids.

    Rows are ordered beta-major (kappa varies fastest) unless
    ``kappa_major`` is set.  Non-converged points come back as rows with
    ``result=None`` and an error message instead of aborting the sweep.
    """
    if len(beta_grid) == 0 or len(kappa_grid) == 0:
        raise DomainError("sweep grids must be non-empty")
    if kappa_major:
        pairs = [(b, k) for k in kappa_grid for b in beta_grid]
    else:
        pairs = [(b, k) for b in beta_grid for k in kappa_grid]
    for b, k in pairs:
        LoadNoisePoint(b, k).check_supported()
    jobs = [(float(b), float(k), tol, max_iter) for b, k in pairs]
    if workers <= 1:
        return [_sweep_point(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, jobs))
