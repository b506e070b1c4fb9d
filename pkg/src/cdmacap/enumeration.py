"""Exact finite-size codeword counting.

A codeword x in {-1, +1}^K survives sign slicing under bounded noise when

    x_k * sum_{i != k} c_ki x_i  >  N (kappa - 1)   for every user k,

with integer correlation numerators c_ki = sum_mu s_k^mu s_i^mu.  All
comparisons are done on integers: kappa is converted to an exact rational
(floats through their shortest decimal repr) and the strict inequality
becomes x_k f_k >= floor(N (kappa - 1)) + 1.
"""

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import _kernels
from .errors import DegenerateStatisticsError, DomainError, EnumerationSizeError

MAX_USERS = 32
WARN_USERS = 26

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z):
    """SplitMix64 finalizer (Steele, Lea & Flood 2014) on a 64-bit integer."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed, trial):
    """Seed of trial t: the (t+1)-th output of SplitMix64 started at master_seed.

    Depends only on (master_seed, trial), so trials can run in any order.
    """
    state = (int(master_seed) + int(trial) * _GOLDEN) & _MASK64
    return splitmix64(state)


def exact_rational(value):
    """Exact rational value of a decimal parameter (kappa, beta)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # repr gives the shortest decimal that round-trips, e.g. 0.9 -> 9/10
    return Fraction(repr(float(value)))


def min_field(kappa, chips):
    """Smallest integer x_k f_k that satisfies x_k f_k > N (kappa - 1)."""
    threshold = chips * (exact_rational(kappa) - 1)
    return math.floor(threshold) + 1


def chips_for_load(users, beta):
    """N = round(K / beta), ties rounded up."""
    ratio = Fraction(users) / exact_rational(beta)
    return math.floor(ratio + Fraction(1, 2))


@dataclass(frozen=True)
class SpreadingMatrix:
    entries: np.ndarray  # (K, N) int8 of +-1
    seed: Optional[int] = None

    @property
    def users(self):
        return self.entries.shape[0]

    @property
    def chips(self):
        return self.entries.shape[1]


@dataclass(frozen=True)
class IntegerCorrelations:
    c: np.ndarray  # (K, K) int64, c[k, k] = N
    chips: int

    @property
    def users(self):
        return self.c.shape[0]

    @property
    def rho(self):
        return self.c / self.chips


@dataclass
class CodewordState:
    bits: np.ndarray
    fields: np.ndarray

    @classmethod
    def from_bits(cls, bits, corr):
        bits = np.asarray(bits, dtype=np.int64)
        off = corr.c - np.diag(np.diag(corr.c))
        return cls(bits=bits, fields=off @ bits)

    def flip(self, j, corr):
        self.bits[j] = -self.bits[j]
        step = 2 * self.bits[j] * corr.c[:, j]
        step[j] = 0
        self.fields += step


@dataclass(frozen=True)
class EnumerationResult:
    count: int
    users: int
    chips: int
    kappa: float
    elapsed: float


def sample_spreading(users, chips, seed):
    """K x N matrix of independent equiprobable +-1 chips.

    Chips come from numpy's PCG64 seeded with ``seed``; each drawn bit b
    maps to 2b - 1.
    """
    if users < 1 or chips < 1:
        raise DomainError(f"need users >= 1 and chips >= 1, got K={users}, N={chips}")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    b = rng.integers(0, 2, size=(users, chips), dtype=np.int8)
    return SpreadingMatrix(entries=2 * b - 1, seed=int(seed))


def correlations(s):
    e = s.entries.astype(np.int64)
    return IntegerCorrelations(c=e @ e.T, chips=s.chips)


def is_valid(state, corr, kappa):
    m = min_field(kappa, corr.chips)
    return bool(np.all(state.bits * state.fields >= m))


def _split(total, parts):
    parts = max(1, min(parts, total))
    bounds = [total * p // parts for p in range(parts + 1)]
    return list(zip(bounds[:-1], bounds[1:]))


def count_codewords(corr, kappa, workers=1, chunks=None):
    """Exact number of valid codewords among all 2^K sign patterns.

    The Gray-code index range is cut into ``chunks`` sub-ranges (default:
    one per worker); each starts from a freshly initialised field vector,
    and the per-range counts are summed.
    """
    K = corr.users
    if K > MAX_USERS:
        raise EnumerationSizeError(f"K={K} exceeds the enumeration cap of {MAX_USERS} users")
    if K > WARN_USERS:
        warnings.warn(
            f"enumerating 2^{K} codewords; expect a long runtime", RuntimeWarning, stacklevel=2
        )
    m = min_field(kappa, corr.chips)
    c = np.ascontiguousarray(corr.c, dtype=np.int64)
    ranges = _split(1 << K, chunks or workers)
    t0 = time.perf_counter()
    if workers <= 1 or len(ranges) == 1:
        counts = [_kernels.gray_walk(c, m, a, b)[0] for a, b in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda r: _kernels.gray_walk(c, m, r[0], r[1])[0], ranges))
    return EnumerationResult(
        count=int(sum(counts)),
        users=K,
        chips=corr.chips,
        kappa=float(kappa),
        elapsed=time.perf_counter() - t0,
    )


def brute_force_count(corr, kappa):
    """Reference count: recompute every field from scratch for every codeword.

    Vectorised over all 2^K patterns, so only suitable for small K.
    """
    K, N = corr.users, corr.chips
    if K > 20:
        raise EnumerationSizeError("brute-force reference limited to K <= 20")
    q = exact_rational(kappa)
    idx = np.arange(1 << K, dtype=np.int64)
    x = ((idx[:, None] >> np.arange(K)) & 1) * 2 - 1
    off = corr.c - np.diag(np.diag(corr.c))
    local = x * (x @ off)
    # x_k f_k > N (p/q - 1)  <=>  q x_k f_k > N (p - q), with q > 0
    ok = local * q.denominator > N * (q.numerator - q.denominator)
    return int(np.count_nonzero(ok.all(axis=1)))


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    count: int

    def bits(self, users):
        return math.log2(self.count) / users if self.count > 0 else None


@dataclass(frozen=True)
class EnsembleStats:
    users: int
    chips: int
    beta: float
    kappa: float
    trials: int
    mean_bits: float
    std_bits: float
    zero_trials: int
    per_trial: List[TrialRecord] = field(default_factory=list)

    @property
    def realized_beta(self):
        return self.users / self.chips


def empirical_capacity(users, beta, kappa, trials, master_seed=0, workers=1):
    """Ensemble of exhaustive counts over independent spreading codes.

    Trial t uses seed ``trial_seed(master_seed, t)``.  ``bits_t =
    log2(M_t) / K``; mean and (population) standard deviation run over
    trials with M_t > 0, and the rest are tallied in ``zero_trials``.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    chips = chips_for_load(users, beta)
    if chips < 1:
        raise DomainError(f"N = round(K/beta) = {chips} for K={users}, beta={beta}")

    def run_trial(t):
        seed = trial_seed(master_seed, t)
        corr = correlations(sample_spreading(users, chips, seed))
        return TrialRecord(trial=t, seed=seed, count=count_codewords(corr, kappa).count)

    if workers <= 1:
        records = [run_trial(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, range(trials)))

    bits = np.array([r.bits(users) for r in records if r.count > 0], dtype=float)
    zero = trials - bits.size
    if bits.size == 0:
        raise DegenerateStatisticsError(
            f"all {trials} trials produced zero valid codewords "
            f"(K={users}, N={chips}, kappa={kappa})",
            zero_trials=zero,
        )
    return EnsembleStats(
        users=users,
        chips=chips,
        beta=float(beta),
        kappa=float(kappa),
        trials=trials,
        mean_bits=float(np.mean(bits)),
        std_bits=float(np.std(bits)),
        zero_trials=zero,
        per_trial=records,
    )
