"""Capacity of the noisy CDMA downlink with sign-slicer receivers."""

from .enumeration import (
    CodewordState,
    EnsembleStats,
    EnumerationResult,
    IntegerCorrelations,
    SpreadingMatrix,
    brute_force_count,
    correlations,
    count_codewords,
    empirical_capacity,
    is_valid,
    sample_spreading,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateStatisticsError,
    DomainError,
    EnumerationSizeError,
    ParameterRangeError,
)
from .outage import (
    OutagePoint,
    ber_from_threshold,
    outage_curve,
    rate_at_ber,
    threshold_from_ber,
)
from .saddle import (
    CapacityResult,
    LoadNoisePoint,
    SaddleSolution,
    capacity,
    capacity_sweep,
    free_energy,
    solve_saddle,
    zero_capacity_threshold,
)
from .special import gaussian_tail, hazard, inverse_gaussian_tail, log_two_tail

__version__ = "0.1.0"
