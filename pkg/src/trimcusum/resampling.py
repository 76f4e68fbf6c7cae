"""Bootstrap and permutation resampling of the trimmed, centered observations.

Critical values for small and moderate samples: draw m values from the trimmed
and centered sample (with replacement = bootstrap, without = permutation),
build the CUSUM path of each resample, normalize by sigma_hat * sqrt(m), and
take an empirical quantile over B replicates.  Replicate b draws from
substream b of the plan's seed, so replicates are independent and the whole
procedure is reproducible regardless of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._streams import stream_generator
from .trimmed_cusum import CusumPath, DegenerateSampleError, cusum_path, trim

__all__ = [
    "WITH_REPLACEMENT",
    "WITHOUT_REPLACEMENT",
    "ResamplePlan",
    "CriticalValueEstimate",
    "trimmed_centered",
    "resampled_path",
    "resampled_critical_value",
    "empirical_quantile",
]

WITH_REPLACEMENT = "with_replacement"
WITHOUT_REPLACEMENT = "without_replacement"


@dataclass(frozen=True)
class ResamplePlan:
    """Resample size m, draw mode, replicate count B, level and seed."""

    m: int
    mode: str = WITHOUT_REPLACEMENT
    replications: int = 2000
    level: float = 0.95
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("resample size m must be at least 1")
        if self.mode not in (WITH_REPLACEMENT, WITHOUT_REPLACEMENT):
            raise ValueError(f"unknown resampling mode {self.mode!r}")
        if self.replications < 1:
            raise ValueError("replication count B must be at least 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class CriticalValueEstimate:
    """Empirical critical value with a binomial-order-statistic standard error."""

    value: float
    level: float
    replications: int
    standard_error: float


def empirical_quantile(values, level: float) -> float:
    """Ceiling order statistic: the ceil(B * level)-th smallest value.

    Conservative quantile convention shared by the resampling and Monte Carlo
    estimators.  The 1e-9 guard keeps B * level from crossing an integer
    boundary through float rounding alone.
    """
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("cannot take a quantile of an empty collection")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    rank = math.ceil(v.size * level - 1e-9)
    return float(v[max(rank, 1) - 1])


def trimmed_centered(sample, d: int) -> np.ndarray:
    """x_j = X_j * 1{|X_j| <= threshold} - trimmed_mean; sums to zero."""
    ts = trim(sample, d)
    return ts.trimmed_values - ts.trimmed_mean


def _draw(x: np.ndarray, plan: ResamplePlan, replicate_index: int) -> np.ndarray:
    n = x.size
    rng = stream_generator(plan.seed, replicate_index)
    if plan.mode == WITH_REPLACEMENT:
        return x[rng.integers(0, n, size=plan.m)]
    if plan.m > n:
        raise ValueError(f"without-replacement draws need m <= n, got m={plan.m} > n={n}")
    return x[rng.permutation(n)[: plan.m]]


def resampled_path(x, plan: ResamplePlan, replicate_index: int) -> CusumPath:
    """CUSUM path of one resample; deterministic in (x, plan, replicate_index)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("x must be a nonempty vector")
    if not 0 <= replicate_index < plan.replications:
        raise ValueError(
            f"replicate_index {replicate_index} outside [0, {plan.replications})"
        )
    return cusum_path(_draw(arr, plan, replicate_index))


def resampled_critical_value(sample, d: int, plan: ResamplePlan) -> CriticalValueEstimate:
    """Empirical level-quantile of sup |T_mn| / (sigma_hat * sqrt(m)) over B resamples."""
    ts = trim(sample, d)
    if ts.sigma_hat == 0.0:
        raise DegenerateSampleError("all retained observations are identical")
    x = ts.trimmed_values - ts.trimmed_mean
    if plan.mode == WITHOUT_REPLACEMENT and plan.m > ts.n:
        raise ValueError(f"without-replacement draws need m <= n, got m={plan.m} > n={ts.n}")
    scale = ts.sigma_hat * math.sqrt(plan.m)
    b_total = plan.replications
    stats = np.empty(b_total)
    for b in range(b_total):
        stats[b] = cusum_path(_draw(x, plan, b)).sup_abs / scale
    stats.sort()
    rank = max(math.ceil(b_total * plan.level - 1e-9), 1)
    value = float(stats[rank - 1])
    # Distribution-free dispersion of the quantile: half the spread between the
    # order statistics one binomial standard deviation to either side.
    spread = math.sqrt(b_total * plan.level * (1.0 - plan.level))
    lo = min(max(int(math.floor(rank - spread)), 1), b_total)
    hi = min(max(int(math.ceil(rank + spread)), 1), b_total)
    standard_error = float(stats[hi - 1] - stats[lo - 1]) / 2.0
    return CriticalValueEstimate(value, plan.level, b_total, standard_error)
