"""Modulus trimming and the self-normalized trimmed CUSUM statistic.

The trim threshold is the d-th largest of |X_1|, ..., |X_n|; observations whose
modulus exceeds it are zeroed (the threshold itself is kept, so exactly d-1
values drop when all moduli are distinct).  The test statistic is the sup of
the tied-down partial-sum path of the trimmed values divided by the trimmed
standard-deviation estimate times sqrt(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "DegenerateSampleError",
    "TrimmedSample",
    "CusumPath",
    "ChangeLocation",
    "TestReport",
    "as_sample",
    "default_trim_depth",
    "trim_threshold",
    "trim",
    "cusum_path",
    "test_statistic",
    "truncated_cusum_path",
    "trim_trunc_gap",
    "locate_change",
    "centered_gap_process",
]


class DegenerateSampleError(ValueError):
    """All retained observations are identical, so the variance estimate is zero."""


def as_sample(values) -> np.ndarray:
    """Validate and copy observations: 1-D, finite, at least two entries."""
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != 1:
        raise ValueError("a sample must be one-dimensional")
    if arr.size < 2:
        raise ValueError("a sample needs at least two observations")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample entries must be finite")
    return arr


@dataclass(frozen=True)
class TrimmedSample:
    """A sample together with its trim depth, threshold and trimmed estimates.

    kept[j] is True iff |source[j]| <= threshold; trimmed_mean and
    centered_sum_sq are computed over all n slots with trimmed-out entries
    contributing zero, and sigma_hat = sqrt(centered_sum_sq / n).
    """

    source: np.ndarray
    d: int
    threshold: float
    kept: np.ndarray
    trimmed_mean: float
    centered_sum_sq: float
    sigma_hat: float

    @property
    def n(self) -> int:
        return self.source.size

    @property
    def trimmed_values(self) -> np.ndarray:
        """X_j * 1{|X_j| <= threshold}, length n."""
        return np.where(self.kept, self.source, 0.0)


@dataclass(frozen=True)
class CusumPath:
    """Tied-down partial-sum path points[k] = S_k - (k/n) S_n, k = 0..n."""

    points: np.ndarray
    sup_abs: float
    argmax_k: int

    @property
    def n(self) -> int:
        return self.points.size - 1


class ChangeLocation(NamedTuple):
    k: int
    degenerate: bool


@dataclass(frozen=True)
class TestReport:
    """Outcome of one change-point test run."""

    statistic: float
    critical_value: float
    level: float
    reject: bool
    change_at: int
    method: str  # "asymptotic" or "resampled"

    def __post_init__(self) -> None:
        if self.method not in ("asymptotic", "resampled"):
            raise ValueError("method must be 'asymptotic' or 'resampled'")
        if self.reject != (self.statistic > self.critical_value):
            raise ValueError("reject flag inconsistent with statistic and critical value")


def default_trim_depth(n: int) -> int:
    """floor(n**0.3), clamped to at least 2.

    The epsilon shields cases where n**0.3 is mathematically an integer from
    being floored one step too low by float rounding.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    return max(2, int(math.floor(n ** 0.3 + 1e-9)))


def trim_threshold(sample, d: int) -> float:
    """The d-th largest of |values|; duplicates occupy consecutive ranks."""
    v = as_sample(sample)
    n = v.size
    if not 1 <= d <= n:
        raise ValueError(f"trim depth d={d} must satisfy 1 <= d <= n={n}")
    a = np.abs(v)
    return float(np.partition(a, n - d)[n - d])


def trim(sample, d: int) -> TrimmedSample:
    """Trim at the d-th largest modulus and compute the trimmed estimates.

    Ties at the threshold are all kept (the indicator is inclusive), so with
    distinct moduli exactly d-1 observations are zeroed out.  sigma_hat may be
    zero here; downstream consumers flag that case.
    """
    v = as_sample(sample)
    n = v.size
    if not 1 <= d < n:
        raise ValueError(f"trim depth d={d} must satisfy 1 <= d < n={n}")
    threshold = float(np.partition(np.abs(v), n - d)[n - d])
    kept = np.abs(v) <= threshold
    y = np.where(kept, v, 0.0)
    trimmed_mean = float(y.sum() / n)
    centered_sum_sq = float(((y - trimmed_mean) ** 2).sum())
    sigma_hat = math.sqrt(centered_sum_sq / n)
    return TrimmedSample(v, d, threshold, kept, trimmed_mean, centered_sum_sq, sigma_hat)


def cusum_path(terms) -> CusumPath:
    """Tied-down partial sums of the given terms.

    points[0] and points[n] are exactly zero: S_n is computed once and k/n is
    exactly 1 at k = n, so the subtraction cancels bit-for-bit.  A length-one
    input yields the two-point zero path.
    """
    y = np.asarray(terms, dtype=float)
    if y.ndim != 1 or y.size < 1:
        raise ValueError("terms must be a nonempty one-dimensional vector")
    if not np.all(np.isfinite(y)):
        raise ValueError("terms must be finite")
    n = y.size
    s = np.empty(n + 1)
    s[0] = 0.0
    np.cumsum(y, out=s[1:])
    points = s - (np.arange(n + 1) / n) * s[n]
    abs_points = np.abs(points)
    argmax = int(np.argmax(abs_points))
    return CusumPath(points, float(abs_points[argmax]), argmax)


def test_statistic(sample, d: int) -> float:
    """sup_k |trimmed CUSUM| / (sigma_hat * sqrt(n)).

    The denominator equals sqrt(centered_sum_sq) and is computed that way.
    Scale-invariant: multiplying the sample by any lambda > 0 leaves it
    unchanged.
    """
    ts = trim(sample, d)
    if ts.sigma_hat == 0.0:
        raise DegenerateSampleError("all retained observations are identical")
    path = cusum_path(ts.trimmed_values)
    return path.sup_abs / math.sqrt(ts.centered_sum_sq)


def truncated_cusum_path(sample, threshold: float) -> CusumPath:
    """CUSUM path of X_j * 1{|X_j| <= threshold} for a fixed threshold."""
    v = as_sample(sample)
    if threshold < 0.0:
        raise ValueError("threshold must be nonnegative")
    return cusum_path(np.where(np.abs(v) <= threshold, v, 0.0))


def trim_trunc_gap(sample, d: int, threshold: float) -> float:
    """Componentwise sup distance between the trimmed and truncated CUSUM paths."""
    trimmed = cusum_path(trim(sample, d).trimmed_values)
    truncated = truncated_cusum_path(sample, threshold)
    return float(np.abs(trimmed.points - truncated.points).max())


def locate_change(path: CusumPath) -> ChangeLocation:
    """Smallest interior k maximizing |points[k]|, 1 <= k <= n-1.

    A flat (all-zero) path carries no location information; k = 1 is returned
    with the degenerate flag set.
    """
    interior = np.abs(path.points[1:-1])
    if interior.size == 0 or interior.max() == 0.0:
        return ChangeLocation(1, True)
    return ChangeLocation(int(np.argmax(interior)) + 1, False)


def centered_gap_process(sample, d: int, threshold: float, center: float) -> float:
    """Sup of the randomly centered trimmed-minus-truncated partial sums.

    max over k of |sum_{j<=k} [X_j*(1{|X_j| <= eta} - 1{|X_j| <= threshold})
    - center]| where eta is the realized trim threshold and `center` is the
    mean shift evaluated at eta (see heavy_tail_models.mean_shift).
    """
    v = as_sample(sample)
    n = v.size
    if not 1 <= d < n:
        raise ValueError(f"trim depth d={d} must satisfy 1 <= d < n={n}")
    if threshold < 0.0:
        raise ValueError("threshold must be nonnegative")
    eta = float(np.partition(np.abs(v), n - d)[n - d])
    a = np.abs(v)
    indicator = (a <= eta).astype(float) - (a <= threshold).astype(float)
    terms = v * indicator - center
    return float(np.abs(np.cumsum(terms)).max())
