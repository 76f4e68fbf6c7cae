"""Seeded Monte Carlo harness: critical-value tables, power curves, diagnostics.

Replicate r of a run always draws from substream r of the master seed, so every
aggregate is a pure function of its spec and is bit-identical however the
replicates are scheduled.  Work is split into jobs of a fixed replicate count
(a function of n only, never of the worker count) and jobs may be evaluated in
parallel processes; per-replicate statistics land in replicate order and are
reduced once at the end.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from .heavy_tail_models import (
    TailModel,
    _quantile_unchecked,
    centering_scale,
    gaussian,
    mean_shift,
    tail_survival_inv,
    truncated_sum_scale,
)
from ._streams import stream_generator
from .limit_dist import sup_bridge_quantile
from .resampling import empirical_quantile
from .trimmed_cusum import DegenerateSampleError, default_trim_depth

__all__ = [
    "SimulationSpec",
    "ChangeSpec",
    "PowerSpec",
    "DiagnosticSummary",
    "GapSummary",
    "DEFAULT_SHIFT_GRID",
    "generate_null",
    "generate_alternative",
    "null_statistics",
    "rejection_rate",
    "critical_value_table",
    "power_curve",
    "size_under_finite_variance",
    "centering_normality_diagnostic",
    "trim_truncation_divergence",
]

# Shift levels used for power curves: -3.0, -2.9, ..., 2.9, 3.0.
DEFAULT_SHIFT_GRID: tuple[float, ...] = tuple(i / 10 for i in range(-30, 31))

_BATCH_ELEMS = 1 << 22  # ~32 MB of doubles per vectorized block


@dataclass(frozen=True)
class SimulationSpec:
    """One Monte Carlo experiment: model, sample size, trim rule, N, level, seed.

    d = None applies the default depth floor(n**0.3) (clamped to >= 2); an
    explicit d is used as given.
    """

    model: TailModel
    n: int
    replications: int
    level: float = 0.95
    master_seed: int = 0
    d: int | None = None

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if self.replications < 1:
            raise ValueError("replication count must be at least 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie in (0, 1)")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        depth = self.trim_depth
        if not 1 <= depth < self.n:
            raise ValueError(f"trim depth {depth} must satisfy 1 <= d < n={self.n}")

    @property
    def trim_depth(self) -> int:
        return default_trim_depth(self.n) if self.d is None else self.d


@dataclass(frozen=True)
class ChangeSpec:
    """Mean-shift alternative: after index n_i (1-based) the level becomes c_i."""

    breaks: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.breaks:
            raise ValueError("at least one change is required")
        prev_idx = 0
        prev_level = 0.0  # the pre-change level is zero
        for idx, level in self.breaks:
            if idx <= prev_idx:
                raise ValueError("change indices must be strictly increasing and >= 1")
            if level == prev_level:
                raise ValueError("consecutive shift levels must differ")
            prev_idx, prev_level = idx, level

    def shift_vector(self, n: int) -> np.ndarray:
        """Additive shifts for a sample of size n; change indices must be interior."""
        if self.breaks[-1][0] >= n:
            raise ValueError("change indices must be interior (last break < n)")
        shifts = np.zeros(n)
        for idx, level in self.breaks:
            shifts[idx:] = level
        return shifts


@dataclass(frozen=True)
class PowerSpec:
    """Power experiment: one change at `change_at`, scanned over `shift_grid`."""

    base: SimulationSpec
    change_at: int
    critical_value: float
    shift_grid: tuple[float, ...] = DEFAULT_SHIFT_GRID

    def __post_init__(self) -> None:
        if not 1 <= self.change_at < self.base.n:
            raise ValueError("change_at must satisfy 1 <= k < n")
        if self.critical_value <= 0.0:
            raise ValueError("critical_value must be positive")
        if not self.shift_grid:
            raise ValueError("shift_grid must be nonempty")


@dataclass(frozen=True)
class DiagnosticSummary:
    """Moments and KS-to-normal distance of the standardized centering term."""

    mean: float
    variance: float | None
    ks_to_normal: float


@dataclass(frozen=True)
class GapSummary:
    """Medians of the centered / uncentered trimmed-minus-truncated sup gaps,
    both normalized by the truncated partial-sum scale."""

    centered_median: float
    uncentered_median: float


def generate_null(spec: SimulationSpec, replicate: int) -> np.ndarray:
    """i.i.d. draw of length n from substream `replicate` of the master seed."""
    if not 0 <= replicate < spec.replications:
        raise ValueError(f"replicate {replicate} outside [0, {spec.replications})")
    return _sample_block(spec.model, spec.n, spec.master_seed, replicate, 1)[0]


def generate_alternative(spec: SimulationSpec, change: ChangeSpec, replicate: int) -> np.ndarray:
    """Same error stream as generate_null with segmentwise shifts added."""
    return generate_null(spec, replicate) + change.shift_vector(spec.n)


def _sample_block(model: TailModel, n: int, seed: int, start: int, count: int) -> np.ndarray:
    """Rows i = 0..count-1 are the substream start+i samples; matches
    sample_substream row for row."""
    u = np.empty((count, n))
    for i in range(count):
        u[i] = stream_generator(seed, start + i).random(n)
    np.maximum(u, 2.0 ** -53, out=u)
    return _quantile_unchecked(model, u)


def _batch_statistics(x: np.ndarray, d: int) -> np.ndarray:
    """Trimmed CUSUM statistic per row; reproduces test_statistic bit for bit."""
    n = x.shape[1]
    absx = np.abs(x)
    eta = np.partition(absx, n - d, axis=1)[:, n - d]
    y = np.where(absx <= eta[:, None], x, 0.0)
    trimmed_mean = y.sum(axis=1) / n
    centered_sum_sq = ((y - trimmed_mean[:, None]) ** 2).sum(axis=1)
    if np.any(centered_sum_sq == 0.0):
        raise DegenerateSampleError("a replicate retained only identical values")
    s = np.cumsum(y, axis=1)
    frac = np.arange(1, n + 1) / n
    sup = np.abs(s - s[:, -1:] * frac).max(axis=1)
    return sup / np.sqrt(centered_sum_sq)


def _job_chunk(n: int) -> int:
    """Replicates per job: fixed by n alone so results never depend on workers."""
    return max(32, min(4096, _BATCH_ELEMS // max(n, 1)))


def _batch_rows(n: int, count: int) -> int:
    return max(1, min(count, _BATCH_ELEMS // max(n, 1)))


def _run_jobs(fn, payloads: list, workers: int) -> list:
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if workers == 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads))


def _replicate_jobs(total: int, n: int) -> list[tuple[int, int]]:
    chunk = _job_chunk(n)
    return [(start, min(chunk, total - start)) for start in range(0, total, chunk)]


def _null_stats_job(args) -> np.ndarray:
    model, n, d, seed, start, count = args
    out = np.empty(count)
    rows = _batch_rows(n, count)
    for off in range(0, count, rows):
        c = min(rows, count - off)
        x = _sample_block(model, n, seed, start + off, c)
        out[off : off + c] = _batch_statistics(x, d)
    return out


def null_statistics(spec: SimulationSpec, workers: int = 1) -> np.ndarray:
    """The N replicated test statistics under the no-change hypothesis."""
    d = spec.trim_depth
    payloads = [
        (spec.model, spec.n, d, spec.master_seed, start, count)
        for start, count in _replicate_jobs(spec.replications, spec.n)
    ]
    return np.concatenate(_run_jobs(_null_stats_job, payloads, workers))


def rejection_rate(spec: SimulationSpec, critical_value: float, workers: int = 1) -> float:
    """Fraction of null replicates whose statistic exceeds the critical value."""
    stats = null_statistics(spec, workers)
    return int(np.count_nonzero(stats > critical_value)) / spec.replications


def critical_value_table(
    spec: SimulationSpec, n_list: Sequence[int], workers: int = 1
) -> list[tuple[float, float]]:
    """Empirical level-quantiles of the null statistic for each n, plus the
    asymptotic value as a final row labeled n = inf."""
    rows: list[tuple[float, float]] = []
    for n in n_list:
        sub = replace(spec, n=int(n))
        stats = null_statistics(sub, workers)
        rows.append((float(n), empirical_quantile(stats, spec.level)))
    rows.append((math.inf, sup_bridge_quantile(spec.level)))
    return rows


def _power_job(args) -> np.ndarray:
    model, n, d, seed, start, count, change_at, grid, crit = args
    counts = np.zeros(len(grid), dtype=np.int64)
    rows = _batch_rows(n, count)
    for off in range(0, count, rows):
        c = min(rows, count - off)
        errors = _sample_block(model, n, seed, start + off, c)
        for gi, shift in enumerate(grid):
            x = errors.copy()
            x[:, change_at:] += shift
            counts[gi] += int(np.count_nonzero(_batch_statistics(x, d) > crit))
    return counts


def power_curve(spec: PowerSpec, workers: int = 1) -> list[tuple[float, float]]:
    """Empirical rejection rate at each shift level of the grid.

    Every shift level reuses the same error streams (one per replicate), so
    curves for different change locations or levels are directly comparable.
    """
    base = spec.base
    d = base.trim_depth
    payloads = [
        (
            base.model,
            base.n,
            d,
            base.master_seed,
            start,
            count,
            spec.change_at,
            spec.shift_grid,
            spec.critical_value,
        )
        for start, count in _replicate_jobs(base.replications, base.n)
    ]
    counts = sum(_run_jobs(_power_job, payloads, workers))
    return [
        (shift, int(c) / base.replications) for shift, c in zip(spec.shift_grid, counts)
    ]


def size_under_finite_variance(
    n: int, replications: int, level: float = 0.95, seed: int = 0, workers: int = 1
) -> float:
    """Null rejection rate of the Gaussian model at the asymptotic critical value."""
    spec = SimulationSpec(gaussian(), n=n, replications=replications, level=level, master_seed=seed)
    return rejection_rate(spec, sup_bridge_quantile(level), workers)


def _ks_to_standard_normal(values: np.ndarray) -> float:
    v = np.sort(values)
    count = v.size
    f = ndtr(v)
    grid = np.arange(1, count + 1) / count
    return float(max((grid - f).max(), (f - (grid - 1.0 / count)).max()))


def _centering_job(args) -> np.ndarray:
    model, n, d, seed, start, count = args
    scale = centering_scale(model, d, n)
    out = np.empty(count)
    rows = _batch_rows(n, count)
    for off in range(0, count, rows):
        c = min(rows, count - off)
        x = _sample_block(model, n, seed, start + off, c)
        absx = np.abs(x)
        eta = np.partition(absx, n - d, axis=1)[:, n - d]
        out[off : off + c] = n * mean_shift(model, eta, d, n) / scale
    return out


def centering_normality_diagnostic(
    model: TailModel, n: int, d: int, reps: int, seed: int = 0, workers: int = 1
) -> DiagnosticSummary:
    """Distribution of the standardized mean shift at the realized trim threshold.

    Each replicate draws a sample, takes its trim threshold, and evaluates
    n * mean_shift(threshold) / centering_scale.  For one-sided regularly
    varying densities this is asymptotically standard normal; the summary
    reports the sample mean, sample variance (absent when reps = 1) and the
    KS distance to N(0, 1).
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    payloads = [
        (model, n, d, seed, start, count) for start, count in _replicate_jobs(reps, n)
    ]
    vals = np.concatenate(_run_jobs(_centering_job, payloads, workers))
    variance = float(np.var(vals, ddof=1)) if reps > 1 else None
    return DiagnosticSummary(float(np.mean(vals)), variance, _ks_to_standard_normal(vals))


def _gap_job(args) -> tuple[np.ndarray, np.ndarray]:
    model, n, d, seed, start, count = args
    threshold = tail_survival_inv(model, d / n)
    scale = truncated_sum_scale(model, d, n)
    centered = np.empty(count)
    uncentered = np.empty(count)
    rows = _batch_rows(n, count)
    for off in range(0, count, rows):
        c = min(rows, count - off)
        x = _sample_block(model, n, seed, start + off, c)
        absx = np.abs(x)
        eta = np.partition(absx, n - d, axis=1)[:, n - d]
        terms = x * ((absx <= eta[:, None]).astype(float) - (absx <= threshold).astype(float))
        center = mean_shift(model, eta, d, n)
        sl = slice(off, off + c)
        uncentered[sl] = np.abs(np.cumsum(terms, axis=1)).max(axis=1) / scale
        centered[sl] = (
            np.abs(np.cumsum(terms - center[:, None], axis=1)).max(axis=1) / scale
        )
    return centered, uncentered


def trim_truncation_divergence(
    model: TailModel, n: int, d: int, reps: int, seed: int = 0, workers: int = 1
) -> GapSummary:
    """Medians of the centered and uncentered sup gaps between trimmed and
    truncated partial sums, normalized by the truncated partial-sum scale.

    The centered gap shrinks with n for any Pareto-type model; the uncentered
    one stays bounded away from zero for asymmetric laws, which is exactly the
    effect of the random centering term.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    payloads = [
        (model, n, d, seed, start, count) for start, count in _replicate_jobs(reps, n)
    ]
    results = _run_jobs(_gap_job, payloads, workers)
    centered = np.concatenate([r[0] for r in results])
    uncentered = np.concatenate([r[1] for r in results])
    return GapSummary(float(np.median(centered)), float(np.median(uncentered)))
