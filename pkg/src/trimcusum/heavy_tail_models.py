"""Closed-form heavy-tailed distribution families used by the trimmed CUSUM test.

Two Pareto-type families with exact power tails (no slowly varying factor), plus
a unit Gaussian control for the finite-variance regime:

* ``two_sided_pareto(alpha, p)``:  F(t) = q*(1-t)**-alpha for t <= 0 and
  F(t) = 1 - p*(1+t)**-alpha for t > 0, with tail weights p + q = 1.
* ``one_sided_pareto(alpha)``: support (0, inf), F(t) = 1 - (1+t)**-alpha,
  density alpha*(1+t)**-(alpha+1).
* ``gaussian()``: standard normal.

For both Pareto families the two-sided survival function of |X| is
H(t) = (1+t)**-alpha with exact inverse H^-1(u) = u**(-1/alpha) - 1, which keeps
every norming constant and truncated moment analytic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from ._streams import stream_uniforms

__all__ = [
    "TWO_SIDED_PARETO",
    "ONE_SIDED_PARETO",
    "GAUSSIAN",
    "TailModel",
    "UnsupportedModelError",
    "two_sided_pareto",
    "one_sided_pareto",
    "gaussian",
    "cdf",
    "quantile",
    "sample_iid",
    "sample_substream",
    "tail_survival",
    "tail_survival_inv",
    "density",
    "mean_shift",
    "truncated_sum_scale",
    "centering_scale",
]

TWO_SIDED_PARETO = "two_sided_pareto"
ONE_SIDED_PARETO = "one_sided_pareto"
GAUSSIAN = "gaussian"

_FAMILIES = (TWO_SIDED_PARETO, ONE_SIDED_PARETO, GAUSSIAN)
_WEIGHT_TOL = 1e-12


class UnsupportedModelError(ValueError):
    """The requested quantity is not defined for this model family."""


@dataclass(frozen=True)
class TailModel:
    """A sampling law with Pareto-type tails (or the Gaussian control).

    alpha is the tail index in (0, 2); p and q are the right/left tail weights
    with p + q = 1.  The Gaussian family carries no tail parameters.
    """

    family: str
    alpha: float | None = None
    p: float = 0.5
    q: float = 0.5

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == GAUSSIAN:
            if self.alpha is not None:
                raise ValueError("the gaussian family carries no tail index")
            return
        if self.alpha is None or not 0.0 < self.alpha < 2.0:
            raise ValueError("tail index alpha must lie in (0, 2)")
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ValueError("tail weights must lie in [0, 1]")
        if abs(self.p + self.q - 1.0) > _WEIGHT_TOL:
            raise ValueError("tail weights must satisfy p + q = 1")
        if self.family == ONE_SIDED_PARETO and (self.p != 1.0 or self.q != 0.0):
            raise ValueError("the one-sided family requires p = 1 and q = 0")

    @property
    def is_pareto(self) -> bool:
        return self.family != GAUSSIAN


def two_sided_pareto(alpha: float, p: float = 0.5) -> TailModel:
    """Two-sided Pareto-type model with right-tail weight p (left weight 1-p)."""
    return TailModel(TWO_SIDED_PARETO, float(alpha), float(p), 1.0 - float(p))


def one_sided_pareto(alpha: float) -> TailModel:
    """Pareto-type model supported on (0, inf)."""
    return TailModel(ONE_SIDED_PARETO, float(alpha), 1.0, 0.0)


def gaussian() -> TailModel:
    """Standard normal control model (finite variance)."""
    return TailModel(GAUSSIAN)


def _prep(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def cdf(model: TailModel, t):
    """Distribution function F(t); accepts scalars or arrays."""
    arr, scalar = _prep(t)
    if model.family == GAUSSIAN:
        return _ret(ndtr(arr), scalar)
    a = model.alpha
    out = np.empty_like(arr)
    if model.family == TWO_SIDED_PARETO:
        neg = arr <= 0.0
        out[neg] = model.q * (1.0 - arr[neg]) ** (-a)
        out[~neg] = 1.0 - model.p * (1.0 + arr[~neg]) ** (-a)
    else:
        pos = arr > 0.0
        out[pos] = 1.0 - (1.0 + arr[pos]) ** (-a)
        out[~pos] = 0.0
    return _ret(out, scalar)


def _quantile_unchecked(model: TailModel, u: np.ndarray) -> np.ndarray:
    if model.family == GAUSSIAN:
        return ndtri(u)
    a = model.alpha
    out = np.empty_like(u)
    if model.family == TWO_SIDED_PARETO:
        left = u <= model.q
        if np.any(left):
            out[left] = 1.0 - (u[left] / model.q) ** (-1.0 / a)
        right = ~left
        if np.any(right):
            out[right] = ((1.0 - u[right]) / model.p) ** (-1.0 / a) - 1.0
    else:
        out = (1.0 - u) ** (-1.0 / a) - 1.0
    return out


def quantile(model: TailModel, u):
    """Inverse of `cdf`; u must lie strictly inside (0, 1)."""
    arr, scalar = _prep(u)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ValueError("probability u must lie in the open interval (0, 1)")
    return _ret(_quantile_unchecked(model, arr), scalar)


def sample_substream(model: TailModel, n: int, seed: int, stream: int) -> np.ndarray:
    """Inverse-CDF sample of size n from substream `stream` of seed `seed`."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _quantile_unchecked(model, stream_uniforms(seed, stream, n))


def sample_iid(model: TailModel, n: int, seed: int) -> np.ndarray:
    """Length-n i.i.d. sample; a pure function of (model, n, seed)."""
    return sample_substream(model, n, seed, 0)


def tail_survival(model: TailModel, t):
    """P{|X| > t} for t >= 0; equals (1+t)**-alpha for the Pareto families."""
    arr, scalar = _prep(t)
    if np.any(arr < 0.0):
        raise ValueError("t must be nonnegative")
    if model.family == GAUSSIAN:
        out = 2.0 * ndtr(-arr)
    else:
        out = (1.0 + arr) ** (-model.alpha)
    return _ret(out, scalar)


def tail_survival_inv(model: TailModel, u):
    """Upper quantile of |X|: the t >= 0 with P{|X| > t} = u, for u in (0, 1]."""
    arr, scalar = _prep(u)
    if np.any((arr <= 0.0) | (arr > 1.0)):
        raise ValueError("probability u must lie in (0, 1]")
    if model.family == GAUSSIAN:
        out = -ndtri(arr / 2.0)
    else:
        out = arr ** (-1.0 / model.alpha) - 1.0
    return _ret(out, scalar)


def density(model: TailModel, t):
    """Density f(t) = F'(t).

    The two-sided family has a jump at 0 when p != q; the left-branch value is
    returned at t = 0, matching the t <= 0 branch of F.
    """
    arr, scalar = _prep(t)
    if model.family == GAUSSIAN:
        out = np.exp(-0.5 * arr * arr) / math.sqrt(2.0 * math.pi)
        return _ret(out, scalar)
    a = model.alpha
    out = np.empty_like(arr)
    if model.family == TWO_SIDED_PARETO:
        neg = arr <= 0.0
        out[neg] = model.q * a * (1.0 - arr[neg]) ** (-a - 1.0)
        out[~neg] = model.p * a * (1.0 + arr[~neg]) ** (-a - 1.0)
    else:
        pos = arr > 0.0
        out[pos] = a * (1.0 + arr[pos]) ** (-a - 1.0)
        out[~pos] = 0.0
    return _ret(out, scalar)


def _truncated_first_moment(model: TailModel, t: np.ndarray) -> np.ndarray:
    """E[X * 1{|X| <= t}] for t >= 0, in closed form."""
    if model.family == GAUSSIAN:
        return np.zeros_like(t)
    a = model.alpha
    # One-sided building block: integral of x*a*(1+x)**-(a+1) over (0, t].
    if a == 1.0:
        g = np.log1p(t) + 1.0 / (1.0 + t) - 1.0
    else:
        g = (a / (1.0 - a)) * ((1.0 + t) ** (1.0 - a) - 1.0) + ((1.0 + t) ** (-a) - 1.0)
    if model.family == TWO_SIDED_PARETO:
        # The left tail mirrors the right with weight q, so it contributes -q*g.
        return (model.p - model.q) * g
    return g


def _check_depth(d: int, n: int) -> None:
    if not 1 <= d < n:
        raise ValueError(f"trim depth d={d} must satisfy 1 <= d < n={n}")


def mean_shift(model: TailModel, t, d: int, n: int):
    """Expected mean shift between truncation at t and at the t of rank d/n.

    Returns E[X*1{|X| <= t}] - E[X*1{|X| <= c}] where c is the deterministic
    threshold with P{|X| > c} = d/n.  Vanishes at t = c; for asymmetric laws it
    is the random centering that separates trimmed from truncated partial sums.
    """
    _check_depth(d, n)
    arr, scalar = _prep(t)
    if np.any(arr < 0.0):
        raise ValueError("t must be nonnegative")
    ref = tail_survival_inv(model, d / n)
    out = _truncated_first_moment(model, arr) - _truncated_first_moment(
        model, np.asarray(ref, dtype=float)
    )
    return _ret(out, scalar)


def truncated_sum_scale(model: TailModel, d: int, n: int) -> float:
    """Deterministic scale of the truncated partial-sum process.

    sqrt(alpha/(2-alpha)) * H^-1(d/n) * sqrt(d), the norming under which the
    trimmed CUSUM converges to a Brownian bridge.  Defined for Pareto-type
    tails only; the Gaussian family has no stable-domain scale.
    """
    if not model.is_pareto:
        raise UnsupportedModelError("truncated_sum_scale requires Pareto-type tails")
    _check_depth(d, n)
    hinv = tail_survival_inv(model, d / n)
    return math.sqrt(model.alpha / (2.0 - model.alpha) * hinv * hinv * d)


def centering_scale(model: TailModel, d: int, n: int) -> float:
    """Scale of the random centering term for the one-sided family.

    alpha * d**1.5 / (n * |H'(H^-1(d/n))|).  H is the survival function of |X|,
    so H' = -f; the absolute value keeps the scale positive.
    """
    if model.family != ONE_SIDED_PARETO:
        raise UnsupportedModelError("centering_scale is defined for the one-sided family")
    _check_depth(d, n)
    hinv = tail_survival_inv(model, d / n)
    return model.alpha * d ** 1.5 / (n * density(model, hinv))
