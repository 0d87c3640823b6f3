"""Nadaraya-Watson regression of ``X_t`` on ``X_{t-1}`` and the drift smoother."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _fast
from .errors import BandwidthWarning, ConfigError, NoSupportError
from .kernels import Kernel, admissible_window, check_bandwidth
from .series import Series


@dataclass(frozen=True)
class NwFit:
    """Fitted conditional means ``ghat(X_{t-1})`` and residuals, t = 1..T."""

    fitted: np.ndarray
    residuals: np.ndarray
    h: float


def nw_weights(x: float, series: Series, kernel: Kernel, h: float) -> np.ndarray:
    """Weights ``W_T(x, X_{s-1})`` for s = 1..T."""
    h = check_bandwidth(h)
    k = kernel((series.lags - x) / h)
    total = k.sum()
    if total == 0:
        raise NoSupportError(f"no lagged observation within {kernel.support * h:g} of x={x:g}")
    return k / total


def _design(series: Series, kernel: Kernel, h: float):
    order, ls = _fast.sort_design(np.ascontiguousarray(series.lags))
    lo, hi = _fast.window_bounds(ls, kernel.support * h)
    return order, ls, lo, hi


def nw_fit(series: Series, kernel: Kernel, h: float) -> NwFit:
    """Evaluate the NW estimate at every sample lag, own observation included.

    Residuals are accumulated as weighted means of ``X_t - X_s`` so that
    shifting the series leaves them unchanged.
    """
    h = check_bandwidth(h)
    order, ls, lo, hi = _design(series, kernel, h)
    resp = np.ascontiguousarray(series.responses)
    res = _fast.residuals_sorted(ls, order, resp, h, kernel.code, lo, hi)
    return NwFit(fitted=resp - res, residuals=res, h=h)


def delta_hat(x, series: Series, kernel: Kernel, h_cv: float):
    """Kernel smoother of the increments ``X_t - X_{t-1}`` against ``X_{t-1}``.

    Accepts a scalar or an array of evaluation points.
    """
    h_cv = check_bandwidth(h_cv)
    pts = np.atleast_1d(np.asarray(x, dtype=np.float64))
    order, ls = _fast.sort_design(np.ascontiguousarray(series.lags))
    num, den = _fast.smooth_points(
        pts, ls, order, np.ascontiguousarray(series.increments), h_cv, kernel.code,
        kernel.support * h_cv,
    )
    if np.any(den == 0):
        bad = pts[den == 0][0]
        raise NoSupportError(f"no lagged observation within {kernel.support * h_cv:g} of x={bad:g}")
    out = num / den
    return float(out[0]) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class CvResult:
    h: float
    grid: np.ndarray
    scores: np.ndarray  # NaN for excluded bandwidths
    skipped: np.ndarray

    def __float__(self):
        return self.h


def default_cv_grid(T: int, n: int = 25) -> np.ndarray:
    win = admissible_window(T, 0.1)
    return np.geomspace(win.lo / 2, 2 * win.hi, n)


def cv_scores(series: Series, kernel: Kernel, grid) -> tuple[np.ndarray, np.ndarray]:
    """Leave-one-out squared prediction error of the drift smoother per bandwidth."""
    grid = np.asarray(grid, dtype=np.float64)
    y = np.ascontiguousarray(series.increments)
    order, ls = _fast.sort_design(np.ascontiguousarray(series.lags))
    scores = np.full(grid.size, np.nan)
    skipped = np.zeros(grid.size, dtype=np.int64)
    for i, h in enumerate(grid):
        lo, hi = _fast.window_bounds(ls, kernel.support * h)
        num, den = _fast.smooth_sorted(ls, order, y, h, kernel.code, lo, hi, True)
        ok = den > 0
        skipped[i] = series.T - int(ok.sum())
        if ok.any():
            err = y[ok] - num[ok] / den[ok]
            scores[i] = float(np.dot(err, err))
    return scores, skipped


def cv_bandwidth(series: Series, kernel: Kernel, grid=None) -> CvResult:
    """Pick the grid bandwidth minimizing the leave-one-out score.

    Observations whose leave-one-out window is empty are skipped; a bandwidth
    skipping every observation is excluded. Ties go to the smallest h.
    """
    if grid is None:
        grid = default_cv_grid(series.T)
    grid = np.sort(np.asarray(grid, dtype=np.float64).ravel())
    if grid.size == 0:
        raise ConfigError("cross-validation grid is empty")
    if np.any(~np.isfinite(grid)) or np.any(grid <= 0):
        raise ConfigError("cross-validation grid must hold positive finite bandwidths")
    scores, skipped = cv_scores(series, kernel, grid)
    usable = skipped < series.T
    if not usable.any():
        raise NoSupportError("every bandwidth in the grid leaves all observations unsupported")
    best = int(np.flatnonzero(usable)[np.argmin(scores[usable])])
    if skipped[best] > 0.1 * series.T:
        warnings.warn(
            f"cross-validation skipped {skipped[best]} of {series.T} observations at h={grid[best]:.4g}",
            BandwidthWarning,
            stacklevel=2,
        )
    return CvResult(float(grid[best]), grid, scores, skipped)
