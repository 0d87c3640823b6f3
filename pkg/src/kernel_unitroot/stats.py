"""Kernel test statistics, the N_T diagnostic, and the Dickey-Fuller comparator."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _fast
from .errors import DegenerateRegressorError, DegenerateStatisticError
from .kernels import Kernel, check_bandwidth
from .series import Series


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # keep pytest from collecting this

    m_value: float
    sigma_hat: float
    l_value: float
    h: float
    T: int
    pair_count: int

    def to_dict(self) -> dict:
        return {
            "m": self.m_value,
            "sigma": self.sigma_hat,
            "l": self.l_value,
            "h": self.h,
            "T": self.T,
            "pair_count": self.pair_count,
        }


@dataclass(frozen=True)
class DfOutcome:
    beta_hat: float
    sigma_hat: float
    l0: float

    def to_dict(self) -> dict:
        return asdict(self)


def _prepare(residuals, lags, kernel: Kernel, h: float):
    u = np.ascontiguousarray(residuals, dtype=np.float64)
    x = np.ascontiguousarray(lags, dtype=np.float64)
    if u.shape != x.shape or u.ndim != 1:
        raise ValueError("residuals and lags must be 1-d arrays of equal length")
    if u.size < 2:
        raise ValueError("need at least two observations")
    h = check_bandwidth(h)
    order, ls = _fast.sort_design(x)
    lo, hi = _fast.window_bounds(ls, kernel.support * h)
    return _fast.pair_sums_sorted(ls, order, u, h, kernel.code, lo, hi)


def m_stat(residuals, lags, kernel: Kernel, h: float) -> float:
    """``sum_{s != t} u_s K((X_{s-1} - X_{t-1}) / h) u_t`` over ordered pairs."""
    return _prepare(residuals, lags, kernel, h)[0]


def sigma_hat_sq(residuals, lags, kernel: Kernel, h: float) -> float:
    """``2 sum_{s != t} u_s^2 K^2(.) u_t^2``."""
    return _prepare(residuals, lags, kernel, h)[1]


def l_stat(series: Series, kernel: Kernel, h: float) -> TestOutcome:
    """Fit NW, then normalize the paired-residual statistic by its variance estimate.

    Raises
    ------
    DegenerateStatisticError
        If the variance estimate is zero, which happens when no two lags are
        within kernel reach or all residuals vanish.
    """
    h = check_bandwidth(h)
    hs = np.array([h])
    ms, vs, counts = _fast.l_stats_multi(
        np.ascontiguousarray(series.lags), np.ascontiguousarray(series.responses),
        hs, kernel.code, kernel.support,
    )
    m, v, count = float(ms[0]), float(vs[0]), int(counts[0])
    if not v > 0:
        raise DegenerateStatisticError(
            f"sigma_hat is zero at h={h:g} (pair_count={count})", pair_count=count
        )
    s = math.sqrt(v)
    return TestOutcome(m, s, m / s, h, series.T, count)


def l_values(lags, responses, kernel: Kernel, hs) -> np.ndarray:
    """L-hat for several bandwidths on one design; NaN where degenerate."""
    hs = np.ascontiguousarray(hs, dtype=np.float64)
    ms, vs, _ = _fast.l_stats_multi(
        np.ascontiguousarray(lags, dtype=np.float64),
        np.ascontiguousarray(responses, dtype=np.float64),
        hs, kernel.code, kernel.support,
    )
    out = np.full(hs.size, np.nan)
    ok = vs > 0
    out[ok] = ms[ok] / np.sqrt(vs[ok])
    return out


def n_stat(series: Series, kernel: Kernel, h: float) -> float:
    """Mean squared gap between the NW fit and the smoothed lag at sample points.

    Diagnostic only. The gap equals the kernel smooth of the increments, which
    avoids the triple sum.
    """
    h = check_bandwidth(h)
    order, ls = _fast.sort_design(np.ascontiguousarray(series.lags))
    lo, hi = _fast.window_bounds(ls, kernel.support * h)
    num, den = _fast.smooth_sorted(
        ls, order, np.ascontiguousarray(series.increments), h, kernel.code, lo, hi, False
    )
    gap = num / den
    return float(math.fsum(gap * gap) / series.T)


def theoretical_variance(T: int, h: float, sigma_u: float, kernel: Kernel) -> float:
    """Leading-order null variance ``C10 T^{3/2} h``, ``C10 = 16 sigma_u^4 J02 / (3 sqrt(2 pi))``.

    The constant is stated for unit innovation variance; Monte Carlo shows the
    variance of the raw double sum scales like ``sigma_u^3`` when h is held
    fixed, so compare at ``sigma_u = 1``.
    """
    c10 = 16.0 * sigma_u**4 * kernel.l2_norm / (3.0 * math.sqrt(2.0 * math.pi))
    return c10 * T**1.5 * h


def dickey_fuller(series: Series) -> DfOutcome:
    """No-constant Dickey-Fuller t-type statistic.

    The slope sums run over t = 2..T; the residual variance averages over
    t = 1..T, so the X_0 term enters only there.
    """
    x = series.values
    d = np.diff(x)
    lag = x[:-1]
    num = float(np.dot(d[1:], lag[1:]))
    den = float(np.dot(lag[1:], lag[1:]))
    if den == 0:
        raise DegenerateRegressorError("sum of squared regressors X_1..X_{T-1} is zero")
    beta = num / den
    e = d - beta * lag
    s2 = float(np.dot(e, e)) / series.T
    if not s2 > 0:
        raise DegenerateStatisticError("Dickey-Fuller residual variance is zero")
    s = math.sqrt(s2)
    return DfOutcome(beta, s, num / (s * math.sqrt(den)))


def df_values(paths: np.ndarray) -> np.ndarray:
    """Vectorized L0 over the rows of ``paths``; NaN where degenerate."""
    x = np.atleast_2d(paths)
    T = x.shape[1] - 1
    d = np.diff(x, axis=1)
    lag = x[:, :-1]
    num = np.einsum("ij,ij->i", d[:, 1:], lag[:, 1:])
    den = np.einsum("ij,ij->i", lag[:, 1:], lag[:, 1:])
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = num / den
        e = d - beta[:, None] * lag
        s2 = np.einsum("ij,ij->i", e, e) / T
        out = num / (np.sqrt(s2) * np.sqrt(den))
    out[~((den > 0) & (s2 > 0))] = np.nan
    return out


# asymptotic lower-tail quantiles of the no-constant DF t statistic
DF_ASYMPTOTIC = {0.01: -2.5658, 0.05: -1.9393, 0.10: -1.6156}
