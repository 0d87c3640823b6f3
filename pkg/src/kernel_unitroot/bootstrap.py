"""Bootstrap calibration under the random-walk null, size/power, bandwidth choice.

Every replication ``m`` of a hypothesis ``k`` (0 = null, 1 = alternative)
draws its data from stream path ``(k, m, 0)`` and its ``b``-th resample from
``(k, m, b + 1)``. Work can therefore be split across processes in any way
without changing a single draw, and rejection counts are plain integers.
"""

from __future__ import annotations

import math
import multiprocessing as mp
import pickle
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import BandwidthTooSmallError, ConfigError, NoAdmissibleBandwidthError
from .kernels import Kernel, check_bandwidth
from .series import (
    Dgp,
    RngStream,
    Series,
    sigma_u_hat,
    simulate,
    standardized_increments,
)
from .stats import DF_ASYMPTOTIC, df_values, l_stat, l_values

NULL, ALTERNATIVE = 0, 1
MAX_DEGENERATE_RATE = 0.2


class Innovation(str, Enum):
    STANDARD_NORMAL = "normal"
    RESAMPLED_DIFFERENCES = "resampled"


class Scheme(str, Enum):
    # X*_t = X*_{t-1} + sigma eps_t, refit on the resampled lags
    RECURSIVE = "recursive"
    # X*_t = X_{t-1} + sigma eps_t, refit on the observed lags
    LITERAL = "literal"


@dataclass(frozen=True)
class BootstrapSpec:
    B: int = 99
    M: int = 200
    alpha: float = 0.05
    innovation: Innovation = Innovation.STANDARD_NORMAL
    master_seed: int = 0
    workers: int = 1
    scheme: Scheme = Scheme.RECURSIVE
    warp: bool = False  # one resample per replication, pooled; smoke tests only

    def __post_init__(self):
        object.__setattr__(self, "innovation", Innovation(self.innovation))
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.B < 20 and not self.warp:
            raise ConfigError(f"B must be >= 20, got {self.B}")
        if self.M < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class CriticalValue:
    l_star: float
    alpha: float
    B: int
    k: int
    h: float | None = None


@dataclass(frozen=True)
class BootstrapDistribution:
    values: np.ndarray  # ascending, degenerate draws removed
    degenerate: int

    @property
    def B(self) -> int:
        return self.values.size + self.degenerate


@dataclass(frozen=True)
class SizePowerRow:
    h: float
    size: float
    power: float
    se_size: float
    se_power: float
    degenerate: int


@dataclass
class SizePowerCurve:
    rows: list[SizePowerRow] = field(default_factory=list)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def binomial_se(p: float, M: int) -> float:
    return math.sqrt(p * (1.0 - p) / M)


# --------------------------------------------------------------------------
# single-series operations


def _innovations(gen, T, innovation, pool):
    if Innovation(innovation) is Innovation.STANDARD_NORMAL:
        return gen.standard_normal(T)
    return pool[gen.integers(0, pool.size, size=T)]


def _resample_values(series, sigma, innovation, stream, scheme, pool):
    eps = _innovations(stream.generator(), series.T, innovation, pool)
    x = np.empty(series.T + 1)
    x[0] = series.values[0]
    if scheme is Scheme.RECURSIVE:
        x[1:] = sigma * eps
        np.cumsum(x, out=x)
    else:
        x[1:] = series.lags + sigma * eps
    return x


def bootstrap_resample(
    series: Series,
    sigma_u_hat: float,
    innovation=Innovation.STANDARD_NORMAL,
    stream: RngStream | None = None,
    scheme=Scheme.RECURSIVE,
) -> Series:
    """Draw one null path ``X*_t = X*_{t-1} + sigma_u_hat * eps*_t`` from ``X*_0 = X_0``.

    With ``innovation="resampled"`` the shocks are drawn with replacement
    from the centered first differences rescaled to unit mean square.
    ``scheme="literal"`` uses ``X_{t-1}`` instead of ``X*_{t-1}``.
    """
    if not sigma_u_hat > 0:
        raise ConfigError(f"sigma_u_hat must be positive, got {sigma_u_hat}")
    if stream is None:
        raise ConfigError("a random stream is required")
    innovation = Innovation(innovation)
    pool = standardized_increments(series) if innovation is Innovation.RESAMPLED_DIFFERENCES else None
    return Series(_resample_values(series, sigma_u_hat, innovation, stream, Scheme(scheme), pool))


def _bootstrap_matrix(series, kernel, hs, B, innovation, stream, scheme, with_df, sigma=None):
    """Resampled statistics, one row per resample: L-hat per h, then L0 if asked."""
    scheme = Scheme(scheme)
    innovation = Innovation(innovation)
    if sigma is None:
        sigma = sigma_u_hat(series)
    ncol = len(hs) + (1 if with_df else 0)
    out = np.full((B, ncol), np.nan)
    if not sigma > 0:
        return out
    pool = standardized_increments(series) if innovation is Innovation.RESAMPLED_DIFFERENCES else None
    hs = np.asarray(hs, dtype=np.float64)
    lags = np.ascontiguousarray(series.lags)
    for b in range(B):
        x = _resample_values(series, sigma, innovation, stream.child(b + 1), scheme, pool)
        design = x[:-1] if scheme is Scheme.RECURSIVE else lags
        out[b, : hs.size] = l_values(design, x[1:], kernel, hs)
        if with_df:
            out[b, -1] = df_values(x)[0]
    return out


def bootstrap_distribution(
    series: Series,
    kernel: Kernel,
    h: float,
    B: int,
    innovation=Innovation.STANDARD_NORMAL,
    stream: RngStream | None = None,
    scheme=Scheme.RECURSIVE,
) -> BootstrapDistribution:
    """Sorted bootstrap values of L-hat at bandwidth ``h`` under the null scheme.

    Resample ``b`` uses ``stream.child(b + 1)``. Degenerate resamples are
    dropped and counted.

    Raises
    ------
    BandwidthTooSmallError
        When more than 20% of the resamples are degenerate.
    """
    if B < 20:
        raise ConfigError(f"B must be >= 20, got {B}")
    h = check_bandwidth(h, series.T)
    vals = _bootstrap_matrix(series, kernel, [h], B, innovation, stream, scheme, False)[:, 0]
    ok = np.isfinite(vals)
    degenerate = int(B - ok.sum())
    if degenerate > MAX_DEGENERATE_RATE * B:
        raise BandwidthTooSmallError(
            f"{degenerate} of {B} bootstrap statistics degenerate at h={h:g}",
            degenerate=degenerate,
            total=B,
        )
    return BootstrapDistribution(np.sort(vals[ok]), degenerate)


def _order_index(alpha: float, B: int) -> int:
    # round away representation noise such as (1 - 0.7) * 20 = 6.000000000000001
    return max(1, math.ceil(round((1.0 - alpha) * B, 9)))


def critical_value(sorted_dist, alpha: float, h: float | None = None) -> CriticalValue:
    """``k``-th smallest bootstrap value, ``k = ceil((1 - alpha) B)``.

    At most a fraction ``alpha`` of the draws lie strictly above it.
    """
    d = np.asarray(sorted_dist, dtype=np.float64)
    if not 0 < alpha < 1:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if d.size == 0:
        raise ConfigError("empty bootstrap distribution")
    k = _order_index(alpha, d.size)
    return CriticalValue(float(d[k - 1]), alpha, int(d.size), k, h)


def p_value_from(observed: float, values, tail: str = "upper") -> float:
    """Share of bootstrap values strictly beyond the observed one."""
    v = np.asarray(values, dtype=np.float64)
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise BandwidthTooSmallError("no usable bootstrap values", degenerate=0, total=0)
    if tail == "upper":
        return float(np.count_nonzero(v > observed) / v.size)
    if tail == "lower":
        return float(np.count_nonzero(v < observed) / v.size)
    raise ConfigError(f"unknown tail {tail!r}")


def p_value(
    series: Series,
    kernel: Kernel,
    h: float,
    B: int,
    innovation=Innovation.STANDARD_NORMAL,
    stream: RngStream | None = None,
    scheme=Scheme.RECURSIVE,
) -> float:
    """Bootstrap p-value ``#{L*_b > L-hat} / B'`` over non-degenerate resamples."""
    observed = l_stat(series, kernel, h).l_value
    dist = bootstrap_distribution(series, kernel, h, B, innovation, stream, scheme)
    return p_value_from(observed, dist.values)


# --------------------------------------------------------------------------
# Monte Carlo size and power


@dataclass(frozen=True)
class RejectionResult:
    """Rejection frequencies for one hypothesis; the last column is L0 when requested."""

    hs: tuple
    with_df: bool
    M: int
    rejections: np.ndarray  # integer count per column
    degenerate: np.ndarray  # degenerate statistic evaluations per column

    @property
    def rates(self) -> np.ndarray:
        return self.rejections / self.M

    @property
    def stderr(self) -> np.ndarray:
        p = self.rates
        return np.sqrt(p * (1 - p) / self.M)


def _replicate_chunk(task):
    dgp, T, kernel, hs, spec, hypothesis, indices, with_df = task
    ncol = len(hs) + (1 if with_df else 0)
    B = 1 if spec.warp else spec.B
    obs = np.full((len(indices), ncol), np.nan)
    boot = np.full((len(indices), B, ncol), np.nan)
    hs_arr = np.asarray(hs, dtype=np.float64)
    for r, m in enumerate(indices):
        base = RngStream(spec.master_seed, (hypothesis, m))
        series = simulate(dgp, T, base.child(0))
        obs[r, : len(hs)] = l_values(series.lags, series.responses, kernel, hs_arr)
        if with_df:
            obs[r, -1] = df_values(series.values)[0]
        boot[r] = _bootstrap_matrix(
            series, kernel, hs_arr, B, spec.innovation, base, spec.scheme, with_df
        )
    return obs, boot


def _chunks(M, workers):
    n = max(1, min(M, workers * 4))
    edges = np.linspace(0, M, n + 1).astype(int)
    return [range(edges[i], edges[i + 1]) for i in range(n) if edges[i + 1] > edges[i]]


def simulate_statistics(dgp, T, kernel, hs, spec: BootstrapSpec, hypothesis, with_df=False):
    """Observed and bootstrap statistics for replications ``0..M-1``.

    Returns ``(obs, boot)`` with shapes ``(M, ncol)`` and ``(M, B, ncol)``.
    """
    hs = tuple(float(h) for h in hs)
    workers = spec.workers
    if workers > 1:
        try:
            pickle.dumps(dgp)
        except Exception:
            warnings.warn("DGP is not picklable; running serially", RuntimeWarning, stacklevel=2)
            workers = 1
    tasks = [(dgp, T, kernel, hs, spec, hypothesis, list(c), with_df) for c in _chunks(spec.M, workers)]
    if workers == 1:
        parts = [_replicate_chunk(t) for t in tasks]
    else:
        methods = mp.get_all_start_methods()
        ctx = mp.get_context("fork" if "fork" in methods else "spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            parts = list(pool.map(_replicate_chunk, tasks))
    obs = np.concatenate([p[0] for p in parts])
    boot = np.concatenate([p[1] for p in parts])
    return obs, boot


def _decide(obs, boot, alpha, tail, warp):
    """Per-replication rejections for one column."""
    M = obs.size
    rej = np.zeros(M, dtype=bool)
    sign = 1.0 if tail == "upper" else -1.0
    if warp:
        pooled = boot.ravel()
        pooled = np.sort(sign * pooled[np.isfinite(pooled)])
        if pooled.size == 0:
            return rej
        crit = critical_value(pooled, alpha).l_star
        return np.isfinite(obs) & (sign * obs >= crit)
    for m in range(M):
        if not np.isfinite(obs[m]):
            continue
        v = boot[m]
        v = np.sort(sign * v[np.isfinite(v)])
        if v.size == 0:
            continue
        rej[m] = sign * obs[m] >= critical_value(v, alpha).l_star
    return rej


def rejection_rates(
    dgp: Dgp,
    T: int,
    kernel: Kernel,
    hs,
    spec: BootstrapSpec,
    hypothesis: int,
    with_df: bool = False,
    df_critical: str = "bootstrap",
    check_degenerate: bool = True,
) -> RejectionResult:
    """Monte Carlo rejection frequency of each statistic with per-replication bootstrap critical values.

    L-hat rejects when ``L-hat >= l*``. L0 rejects in the lower tail,
    ``L0 <= l0*``, with ``l0*`` from the same resamples (or from the
    asymptotic no-constant Dickey-Fuller quantile when
    ``df_critical="asymptotic"``).
    """
    obs, boot = simulate_statistics(dgp, T, kernel, hs, spec, hypothesis, with_df)
    ncol = obs.shape[1]
    rej = np.zeros(ncol, dtype=np.int64)
    degenerate = np.zeros(ncol, dtype=np.int64)
    for c in range(ncol):
        is_df = with_df and c == ncol - 1
        degenerate[c] = int(np.count_nonzero(~np.isfinite(obs[:, c])) + np.count_nonzero(~np.isfinite(boot[:, :, c])))
        if is_df and df_critical == "asymptotic":
            try:
                crit = DF_ASYMPTOTIC[round(spec.alpha, 6)]
            except KeyError:
                raise ConfigError(
                    f"asymptotic DF critical values exist only for alpha in {sorted(DF_ASYMPTOTIC)}"
                ) from None
            rej[c] = int(np.count_nonzero(obs[:, c] <= crit))
        else:
            tail = "lower" if is_df else "upper"
            rej[c] = int(_decide(obs[:, c], boot[:, :, c], spec.alpha, tail, spec.warp).sum())
    total = obs.shape[0] * (boot.shape[1] + 1)
    if check_degenerate:
        for c, h in enumerate(hs):
            if degenerate[c] > MAX_DEGENERATE_RATE * total:
                raise BandwidthTooSmallError(
                    f"{degenerate[c]} of {total} statistics degenerate at h={h:g}",
                    degenerate=int(degenerate[c]),
                    total=total,
                )
    return RejectionResult(tuple(float(h) for h in hs), with_df, spec.M, rej, degenerate)


def _curve(null_res: RejectionResult, alt_res: RejectionResult) -> SizePowerCurve:
    rows = []
    for c, h in enumerate(null_res.hs):
        size, power = float(null_res.rates[c]), float(alt_res.rates[c])
        rows.append(
            SizePowerRow(
                h,
                size,
                power,
                binomial_se(size, null_res.M),
                binomial_se(power, alt_res.M),
                int(null_res.degenerate[c] + alt_res.degenerate[c]),
            )
        )
    return SizePowerCurve(rows)


def size_power(null_dgp: Dgp, alt_dgp: Dgp, T: int, kernel: Kernel, h: float, spec: BootstrapSpec) -> SizePowerRow:
    """Estimated size and power at ``h``: M replications each with B resamples."""
    h = check_bandwidth(h, T)
    return size_power_curve(null_dgp, alt_dgp, T, kernel, [h], spec).rows[0]


def size_power_curve(null_dgp, alt_dgp, T, kernel, hs, spec: BootstrapSpec) -> SizePowerCurve:
    null_res = rejection_rates(null_dgp, T, kernel, hs, spec, NULL)
    alt_res = rejection_rates(alt_dgp, T, kernel, hs, spec, ALTERNATIVE)
    return _curve(null_res, alt_res)


def choose_bandwidth(curve: SizePowerCurve, alpha: float) -> float:
    """Most powerful bandwidth among those with size at most ``alpha``; ties go to the larger h."""
    admissible = [r for r in curve.rows if r.size <= alpha]
    if not admissible:
        raise NoAdmissibleBandwidthError(
            f"no bandwidth keeps the estimated size at or below {alpha}", curve=curve
        )
    best = max(admissible, key=lambda r: (r.power, r.h))
    return best.h


def select_bandwidth(null_dgp, alt_dgp, T, kernel, h_grid, spec: BootstrapSpec):
    """Size/power curve over ``h_grid`` and the power-maximizing size-controlled bandwidth.

    Returns ``(h_test, curve)``; raises :class:`NoAdmissibleBandwidthError`
    (carrying the curve) when every bandwidth over-rejects.
    """
    grid = sorted(float(h) for h in h_grid)
    if not grid:
        raise ConfigError("bandwidth grid is empty")
    for h in grid:
        check_bandwidth(h)
    curve = size_power_curve(null_dgp, alt_dgp, T, kernel, grid, spec)
    return choose_bandwidth(curve, spec.alpha), curve


def with_workers(spec: BootstrapSpec, workers: int) -> BootstrapSpec:
    return replace(spec, workers=workers)
