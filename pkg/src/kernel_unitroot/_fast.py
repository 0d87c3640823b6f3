"""Compiled sorted-window loops.

Lags are sorted once; every kernel sum then scans only the contiguous block
of sorted lags within ``support * h`` of the centre. Compact support makes
this exact. The block is computed with a small outward margin and the
kernel itself decides membership, so boundary rounding cannot drop a pair.

Sums run in sorted-index order with Neumaier compensation, so results do
not depend on how callers schedule work.
"""

import numba as nb
import numpy as np

_UNIFORM = 0
_EPANECHNIKOV = 1


@nb.njit(cache=True, inline="always")
def kval(u, code):
    a = abs(u)
    if a > 1.0:
        return 0.0
    if code == _UNIFORM:
        return 0.5
    return 0.75 * (1.0 - u * u)


@nb.njit(cache=True, inline="always")
def _add(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


@nb.njit(cache=True)
def sort_design(lags):
    order = np.argsort(lags, kind="mergesort")
    return order, lags[order]


@nb.njit(cache=True)
def window_bounds(ls, reach):
    n = ls.size
    margin = reach * 1e-9 + 1e-12 * (abs(ls[0]) + abs(ls[n - 1]))
    lo = np.searchsorted(ls, ls - (reach + margin), side="left")
    hi = np.searchsorted(ls, ls + (reach + margin), side="right")
    return lo, hi


@nb.njit(cache=True)
def residuals_sorted(ls, order, resp, h, code, lo, hi):
    """``resp_t - ghat(lag_t)`` written as a weighted mean of ``resp_t - resp_s``."""
    n = ls.size
    out = np.empty(n)
    for i in range(n):
        ri = resp[order[i]]
        num = 0.0
        cn = 0.0
        den = 0.0
        cd = 0.0
        for j in range(lo[i], hi[i]):
            k = kval((ls[j] - ls[i]) / h, code)
            if k > 0.0:
                num, cn = _add(num, cn, k * (ri - resp[order[j]]))
                den, cd = _add(den, cd, k)
        out[order[i]] = (num + cn) / (den + cd)
    return out


@nb.njit(cache=True)
def smooth_sorted(ls, order, y, h, code, lo, hi, skip_self):
    """Kernel-weighted numerator and denominator at every sample lag."""
    n = ls.size
    num_out = np.empty(n)
    den_out = np.empty(n)
    for i in range(n):
        num = 0.0
        cn = 0.0
        den = 0.0
        cd = 0.0
        for j in range(lo[i], hi[i]):
            if skip_self and j == i:
                continue
            k = kval((ls[j] - ls[i]) / h, code)
            if k > 0.0:
                num, cn = _add(num, cn, k * y[order[j]])
                den, cd = _add(den, cd, k)
        num_out[order[i]] = num + cn
        den_out[order[i]] = den + cd
    return num_out, den_out


@nb.njit(cache=True)
def smooth_points(points, ls, order, y, h, code, reach):
    """Kernel-weighted numerator and denominator at arbitrary points."""
    m = points.size
    n = ls.size
    margin = reach * 1e-9 + 1e-12 * (abs(ls[0]) + abs(ls[n - 1]))
    num_out = np.empty(m)
    den_out = np.empty(m)
    for p in range(m):
        x = points[p]
        a = np.searchsorted(ls, x - (reach + margin), side="left")
        b = np.searchsorted(ls, x + (reach + margin), side="right")
        num = 0.0
        cn = 0.0
        den = 0.0
        cd = 0.0
        for j in range(a, b):
            k = kval((ls[j] - x) / h, code)
            if k > 0.0:
                num, cn = _add(num, cn, k * y[order[j]])
                den, cd = _add(den, cd, k)
        num_out[p] = num + cn
        den_out[p] = den + cd
    return num_out, den_out


@nb.njit(cache=True)
def pair_sums_sorted(ls, order, u, h, code, lo, hi):
    """Ordered-pair sums ``sum_{s != t} u_s K u_t`` and ``2 sum_{s != t} u_s^2 K^2 u_t^2``."""
    n = ls.size
    m = 0.0
    cm = 0.0
    v = 0.0
    cv = 0.0
    count = 0
    for i in range(n):
        ui = u[order[i]]
        a = 0.0
        ca = 0.0
        b = 0.0
        cb = 0.0
        for j in range(lo[i], hi[i]):
            if j == i:
                continue
            k = kval((ls[j] - ls[i]) / h, code)
            if k > 0.0:
                uj = u[order[j]]
                count += 1
                a, ca = _add(a, ca, k * uj)
                b, cb = _add(b, cb, k * k * uj * uj)
        m, cm = _add(m, cm, ui * (a + ca))
        v, cv = _add(v, cv, ui * ui * (b + cb))
    return m + cm, 2.0 * (v + cv), count


@nb.njit(cache=True)
def l_stats_multi(lags, resp, hs, code, support):
    """M_T, sigma_hat^2 and pair counts for several bandwidths, sorting once."""
    order, ls = sort_design(lags)
    nh = hs.size
    ms = np.empty(nh)
    vs = np.empty(nh)
    counts = np.empty(nh, dtype=np.int64)
    for q in range(nh):
        h = hs[q]
        lo, hi = window_bounds(ls, support * h)
        res = residuals_sorted(ls, order, resp, h, code, lo, hi)
        ms[q], vs[q], counts[q] = pair_sums_sorted(ls, order, res, h, code, lo, hi)
    return ms, vs, counts
