"""
Brute-force dip for small samples, independent of the modal-interval
refinement in :mod:`zdip.dip`.

For a tolerance ``d`` and a mode placed at the k-th distinct value, a
unimodal CDF within ``d`` of the ECDF exists iff

* a convex, non-decreasing chain fits the band left of the mode,
* a concave, non-decreasing chain fits the band right of it, and
* the smallest attainable left limit at the mode does not exceed the largest
  attainable right value there (the CDF may jump at its mode).

Each chain test is a hull check: the greatest convex minorant of the
(running-min) upper band must clear the lower band, and symmetrically with
the least concave majorant. Restricting the mode to data points loses
nothing because the ECDF is flat between them. The smallest feasible ``d``
is found by bisection, the endpoint values by nested bisection. Cost is
roughly O(n^3 log^2(1/eps)); meant for n <= 12 or so.
"""
import numpy as np
from numba import njit

from .dip import canonicalize
from .errors import SampleTooSmall

__all__ = ["dip_oracle"]

_ITER = 64


@njit(cache=True)
def _lower_hull_ok(v, w, lo, k):
    """Greatest convex minorant of points (v[i], w[i]), i <= k, stays >= lo[i] for i < k."""
    hull = np.empty(k + 1, dtype=np.int64)
    h = 0
    for i in range(k + 1):
        while h >= 2:
            a = hull[h - 2]
            b = hull[h - 1]
            # drop b unless it lies strictly below the chord a -> i
            if (w[b] - w[a]) * (v[i] - v[a]) < (w[i] - w[a]) * (v[b] - v[a]):
                break
            h -= 1
        hull[h] = i
        h += 1
    seg = 0
    for i in range(k):
        while hull[seg + 1] < i:
            seg += 1
        a = hull[seg]
        b = hull[seg + 1]
        if i == a:
            val = w[a]
        else:
            val = w[a] + (w[b] - w[a]) * (v[i] - v[a]) / (v[b] - v[a])
        if val < lo[i]:
            return False
    return True


@njit(cache=True)
def _upper_hull_ok(v, w, hi, k, m):
    """Least concave majorant of points (v[i], w[i]), k <= i < m, stays <= hi[i] for i > k."""
    cnt = m - k
    hull = np.empty(cnt, dtype=np.int64)
    h = 0
    for i in range(k, m):
        while h >= 2:
            a = hull[h - 2]
            b = hull[h - 1]
            if (w[b] - w[a]) * (v[i] - v[a]) > (w[i] - w[a]) * (v[b] - v[a]):
                break
            h -= 1
        hull[h] = i
        h += 1
    seg = 0
    for i in range(k + 1, m):
        while hull[seg + 1] < i:
            seg += 1
        a = hull[seg]
        b = hull[seg + 1]
        if i == b:
            val = w[b]
        else:
            val = w[a] + (w[b] - w[a]) * (v[i] - v[a]) / (v[b] - v[a])
        if val > hi[i]:
            return False
    return True


@njit(cache=True)
def _left_ok(v, upper, lower, k, c):
    # band for the convex part, mode value capped at c, made non-decreasing
    w = np.empty(k + 1)
    for i in range(k):
        w[i] = upper[i]
    w[k] = min(c, upper[k])
    for i in range(k - 1, -1, -1):
        if w[i + 1] < w[i]:
            w[i] = w[i + 1]
    return _lower_hull_ok(v, w, lower, k)


@njit(cache=True)
def _right_ok(v, upper, lower, k, m, c):
    w = np.empty(m)
    w[k] = max(c, lower[k])
    for i in range(k + 1, m):
        w[i] = lower[i]
    for i in range(k + 1, m):
        if w[i - 1] > w[i]:
            w[i] = w[i - 1]
    return _upper_hull_ok(v, w, upper, k, m)


@njit(cache=True)
def _feasible(v, cum, n, d):
    m = v.shape[0]
    upper = np.empty(m)
    lower = np.empty(m)
    for j in range(m):
        prev = cum[j - 1] if j > 0 else 0
        upper[j] = min(prev / n + d, 1.0)
        lower[j] = max(cum[j] / n - d, 0.0)
    for k in range(m):
        # smallest left limit reachable at the mode
        if k == 0:
            a_min = 0.0
        else:
            if not _left_ok(v, upper, lower, k, upper[k]):
                continue
            lo_c = 0.0
            hi_c = upper[k]
            for _ in range(_ITER):
                mid = 0.5 * (lo_c + hi_c)
                if _left_ok(v, upper, lower, k, mid):
                    hi_c = mid
                else:
                    lo_c = mid
            a_min = hi_c
        # largest right value reachable at the mode
        if k == m - 1:
            b_max = 1.0
        else:
            if not _right_ok(v, upper, lower, k, m, lower[k]):
                continue
            lo_c = lower[k]
            hi_c = 1.0
            for _ in range(_ITER):
                mid = 0.5 * (lo_c + hi_c)
                if _right_ok(v, upper, lower, k, m, mid):
                    lo_c = mid
                else:
                    hi_c = mid
            b_max = lo_c
        if a_min <= b_max:
            return True
    return False


@njit(cache=True)
def _oracle_sorted(x):
    n = x.shape[0]
    # distinct values and cumulative counts
    v = np.empty(n)
    cum = np.empty(n, dtype=np.int64)
    m = 0
    for i in range(n):
        if m > 0 and x[i] == v[m - 1]:
            cum[m - 1] = i + 1
        else:
            v[m] = x[i]
            cum[m] = i + 1
            m += 1
    v = v[:m]
    cum = cum[:m]
    floor = 1.0 / (2.0 * n)
    if m == 1:
        return floor
    lo = 0.0
    hi = 0.5
    for _ in range(_ITER):
        mid = 0.5 * (lo + hi)
        if _feasible(v, cum, n, mid):
            hi = mid
        else:
            lo = mid
    return max(hi, floor)


def dip_oracle(sample) -> float:
    """
    Dip by exhaustive search over mode positions.

    Uses the same ``1/(2n)`` floor as :func:`zdip.dip.dip`, so the two agree
    on every sample with at least two observations.
    """
    sample = canonicalize(sample)
    if sample.n < 2:
        raise SampleTooSmall(sample.n, 2)
    return float(_oracle_sorted(sample.values))
