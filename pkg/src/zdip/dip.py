"""
Hartigan's dip statistic.

The dip of a sample is the smallest sup-distance between its empirical CDF
and any unimodal distribution function. It is computed here with the
iterative greatest-convex-minorant / least-concave-majorant refinement of
the modal interval (Hartigan & Hartigan 1985, AS 217 as revised by
M. Maechler), which runs in linear time once the data are sorted.

References
----------
Hartigan, J. A. and Hartigan, P. M. "The dip test of unimodality."
The Annals of Statistics 13.1 (1985): 70-84.

Hartigan, P. M. "Computation of the dip statistic to test for unimodality:
Algorithm AS 217." Applied Statistics 34.3 (1985): 320-325.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .errors import EmptyInput, NonFiniteValue, SampleTooSmall, ZDipError, with_index

__all__ = ["Sample", "DipResult", "canonicalize", "dip", "dip_batch"]


@dataclass(frozen=True, eq=False)
class Sample:
    """Sorted, finite observations. Build with :func:`canonicalize`."""

    values: np.ndarray
    is_sorted: bool = True

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Sample):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True)
class DipResult:
    """
    Dip statistic plus the final modal interval.

    ``modal_lo_index`` and ``modal_hi_index`` index into the sorted sample.
    They are diagnostics only: several intervals can realise the same dip.
    """

    dip: float
    modal_lo_index: int
    modal_hi_index: int
    n: int


def canonicalize(raw) -> Sample:
    """
    Validate and sort raw observations.

    Ties are kept: a value repeated k times is a jump of k/n in the ECDF.

    Raises
    ------
    EmptyInput
        `raw` has no elements.
    NonFiniteValue
        some element is NaN or infinite; ``.index`` points at the first one.
    """
    if isinstance(raw, Sample):
        return raw
    arr = np.asarray(raw, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInput("cannot build a sample from an empty input")
    bad = ~np.isfinite(arr)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteValue(i, float(arr[i]))
    values = np.sort(arr, kind="stable")
    values.setflags(write=False)
    return Sample(values)


@njit(cache=True, nogil=True)
def _dip_sorted(x):
    """
    Core of the algorithm on sorted data.

    Works in units of 2n * dip until the very end. Returns
    ``(dip, low, high)`` with 0-based modal interval indices.
    """
    n = x.shape[0]
    low = 0
    high = n - 1
    # floor of one half jump: the dip of n >= 1 points is never below 1/(2n)
    dip = 1.0
    if n < 2 or x[n - 1] == x[0]:
        return dip / (2.0 * n), low, high

    # back-pointers for the convex minorant ...
    mn = np.empty(n, dtype=np.int64)
    mn[0] = 0
    for j in range(1, n):
        mn[j] = j - 1
        while True:
            mnj = mn[j]
            mnmnj = mn[mnj]
            if mnj == 0 or (x[j] - x[mnj]) * (mnj - mnmnj) < (x[mnj] - x[mnmnj]) * (j - mnj):
                break
            mn[j] = mnmnj
    # ... and for the concave majorant
    mj = np.empty(n, dtype=np.int64)
    mj[n - 1] = n - 1
    for k in range(n - 2, -1, -1):
        mj[k] = k + 1
        while True:
            mjk = mj[k]
            mjmjk = mj[mjk]
            if mjk == n - 1 or (x[k] - x[mjk]) * (mjk - mjmjk) < (x[mjk] - x[mjmjk]) * (k - mjk):
                break
            mj[k] = mjmjk

    gcm = np.empty(n + 1, dtype=np.int64)
    lcm = np.empty(n + 1, dtype=np.int64)
    while True:
        # change points of the GCM, from high down to low
        gcm[0] = high
        i = 0
        while gcm[i] > low:
            gcm[i + 1] = mn[gcm[i]]
            i += 1
        ig = i
        l_gcm = i
        ix = ig - 1
        # change points of the LCM, from low up to high
        lcm[0] = low
        i = 0
        while lcm[i] < high:
            lcm[i + 1] = mj[lcm[i]]
            i += 1
        ih = i
        l_lcm = i
        iv = 1

        # largest distance between GCM and LCM on [low, high]
        d = 0.0
        if l_gcm != 1 or l_lcm != 1:
            while True:
                gcmix = gcm[ix]
                lcmiv = lcm[iv]
                if gcmix > lcmiv:
                    gcmi1 = gcm[ix + 1]
                    dx = (lcmiv - gcmi1 + 1) - (x[lcmiv] - x[gcmi1]) * (gcmix - gcmi1) / (x[gcmix] - x[gcmi1])
                    iv += 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv - 1
                else:
                    lcmiv1 = lcm[iv - 1]
                    dx = (x[gcmix] - x[lcmiv1]) * (lcmiv - lcmiv1) / (x[lcmiv] - x[lcmiv1]) - (gcmix - lcmiv1 - 1)
                    ix -= 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv
                if ix < 0:
                    ix = 0
                if iv > l_lcm:
                    iv = l_lcm
                if gcm[ix] == lcm[iv]:
                    break
        else:
            d = 1.0

        if d < dip:
            break

        # dip of the convex minorant left of the modal interval
        dip_l = 0.0
        for j in range(ig, l_gcm):
            max_t = 1.0
            jb = gcm[j + 1]
            je = gcm[j]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                for jj in range(jb, je + 1):
                    t = (jj - jb + 1) - (x[jj] - x[jb]) * c
                    if max_t < t:
                        max_t = t
            if dip_l < max_t:
                dip_l = max_t
        # dip of the concave majorant right of it
        dip_u = 0.0
        for j in range(ih, l_lcm):
            max_t = 1.0
            jb = lcm[j]
            je = lcm[j + 1]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                for jj in range(jb, je + 1):
                    t = (x[jj] - x[jb]) * c - (jj - jb - 1)
                    if max_t < t:
                        max_t = t
            if dip_u < max_t:
                dip_u = max_t

        dipnew = dip_u if dip_u > dip_l else dip_l
        if dip < dipnew:
            dip = dipnew

        # stop once the modal interval no longer shrinks
        if low == gcm[ig] and high == lcm[ih]:
            break
        low = gcm[ig]
        high = lcm[ih]

    return dip / (2.0 * n), low, high


@njit(cache=True, nogil=True)
def _dip_rows(block):
    """Dip of every row of a 2-d array; rows need not be sorted."""
    m = block.shape[0]
    out = np.empty(m)
    for r in range(m):
        out[r] = _dip_sorted(np.sort(block[r]))[0]
    return out


def dip_values(x: np.ndarray) -> float:
    """Dip of an already sorted float64 array, skipping validation."""
    return _dip_sorted(x)[0]


def dip(sample) -> DipResult:
    """
    Hartigan's dip statistic of a sample.

    Parameters
    ----------
    sample : Sample or array_like
        Observations; raw arrays are passed through :func:`canonicalize`.

    Returns
    -------
    DipResult
        ``dip`` lies in ``[1/(2n), 1/4]``.

    Raises
    ------
    SampleTooSmall
        fewer than two observations.
    """
    sample = canonicalize(sample)
    if sample.n < 2:
        raise SampleTooSmall(sample.n, 2)
    d, lo, hi = _dip_sorted(sample.values)
    return DipResult(float(d), int(lo), int(hi), sample.n)


def dip_batch(samples: Sequence | Iterable) -> list[DipResult]:
    """
    :func:`dip` applied to every sample, in order.

    Errors are re-raised with ``batch_index`` set to the failing position.
    """
    out = []
    for i, s in enumerate(samples):
        try:
            out.append(dip(s))
        except ZDipError as exc:
            raise with_index(exc, i)
    return out
