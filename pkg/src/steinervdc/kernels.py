"""Hot loops: bilinear resampling and per-column rearrangement.

Each kernel exists twice, a numba version and a vectorised numpy version. Both
evaluate the same floating-point expressions in the same order so that the two
backends agree bit for bit. The public functions dispatch on
:data:`steinervdc._accel.BACKEND`.
"""

import math

import numpy as np

from . import _accel
from ._accel import njit


# -- bilinear sampling -------------------------------------------------------

def _bilinear_numpy(values, xs, ys, h):
    n = values.shape[0]
    half = 0.5 * (n - 1)
    u = xs / h + half
    v = ys / h + half
    j0 = np.floor(u)
    i0 = np.floor(v)
    s = u - j0
    t = v - i0
    # zero padding: one ring of zeros around the grid, indices clipped into it
    padded = np.zeros((n + 2, n + 2))
    padded[1:-1, 1:-1] = values
    j0 = np.clip(j0, -1, n).astype(np.int64) + 1
    i0 = np.clip(i0, -1, n).astype(np.int64) + 1
    j1 = np.minimum(j0 + 1, n + 1)
    i1 = np.minimum(i0 + 1, n + 1)
    f00 = padded[i0, j0]
    f01 = padded[i0, j1]
    f10 = padded[i1, j0]
    f11 = padded[i1, j1]
    out = (1.0 - t) * ((1.0 - s) * f00 + s * f01) + t * ((1.0 - s) * f10 + s * f11)
    # rounding must not leave the corner range
    lo = np.minimum(np.minimum(f00, f01), np.minimum(f10, f11))
    hi = np.maximum(np.maximum(f00, f01), np.maximum(f10, f11))
    out = np.minimum(np.maximum(out, lo), hi)
    # far outside the grid the clipped corners would alias onto the border
    outside = (u <= -1.0) | (u >= n) | (v <= -1.0) | (v >= n)
    out[outside] = 0.0
    return out


@njit
def _bilinear_numba(values, xs, ys, h):
    n = values.shape[0]
    half = 0.5 * (n - 1)
    flat_x = xs.ravel()
    flat_y = ys.ravel()
    out = np.zeros(flat_x.size)
    for k in range(flat_x.size):
        u = flat_x[k] / h + half
        v = flat_y[k] / h + half
        if u <= -1.0 or u >= n or v <= -1.0 or v >= n:
            continue
        jf = math.floor(u)
        if_ = math.floor(v)
        s = u - jf
        t = v - if_
        j0 = int(jf)
        i0 = int(if_)
        f00 = 0.0
        f01 = 0.0
        f10 = 0.0
        f11 = 0.0
        if 0 <= i0 < n:
            if 0 <= j0 < n:
                f00 = values[i0, j0]
            if 0 <= j0 + 1 < n:
                f01 = values[i0, j0 + 1]
        if 0 <= i0 + 1 < n:
            if 0 <= j0 < n:
                f10 = values[i0 + 1, j0]
            if 0 <= j0 + 1 < n:
                f11 = values[i0 + 1, j0 + 1]
        val = (1.0 - t) * ((1.0 - s) * f00 + s * f01) + t * ((1.0 - s) * f10 + s * f11)
        lo = min(min(f00, f01), min(f10, f11))
        hi = max(max(f00, f01), max(f10, f11))
        out[k] = min(max(val, lo), hi)
    return out.reshape(xs.shape)


def bilinear_sample(values, xs, ys, h, backend=None):
    """Sample a centred cell grid at plane points ``(xs, ys)``.

    Cell ``(i, j)`` sits at ``((j - (n-1)/2) h, (i - (n-1)/2) h)``. Points off
    the grid see zeros, so every output is a convex sub-combination of at most
    four grid values, clamped to their range.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    if (backend or _accel.BACKEND) == "numba":
        return _bilinear_numba(values, xs, ys, float(h))
    return _bilinear_numpy(values, xs, ys, float(h))


def rotation_sources(n, h, cos_a, sin_a):
    """Plane coordinates ``e^{-ia} z`` for every cell centre ``z``."""
    c = (2.0 * np.arange(n) - (n - 1)) * (0.5 * h)
    x = c[np.newaxis, :]
    y = c[:, np.newaxis]
    sx = cos_a * x + sin_a * y
    sy = cos_a * y - sin_a * x
    return sx, sy


def rotate_bilinear(values, h, cos_a, sin_a, backend=None):
    n = values.shape[0]
    sx, sy = rotation_sources(n, h, cos_a, sin_a)
    return bilinear_sample(values, sx, sy, h, backend=backend)


# -- column rearrangement ----------------------------------------------------

def _columns_numpy(values, rank):
    desc = np.sort(values, axis=0)[::-1]
    return np.ascontiguousarray(desc[rank, :])


@njit
def _columns_numba(values, rank):
    m, ncol = values.shape
    out = np.empty_like(values)
    col = np.empty(m)
    for j in range(ncol):
        for i in range(m):
            col[i] = values[i, j]
        col.sort()
        for i in range(m):
            out[i, j] = col[m - 1 - rank[i]]
    return out


def rearrange_columns(values, rank, backend=None):
    """Replace every column by its symmetric decreasing arrangement.

    ``rank[i]`` is the descending-order slot that lands at row ``i``.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    rank = np.ascontiguousarray(rank, dtype=np.int64)
    if (backend or _accel.BACKEND) == "numba":
        return _columns_numba(values, rank)
    return _columns_numpy(values, rank)
