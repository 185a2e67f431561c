"""One-dimensional symmetric decreasing rearrangement of sampled values."""

from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = ["exact_dot", "placement_order", "placement_rank", "rearrange_1d", "validate_values"]


def validate_values(values, what="value"):
    """Return ``values`` as a float array after rejecting NaN, inf and negatives."""
    arr = np.asarray(values, dtype=np.float64)
    bad = ~np.isfinite(arr) | (arr < 0)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        loc = idx[0] if len(idx) == 1 else idx
        raise ValueError(f"{what} at {loc} is {arr[idx]!r}; need a finite nonnegative number")
    # -0.0 would otherwise sort ambiguously against 0.0
    return arr + 0.0


@lru_cache(maxsize=64)
def placement_order(m: int) -> np.ndarray:
    """Indices ``0..m-1`` ordered by distance to the centre, lower index first on ties."""
    idx = np.arange(m)
    dist2 = np.abs(2 * idx - (m - 1))  # twice the distance, kept integral
    order = np.lexsort((idx, dist2))
    order.setflags(write=False)
    return order


@lru_cache(maxsize=64)
def placement_rank(m: int) -> np.ndarray:
    """Inverse of :func:`placement_order`: the slot each index receives."""
    rank = np.empty(m, dtype=np.int64)
    rank[placement_order(m)] = np.arange(m)
    rank.setflags(write=False)
    return rank


def rearrange_1d(values) -> np.ndarray:
    """Symmetric decreasing rearrangement of a vector.

    The largest value goes to the centre, the next ones alternate outward
    following :func:`placement_order`.

    >>> rearrange_1d([0, 1, 2, 3]).tolist()
    [1.0, 3.0, 2.0, 0.0]
    """
    v = validate_values(values)
    if v.ndim != 1:
        raise ValueError("rearrange_1d expects a one-dimensional vector")
    desc = np.sort(v)[::-1]
    return desc[placement_rank(v.size)]


def exact_dot(a, b) -> Fraction:
    """Inner product of two float vectors in exact rational arithmetic."""
    return sum((Fraction(x) * Fraction(y) for x, y in zip(np.asarray(a).tolist(), np.asarray(b).tolist())), Fraction(0))
