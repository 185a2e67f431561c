"""Sampled planar functions and the rearrangement operators acting on them.

A :class:`GridFunction` holds nonnegative samples at the cell centres of an
``n x n`` grid covering ``[-L, L]^2``. Row ``i`` is the ``i``-th lowest ``y``,
column ``j`` the ``j``-th lowest ``x``.

Steiner symmetrization along the vertical and the radial rearrangement only
permute values, so they are exactly equimeasurable. Rotation is the one
approximate operator: bilinear interpolation with zero padding, except for
quarter turns which are index permutations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .angles import DyadicAngle
from .rearrange import placement_rank, validate_values

__all__ = [
    "GridFunction",
    "RadialProfile",
    "SupportError",
    "angular_spectrum",
    "gauss_functional",
    "nonradial_energy",
    "radial_order",
    "radial_profile",
    "rearrange_radial",
    "rotate",
    "sample",
    "shell_average",
    "spectral_energy",
    "steiner_direction",
    "steiner_vertical",
    "sup_distance",
    "support_radius",
]


class SupportError(ValueError):
    """Support reaches too far out for rotations to stay on the grid."""


@dataclass(frozen=True, eq=False)
class GridFunction:
    values: np.ndarray
    half_width: float

    def __post_init__(self):
        vals = validate_values(self.values, what="grid value")
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] == 0:
            raise ValueError(f"values must be a nonempty square array, got shape {vals.shape}")
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise ValueError("half_width must be positive and finite")
        vals = np.ascontiguousarray(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def resolution(self) -> int:
        return self.values.shape[0]

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.resolution

    @property
    def centers(self) -> np.ndarray:
        """Cell-centre coordinates along either axis, exactly symmetric about 0."""
        return _centers(self.resolution, self.half_width)

    @property
    def mass(self) -> float:
        # correctly rounded sum: any permutation of the values gives the same mass
        return self.spacing**2 * math.fsum(self.values.ravel().tolist())

    def with_values(self, values) -> GridFunction:
        return GridFunction(values, self.half_width)

    def compatible(self, other: GridFunction) -> bool:
        return self.resolution == other.resolution and self.half_width == other.half_width

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.compatible(other) and np.array_equal(self.values, other.values)

    __hash__ = None


@lru_cache(maxsize=32)
def _centers(n: int, half_width: float) -> np.ndarray:
    h = 2.0 * half_width / n
    c = (2.0 * np.arange(n) - (n - 1)) * (0.5 * h)
    c.setflags(write=False)
    return c


@lru_cache(maxsize=32)
def _gauss_weights(n: int, half_width: float) -> np.ndarray:
    c = _centers(n, half_width)
    w = np.exp(-(c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2))
    w.setflags(write=False)
    return w


def _require_compatible(f: GridFunction, g: GridFunction):
    if not f.compatible(g):
        raise ValueError(
            f"incompatible grids: n={f.resolution}, L={f.half_width} vs "
            f"n={g.resolution}, L={g.half_width}"
        )


def sample(fn, resolution: int, half_width: float) -> GridFunction:
    """Evaluate ``fn(x, y)`` (vectorised over arrays) at every cell centre."""
    if resolution < 1:
        raise ValueError("resolution must be positive")
    c = _centers(resolution, float(half_width))
    x, y = np.meshgrid(c, c)
    vals = np.broadcast_to(np.asarray(fn(x, y), dtype=np.float64), x.shape)
    bad = ~np.isfinite(vals) | (vals < 0)
    if bad.any():
        i, j = (int(k) for k in np.argwhere(bad)[0])
        raise ValueError(
            f"sample at cell (row={i}, col={j}), z=({c[j]:g}, {c[i]:g}) is {vals[i, j]!r}"
        )
    return GridFunction(np.array(vals), half_width)


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    _require_compatible(f, g)
    return float(np.max(np.abs(f.values - g.values)))


def gauss_functional(f: GridFunction) -> float:
    """Midpoint rule for the integral of ``f(z) exp(-|z|^2)``.

    The products are summed orbit by orbit under the symmetries of the square
    (values within an orbit in sorted order), so the result is bit-identical
    for any quarter-turn or reflection of the input.
    """
    p = f.values * _gauss_weights(f.resolution, f.half_width)
    images = [p, p.T]
    for _ in range(3):
        images.append(images[-2][::-1, :].T)
        images.append(images[-2][::-1, :].T)
    stack = np.sort(np.stack(images), axis=0)
    orbit = stack[0].copy()
    for k in range(1, 8):
        orbit += stack[k]
    return f.spacing**2 * float(np.sum(orbit)) / 8.0


def steiner_vertical(f: GridFunction) -> GridFunction:
    """Symmetric decreasing rearrangement of every column."""
    n = f.resolution
    return f.with_values(kernels.rearrange_columns(f.values, placement_rank(n)))


def _quarter_turn(values: np.ndarray, k: int) -> np.ndarray:
    k %= 4
    if k == 0:
        return values.copy()
    if k == 1:
        return values[::-1, :].T.copy()
    if k == 2:
        return values[::-1, ::-1].copy()
    return values[:, ::-1].T.copy()


def rotate(f: GridFunction, angle: DyadicAngle, renormalize: bool = False) -> GridFunction:
    """``(R_a f)(z) = f(e^{-ia} z)``.

    With ``renormalize`` the result is rescaled to the input mass; quarter
    turns are exact and never rescaled.
    """
    k = angle.quarter_turns
    if k is not None:
        return f.with_values(_quarter_turn(f.values, k))
    a = angle.radians
    out = kernels.rotate_bilinear(f.values, f.spacing, math.cos(a), math.sin(a))
    if renormalize:
        m_in, m_out = float(np.sum(f.values)), float(np.sum(out))
        if m_out > 0:
            out *= m_in / m_out
    return f.with_values(out)


def support_radius(f: GridFunction) -> float:
    """Largest cell-centre distance to the origin among nonzero cells (0 if none)."""
    nz = f.values > 0
    if not nz.any():
        return 0.0
    c = f.centers
    r2 = c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2
    return math.sqrt(float(np.max(r2[nz])))


def check_support(f: GridFunction):
    limit = f.half_width / math.sqrt(2.0)
    r = support_radius(f)
    if r > limit * (1 + 1e-12):
        raise SupportError(
            f"support radius {r:.6g} exceeds L/sqrt(2) = {limit:.6g}; rotations would clip it"
        )


def steiner_direction(
    f: GridFunction, angle: DyadicAngle, renormalize: bool = False, check: bool = True
) -> GridFunction:
    """Steiner symmetrization along direction ``angle``: ``R_a S R_{-a} f``."""
    if check:
        check_support(f)
    g = steiner_vertical(rotate(f, -angle, renormalize))
    return rotate(g, angle, renormalize)


@lru_cache(maxsize=16)
def radial_order(n: int) -> np.ndarray:
    """Flat cell indices by distance to the centre, then row, then column."""
    k = 2 * np.arange(n) - (n - 1)
    d2 = (k[np.newaxis, :] ** 2 + k[:, np.newaxis] ** 2).ravel()
    rows, cols = np.divmod(np.arange(n * n), n)
    order = np.lexsort((cols, rows, d2))
    order.setflags(write=False)
    return order


def rearrange_radial(f: GridFunction) -> GridFunction:
    """Discrete symmetric decreasing rearrangement: largest values nearest the origin."""
    desc = np.sort(f.values, axis=None)[::-1]
    out = np.empty(f.values.size)
    out[radial_order(f.resolution)] = desc
    return f.with_values(out.reshape(f.values.shape))


def shell_average(f: GridFunction) -> GridFunction:
    """Replace each value by the mean over its shell of equidistant cells.

    The result depends on the cell only through its distance to the origin.
    """
    n = f.resolution
    k = 2 * np.arange(n) - (n - 1)
    d2 = (k[np.newaxis, :] ** 2 + k[:, np.newaxis] ** 2).ravel()
    _, shell = np.unique(d2, return_inverse=True)
    means = np.bincount(shell, f.values.ravel()) / np.bincount(shell)
    return f.with_values(means[shell].reshape(n, n))


@dataclass(frozen=True)
class RadialProfile:
    """Values along the radial fill order, with each cell's distance to the origin."""

    distance: np.ndarray
    values: np.ndarray


def radial_profile(f: GridFunction) -> RadialProfile:
    order = radial_order(f.resolution)
    c = f.centers
    r = np.sqrt(c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2).ravel()[order]
    return RadialProfile(r, f.values.ravel()[order])


def angular_spectrum(f: GridFunction, n_rings: int = 64, n_samples: int = 256):
    """Ring radii and squared angular Fourier magnitudes ``|a_m(r)|^2``.

    Returns ``(radii, power)`` with ``power`` of shape ``(n_rings, n_samples)``;
    column ``m`` holds mode ``m`` (negative modes wrap around as in numpy's FFT).
    """
    if n_rings < 1:
        raise ValueError("n_rings must be positive")
    if n_samples < 8 or n_samples & (n_samples - 1):
        raise ValueError("n_samples must be a power of two >= 8")
    dr = f.half_width / math.sqrt(2.0) / n_rings
    radii = dr * np.arange(1, n_rings + 1)
    phi = 2.0 * np.pi * np.arange(n_samples) / n_samples
    xs = radii[:, np.newaxis] * np.cos(phi)[np.newaxis, :]
    ys = radii[:, np.newaxis] * np.sin(phi)[np.newaxis, :]
    ring = kernels.bilinear_sample(f.values, xs, ys, f.spacing)
    coeffs = np.fft.fft(ring, axis=1) / n_samples
    return radii, np.abs(coeffs) ** 2


def nonradial_energy(f: GridFunction, n_rings: int = 64, n_samples: int = 256) -> float:
    """Quadrature of the energy in all nonzero angular modes over the disk of radius L/sqrt(2)."""
    radii, power = angular_spectrum(f, n_rings, n_samples)
    dr = radii[0]
    per_ring = power[:, 1:].sum(axis=1)
    return float(np.sum(per_ring * 2.0 * np.pi * radii * dr))


def spectral_energy(f: GridFunction, n_rings: int = 64, n_samples: int = 256) -> float:
    """Same quadrature as :func:`nonradial_energy` but including the radial mode."""
    radii, power = angular_spectrum(f, n_rings, n_samples)
    return float(np.sum(power.sum(axis=1) * 2.0 * np.pi * radii * radii[0]))
