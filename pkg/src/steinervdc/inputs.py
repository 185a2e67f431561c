"""Built-in test inputs, so experiments run with no external files."""

import numpy as np

from .grid import GridFunction, sample

BUMP_CENTER = 0.7
BUMP_RADIUS = 1.2


def _taper(t, inner, outer):
    """1 on ``|t| <= inner``, raised-cosine falloff to 0 at ``|t| = outer``."""
    a = np.clip((np.abs(t) - inner) / (outer - inner), 0.0, 1.0)
    return 0.5 * (1.0 + np.cos(np.pi * a))


def bump_fn(x, y):
    """Off-centre Gaussian ``exp(-4|z - 0.7|^2)`` cut off outside ``|z| <= 1.2``."""
    val = np.exp(-4.0 * ((x - BUMP_CENTER) ** 2 + y**2))
    return np.where(x**2 + y**2 <= BUMP_RADIUS**2, val, 0.0)


def square_fn(x, y):
    """Product of two plateaus: fixed by both axis symmetrizations, not radial."""
    return _taper(x, 0.5, 1.0) * _taper(y, 0.5, 1.0)


def disk_fn(x, y):
    """Radial plateau of radius 0.6 fading out by radius 1.2."""
    return _taper(np.sqrt(x**2 + y**2), 0.6, 1.2)


BUILTINS = {"bump": bump_fn, "square": square_fn, "disk": disk_fn}


def builtin(name: str, resolution: int = 128, half_width: float = 2.0) -> GridFunction:
    try:
        fn = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None
    return sample(fn, resolution, half_width)


def random_grid(seed: int, resolution: int = 64, half_width: float = 2.0) -> GridFunction:
    """Uniform ``[0, 1)`` noise on the centred disk of radius ``L/sqrt(2)``, zero outside."""
    rng = np.random.default_rng(seed)
    c = (2.0 * np.arange(resolution) - (resolution - 1)) * (half_width / resolution)
    inside = c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2 <= 0.5 * half_width**2
    return GridFunction(rng.random((resolution, resolution)) * inside, half_width)
