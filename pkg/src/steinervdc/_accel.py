"""Backend selection for the numeric kernels.

Set ``STEINERVDC_BACKEND=numpy`` to force the pure-numpy path. Any other value
(or leaving it unset) uses numba when it is importable.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
BACKEND = "numba" if HAVE_NUMBA and os.environ.get("STEINERVDC_BACKEND", "numba").lower() != "numpy" else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, identity decorator otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, cache=True, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn
