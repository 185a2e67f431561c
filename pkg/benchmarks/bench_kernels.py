"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--resolution 128] [--repeat 5]

Both backends produce identical arrays; this only measures speed.
"""

import argparse
import math
import time

import numpy as np

from steinervdc import _accel
from steinervdc.experiment import DirectionSequence, iterate
from steinervdc.grid import radial_order
from steinervdc.inputs import builtin
from steinervdc.kernels import rearrange_columns, rotate_bilinear
from steinervdc.rearrange import placement_rank


def best_of(fn, repeat):
    fn()  # warm-up (jit compile / caches)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolution", type=int, default=128)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--steps", type=int, default=32)
    args = ap.parse_args()

    f = builtin("bump", args.resolution)
    vals, h = np.asarray(f.values), f.spacing
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    rank = placement_rank(args.resolution)
    radial_order(args.resolution)

    rows = []
    for label, run in [
        ("rotate_bilinear", lambda b: rotate_bilinear(vals, h, c, s, backend=b)),
        ("rearrange_columns", lambda b: rearrange_columns(vals, rank, backend=b)),
    ]:
        rows.append((label, *(best_of(lambda: run(b), args.repeat) for b in ("numpy", "numba"))))

    def full(backend):
        saved = _accel.BACKEND
        _accel.BACKEND = backend
        try:
            iterate(f, DirectionSequence("van_der_corput"), args.steps)
        finally:
            _accel.BACKEND = saved

    rows.append((f"iterate x{args.steps}", *(best_of(lambda: full(b), max(1, args.repeat // 2))
                                            for b in ("numpy", "numba"))))

    print(f"n={args.resolution}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for label, t_np, t_nb in rows:
        print(f"{label:<20}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
