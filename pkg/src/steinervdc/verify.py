"""Invariant suites run by ``steinervdc verify``.

Each check returns ``(name, passed, kind)`` where ``kind`` says whether the
comparison was exact or against a pinned tolerance. Seeds are fixed.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .angles import DyadicAngle, discrepancy, gap, vdc_angle, vdc_prefix
from .calibration import pinned
from .experiment import DirectionSequence, gap_recursion_check, iterate
from .grid import (
    gauss_functional,
    rearrange_radial,
    rotate,
    steiner_direction,
    steiner_vertical,
    sup_distance,
)
from .inputs import builtin, random_grid
from .rearrange import exact_dot, placement_rank, rearrange_1d

SUITES = ("angles", "rearrange", "grid", "experiment")
TEST_ANGLES = (DyadicAngle(0, 0), DyadicAngle(1, 2), DyadicAngle(1, 3), DyadicAngle(3, 3))


def _angles():
    yield "gap-selfsimilarity j<=12", all(
        gap((1 << j) + n) == gap(n) for j in range(1, 13) for n in range(1, 1 << j)
    ), "exact"
    yield "gap-power-of-two j<=30", all(
        (gap(1 << j) - math.ldexp(3, -(j + 1))) % 1 == 0 for j in range(1, 31)
    ), "exact"
    yield "vdc-canonical n<4096", all(
        DyadicAngle.from_fraction(vdc_angle(n).turns) == vdc_angle(n) for n in range(4096)
    ), "exact"
    ok = True
    for n_pts in range(1, 65):
        pts = vdc_prefix(n_pts)
        res = discrepancy(pts)
        ok &= res.witness_arc.deviation(pts) == res.value and 0 <= res.value <= 1
    yield "discrepancy-witness N<=64", ok, "exact"
    const = pinned("discrepancy_constant")
    yield "discrepancy-trend N=2^4..2^12", all(
        n * float(discrepancy(vdc_prefix(n)).value) / math.log2(n + 1) <= const
        for n in (1 << k for k in range(4, 13))
    ), "pinned"


def _rearrange():
    rng = np.random.default_rng(0)
    vectors = [rng.random(m) * rng.integers(0, 2, m) for m in rng.integers(0, 40, 200)]
    yield "multiset", all(Counter(rearrange_1d(v).tolist()) == Counter(v.tolist()) for v in vectors), "exact"
    yield "idempotent", all(np.array_equal(rearrange_1d(rearrange_1d(v)), rearrange_1d(v)) for v in vectors), "exact"
    ok = True
    for v in vectors:
        w = rng.random(v.size)
        if v.size:
            ok &= np.max(np.abs(rearrange_1d(v) - rearrange_1d(w))) <= np.max(np.abs(v - w))
    yield "non-expansive", bool(ok), "exact"
    ok = True
    for v in vectors:
        m = v.size
        u = np.exp(-(((2 * np.arange(m) - (m - 1)) * 0.05) ** 2))
        # weights symmetric decreasing under the same placement pattern
        u = np.sort(u)[::-1][placement_rank(m)]
        ok &= exact_dot(rearrange_1d(v), u) >= exact_dot(v, u)
    yield "weighted-gain", bool(ok), "exact"


def _grid():
    grids = [random_grid(seed, 64) for seed in range(20)]
    ok = True
    for f in grids:
        for g in (steiner_vertical(f), rearrange_radial(f)):
            ok &= np.array_equal(np.sort(g.values, axis=None), np.sort(f.values, axis=None)) and g.mass == f.mass
    yield "equimeasurable", bool(ok), "exact"
    ok = True
    for f, g in zip(grids[::2], grids[1::2]):
        d = sup_distance(f, g)
        ok &= sup_distance(steiner_vertical(f), steiner_vertical(g)) <= d
        ok &= sup_distance(rearrange_radial(f), rearrange_radial(g)) <= d
        for a in TEST_ANGLES:
            ok &= sup_distance(rotate(f, a), rotate(g, a)) <= d
            ok &= sup_distance(steiner_direction(f, a), steiner_direction(g, a)) <= d
    yield "non-expansive", bool(ok), "exact"
    yield "J-ascent angle 0", all(gauss_functional(steiner_vertical(f)) >= gauss_functional(f) for f in grids), "exact"
    eps = pinned("eps_J", 64)
    yield "J-ascent angles 1/8,3/8", all(
        gauss_functional(steiner_direction(f, a)) >= gauss_functional(f) - eps
        for f in grids
        for a in TEST_ANGLES[2:]
    ), "pinned"
    quarter = DyadicAngle(1, 2)
    yield "J-quarter-turn-invariant", all(
        gauss_functional(rotate(f, quarter)) == gauss_functional(f) for f in grids
    ), "exact"
    ok = True
    for f in grids:
        g = f
        for _ in range(4):
            g = rotate(g, quarter)
        ok &= g == f
        s = steiner_vertical(f)
        r = rearrange_radial(f)
        ok &= steiner_vertical(s) == s and rearrange_radial(r) == r
    yield "fixed-points", bool(ok), "exact"


def _experiment():
    vdc = DirectionSequence.van_der_corput()
    bump = builtin("bump", 64)
    a, fa = iterate(bump, vdc, 16)
    b, fb = iterate(bump, vdc, 16)
    same = fa == fb and all(
        (r.distance, r.J, r.mass_drift, r.nonradial_energy) == (s.distance, s.J, s.mass_drift, s.nonradial_energy)
        for r, s in zip(a.rows, b.rows)
    )
    yield "deterministic", bool(same), "exact"
    j = a.column("J")
    yield "J-ascent per step", bool(np.all(j[1:] >= j[:-1] - pinned("eps_J", 64))), "pinned"
    target = rearrange_radial(builtin("bump", 128))
    rep, _ = iterate(target, vdc, 64)
    yield "target-stationary", bool(rep.column("distance").max() <= pinned("radial_drift", 128)), "pinned"
    square = builtin("square", 128)
    cycle = DirectionSequence.fixed_cycle([DyadicAngle(0, 0), DyadicAngle(1, 2)])
    rep, _ = iterate(square, cycle, 32)
    d = rep.column("distance")
    yield "negative-control", bool(np.all(d[3:] >= 0.5 * d[0])), "pinned"
    yield "gap-recursion j=3 n=1", gap_recursion_check(builtin("bump", 128), 3, 1), "pinned"


_REGISTRY = {"angles": _angles, "rearrange": _rearrange, "grid": _grid, "experiment": _experiment}


def run_suite(name: str):
    """Yield ``(suite, check, passed, kind)`` for suite ``name`` or ``all``."""
    names = SUITES if name == "all" else (name,)
    for suite in names:
        if suite not in _REGISTRY:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    for suite in names:
        for check, passed, kind in _REGISTRY[suite]():
            yield suite, check, bool(passed), kind
