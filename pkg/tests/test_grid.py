import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from steinervdc.angles import DyadicAngle, vdc_angle
from steinervdc.calibration import pinned
from steinervdc.grid import (
    GridFunction,
    SupportError,
    gauss_functional,
    nonradial_energy,
    radial_order,
    radial_profile,
    rearrange_radial,
    rotate,
    sample,
    shell_average,
    spectral_energy,
    steiner_direction,
    steiner_vertical,
    sup_distance,
    support_radius,
)
from steinervdc.inputs import builtin, random_grid

QUARTER = DyadicAngle(1, 2)
ANGLES = [DyadicAngle(0, 0), QUARTER, DyadicAngle(1, 3), DyadicAngle(3, 3)]


def grids(max_n=9):
    """Small grids with support inside the disk of radius L/sqrt(2)."""

    def build(args):
        vals, L = args
        g = GridFunction(vals, L)
        c = g.centers
        inside = c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2 <= 0.5 * L * L
        return GridFunction(vals * inside, L)

    elem = st.floats(0, 100, allow_nan=False)
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(arrays(np.float64, (n, n), elements=elem), st.sampled_from([1.0, 2.0]))
    ).map(build)


def grid_pairs(max_n=9):
    elem = st.floats(0, 100, allow_nan=False)

    def build(args):
        a, b = args
        n = a.shape[0]
        c = (2.0 * np.arange(n) - (n - 1)) * (1.0 / n)
        inside = c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2 <= 0.5
        return GridFunction(a * inside, 1.0), GridFunction(b * inside, 1.0)

    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(arrays(np.float64, (n, n), elements=elem), arrays(np.float64, (n, n), elements=elem))
    ).map(build)


# -- construction and sampling -------------------------------------------------

def test_sample_examples():
    z = sample(lambda x, y: 0 * x, 8, 1.0)
    assert not z.values.any()
    one = sample(lambda x, y: np.ones_like(x), 2, 1.0)
    assert one.values.tolist() == [[1.0, 1.0], [1.0, 1.0]]
    assert one.mass == 4.0


def test_sample_cell_centres():
    g = sample(lambda x, y: 10 * (x + 2) + (y + 2), 4, 2.0)
    # row 0 is lowest y, column 0 lowest x; centres at -1.5, -0.5, 0.5, 1.5
    assert g.values[0, 0] == pytest.approx(10 * 0.5 + 0.5)
    assert g.values[3, 0] == pytest.approx(10 * 0.5 + 3.5)
    assert g.values[0, 3] == pytest.approx(10 * 3.5 + 0.5)


@pytest.mark.parametrize("bad", [-1.0, np.nan, np.inf])
def test_sample_rejects_bad_values_naming_cell(bad):
    def fn(x, y):
        out = np.ones_like(x)
        out[2, 1] = bad
        return out

    with pytest.raises(ValueError, match=r"row=2, col=1"):
        sample(fn, 4, 1.0)


def test_gridfunction_validation():
    with pytest.raises(ValueError):
        GridFunction(np.ones((2, 3)), 1.0)
    with pytest.raises(ValueError):
        GridFunction(np.ones((2, 2)), 0.0)
    g = GridFunction(np.ones((2, 2)), 1.0)
    with pytest.raises(ValueError):
        g.values[0, 0] = 3.0


def test_centres_symmetric():
    c = GridFunction(np.zeros((7, 7)), 1.3).centers
    assert np.array_equal(c, -c[::-1])


# -- sup distance ----------------------------------------------------------------

def test_sup_distance_examples(bump128):
    assert sup_distance(bump128, bump128) == 0.0
    z = GridFunction(np.zeros((4, 4)), 1.0)
    c = GridFunction(np.full((4, 4), 2.5), 1.0)
    assert sup_distance(z, c) == 2.5
    base = sup_distance(bump128, rearrange_radial(bump128))
    assert base > 0.5


def test_sup_distance_incompatible():
    with pytest.raises(ValueError, match="incompatible"):
        sup_distance(GridFunction(np.zeros((4, 4)), 1.0), GridFunction(np.zeros((4, 4)), 2.0))
    with pytest.raises(ValueError):
        sup_distance(GridFunction(np.zeros((4, 4)), 1.0), GridFunction(np.zeros((5, 5)), 1.0))


# -- Gaussian functional -----------------------------------------------------------

def test_gauss_functional_zero():
    assert gauss_functional(GridFunction(np.zeros((16, 16)), 2.0)) == 0.0


def test_gauss_functional_constant_approximates_pi():
    # the integral of exp(-|z|^2) over the plane is pi
    g = GridFunction(np.ones((256, 256)), 4.0)
    assert abs(gauss_functional(g) - math.pi) <= 1e-3


def test_gauss_functional_matches_plain_quadrature(bump64):
    c = bump64.centers
    w = np.exp(-(c[np.newaxis, :] ** 2 + c[:, np.newaxis] ** 2))
    plain = bump64.spacing**2 * math.fsum((bump64.values * w).ravel().tolist())
    assert gauss_functional(bump64) == pytest.approx(plain, rel=1e-13)


@given(grids())
def test_gauss_functional_quarter_turn_bit_exact(f):
    j = gauss_functional(f)
    g = f
    for _ in range(3):
        g = rotate(g, QUARTER)
        assert gauss_functional(g) == j


# -- vertical Steiner symmetrization --------------------------------------------------

def test_steiner_vertical_examples():
    z = GridFunction(np.zeros((4, 4)), 1.0)
    assert steiner_vertical(z) == z
    vals = np.zeros((4, 4))
    vals[:, 1] = [0, 1, 2, 3]
    out = steiner_vertical(GridFunction(vals, 1.0))
    assert out.values[:, 1].tolist() == [1, 3, 2, 0]
    assert not np.delete(out.values, 1, axis=1).any()


def test_steiner_vertical_fixes_symmetric_decreasing_columns():
    f = builtin("square", 64)
    assert steiner_vertical(f) == f


@given(grids())
def test_steiner_vertical_column_multisets_and_mass(f):
    g = steiner_vertical(f)
    for j in range(f.resolution):
        assert Counter(g.values[:, j].tolist()) == Counter(f.values[:, j].tolist())
    assert g.mass == f.mass
    assert steiner_vertical(g) == g


@given(grids())
def test_j_ascent_vertical_exact(f):
    assert gauss_functional(steiner_vertical(f)) >= gauss_functional(f)


# -- rotation -----------------------------------------------------------------------

def test_rotate_zero_is_identity(bump64):
    assert rotate(bump64, DyadicAngle(0, 0)) == bump64


def test_rotate_quarter_orientation():
    vals = np.zeros((4, 4))
    vals[1, 3] = 1.0  # point on the positive x side, just below the x axis
    out = rotate(GridFunction(vals, 1.0), QUARTER)
    # counter-clockwise by 90 degrees sends (x, y) to (-y, x)
    assert out.values[3, 2] == 1.0
    assert out.values.sum() == 1.0


@given(grids())
def test_rotate_quarter_four_times_identity(f):
    g = f
    for _ in range(4):
        g = rotate(g, QUARTER)
    assert g == f
    assert rotate(rotate(f, DyadicAngle(1, 1)), DyadicAngle(1, 1)) == f


def test_rotate_matches_continuous_rotation():
    fn = lambda x, y: np.exp(-4 * ((x - 0.5) ** 2 + (y - 0.2) ** 2))  # noqa: E731
    f = sample(fn, 128, 2.0)
    a = DyadicAngle(1, 3)
    c, s = math.cos(a.radians), math.sin(a.radians)
    expected = sample(lambda x, y: fn(c * x + s * y, -s * x + c * y), 128, 2.0)
    assert sup_distance(rotate(f, a), expected) < 5e-3


def test_rotate_pi4_mass_drift(bump128):
    out = rotate(bump128, DyadicAngle(1, 3))
    assert abs(out.mass - bump128.mass) / bump128.mass <= pinned("rotate_mass_drift")


def test_rotate_renormalize(bump64):
    out = rotate(bump64, DyadicAngle(1, 3), renormalize=True)
    assert out.mass == pytest.approx(bump64.mass, rel=1e-12)


# -- directional Steiner symmetrization -----------------------------------------------------

def test_steiner_direction_zero_is_vertical(bump64):
    assert steiner_direction(bump64, DyadicAngle(0, 0)) == steiner_vertical(bump64)


def test_steiner_direction_quarter_equimeasurable(bump64):
    out = steiner_direction(bump64, QUARTER)
    assert np.array_equal(np.sort(out.values, axis=None), np.sort(bump64.values, axis=None))
    assert out.mass == bump64.mass


def test_steiner_direction_radial_input_is_nearly_fixed(bump128):
    target = rearrange_radial(bump128)
    tau = pinned("tau_interp", 128)
    for k in range(16):
        assert sup_distance(steiner_direction(target, vdc_angle(k)), target) <= tau


def test_steiner_direction_support_precondition():
    f = sample(lambda x, y: np.exp(-(x * x + y * y)), 32, 2.0)
    assert support_radius(f) > 2.0 / math.sqrt(2)
    with pytest.raises(SupportError):
        steiner_direction(f, DyadicAngle(1, 3))


# -- radial rearrangement -------------------------------------------------------------------

def test_rearrange_radial_zero():
    z = GridFunction(np.zeros((6, 6)), 1.0)
    assert rearrange_radial(z) == z


@pytest.mark.parametrize("n", [5, 6])
def test_rearrange_radial_single_cell(n):
    vals = np.zeros((n, n))
    vals[n - 1, 0] = 7.0
    out = rearrange_radial(GridFunction(vals, 1.0)).values
    first = radial_order(n)[0]
    assert out.ravel()[first] == 7.0
    assert out.sum() == 7.0
    # odd n: the centre cell; even n: lowest-row, lowest-column of the central four
    assert divmod(int(first), n) == ((n // 2, n // 2) if n % 2 else (n // 2 - 1, n // 2 - 1))


@given(grids())
def test_rearrange_radial_properties(f):
    g = rearrange_radial(f)
    assert Counter(g.values.ravel().tolist()) == Counter(f.values.ravel().tolist())
    assert g.mass == f.mass
    assert rearrange_radial(g) == g
    prof = radial_profile(g)
    assert np.all(np.diff(prof.values) <= 0)
    assert np.all(np.diff(prof.distance) >= 0)


# -- non-expansiveness ------------------------------------------------------------------------

@given(grid_pairs())
def test_non_expansive_exact_operators(pair):
    f, g = pair
    d = sup_distance(f, g)
    assert sup_distance(steiner_vertical(f), steiner_vertical(g)) <= d
    assert sup_distance(rearrange_radial(f), rearrange_radial(g)) <= d
    assert sup_distance(rotate(f, QUARTER), rotate(g, QUARTER)) <= d


@settings(deadline=None)
@given(grid_pairs(), st.sampled_from(ANGLES[2:]))
def test_non_expansive_interpolating_operators(pair, a):
    f, g = pair
    d = sup_distance(f, g)
    # bilinear weights form a convex sub-combination; allow only float rounding
    slack = 4 * np.finfo(float).eps * max(f.values.max(initial=0), g.values.max(initial=0))
    assert sup_distance(rotate(f, a), rotate(g, a)) <= d + slack
    assert sup_distance(steiner_direction(f, a), steiner_direction(g, a)) <= d + 2 * slack


# -- non-radial energy -------------------------------------------------------------------------

def test_nonradial_energy_radial_input_at_noise_floor():
    f = sample(lambda x, y: np.exp(-4 * (x * x + y * y)), 128, 2.0)
    assert nonradial_energy(f) <= 1e-6 * spectral_energy(f)


def test_nonradial_energy_separates_bump_from_target(bump128):
    floor = nonradial_energy(shell_average(rearrange_radial(bump128)))
    assert floor == pytest.approx(pinned("nonradial_floor", 128), rel=1e-9)
    assert nonradial_energy(rearrange_radial(bump128)) <= 10 * floor
    assert nonradial_energy(bump128) > 1e3 * floor


def test_nonradial_energy_zero_and_validation():
    z = GridFunction(np.zeros((16, 16)), 1.0)
    assert nonradial_energy(z) == 0.0
    with pytest.raises(ValueError):
        nonradial_energy(z, n_samples=12)
    with pytest.raises(ValueError):
        nonradial_energy(z, n_samples=4)
    with pytest.raises(ValueError):
        nonradial_energy(z, n_rings=0)


def test_nonradial_energy_single_mode():
    # cos(3 phi) modulation: all energy outside the radial mode sits in modes +-3
    f = sample(lambda x, y: np.exp(-(x * x + y * y)) * (1.5 + np.cos(3 * np.arctan2(y, x))), 256, 2.0)
    from steinervdc.grid import angular_spectrum

    _, power = angular_spectrum(f, 32, 64)
    other = np.delete(power, [0, 3, 61], axis=1).sum()
    assert other < 1e-3 * power[:, [3, 61]].sum()


def test_shell_average_is_radial(bump64):
    g = shell_average(bump64)
    assert g.mass == pytest.approx(bump64.mass, rel=1e-12)
    for k in range(4):
        assert rotate(g, DyadicAngle(k, 2)) == g


def test_random_grid_support():
    f = random_grid(0, 64)
    assert support_radius(f) <= f.half_width / math.sqrt(2)
    assert f.values.max() > 0.9


@given(grids(), st.sampled_from(ANGLES[2:]))
def test_rotate_never_raises_the_maximum(f, a):
    assert rotate(f, a).values.max() <= f.values.max()
