import numpy as np
import pytest

from wmult.grid import (
    GridError,
    GridSpec,
    NonIntegrableWeightError,
    SampledFunction,
    SideMismatchError,
    cell_boundaries,
    forward_ft,
    fsum,
    inverse_ft,
    power_cell_weights,
    power_weighted_quadrature,
    quadrature_integral,
    tail_mass,
)


def test_spec_geometry(small1d):
    assert small1d.h == pytest.approx(32.0 / 512)
    assert small1d.dxi == pytest.approx(2 * np.pi / 32.0)
    assert small1d.axis_x[0] == -16.0
    assert small1d.axis_x[256] == 0.0
    assert small1d.axis_xi[256] == 0.0


def test_spec_validation():
    with pytest.raises(GridError):
        GridSpec(3, 8.0, 64)
    with pytest.raises(GridError):
        GridSpec(1, 8.0, 100)  # not a power of two
    with pytest.raises(GridError):
        GridSpec(1, -1.0, 64)
    with pytest.raises(GridError):
        GridSpec(2, 8.0, 8192)  # 8192^2 over the sample budget


def test_samples_must_be_finite(small1d):
    bad = np.zeros(512)
    bad[3] = np.nan
    with pytest.raises(GridError):
        SampledFunction(small1d, bad)


def test_forward_ft_gaussian(small1d, gaussian):
    # closed form: the FT of e^{-x^2/2} is sqrt(2 pi) e^{-xi^2/2}
    got = forward_ft(gaussian)
    expected = np.sqrt(2 * np.pi) * np.exp(-small1d.axis_xi ** 2 / 2.0)
    assert np.abs(got.values - expected).max() <= 1e-8


def test_forward_ft_zero(small1d):
    zero = SampledFunction(small1d, np.zeros(512, complex))
    assert np.abs(forward_ft(zero).values).max() == 0.0


def test_forward_ft_linearity(small1d, gaussian):
    rng = np.random.default_rng(7)
    g = SampledFunction(small1d, rng.standard_normal(512) + 1j * rng.standard_normal(512))
    a, b = 2.0 - 1.0j, -0.5 + 3.0j
    combo = SampledFunction(small1d, a * gaussian.values + b * g.values)
    lhs = forward_ft(combo).values
    rhs = a * forward_ft(gaussian).values + b * forward_ft(g).values
    assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(rhs).max()


def test_ft_round_trip(small1d, gaussian):
    # frequency support well inside the Nyquist band
    back = inverse_ft(forward_ft(gaussian))
    assert np.abs(back.values - gaussian.values).max() <= 1e-10


def test_inverse_ft_gaussian_pair(small1d):
    F = SampledFunction(
        small1d,
        (np.sqrt(2 * np.pi) * np.exp(-small1d.axis_xi ** 2 / 2)).astype(complex),
        "frequency",
    )
    got = inverse_ft(F)
    expected = np.exp(-small1d.axis_x ** 2 / 2.0)
    assert np.abs(got.values - expected).max() <= 1e-8


def test_inverse_ft_zero(small1d):
    zero = SampledFunction(small1d, np.zeros(512, complex), "frequency")
    assert np.abs(inverse_ft(zero).values).max() == 0.0


def test_side_mismatch(small1d, gaussian):
    with pytest.raises(SideMismatchError):
        inverse_ft(gaussian)
    with pytest.raises(SideMismatchError):
        forward_ft(forward_ft(gaussian))


def test_plancherel(small1d, gaussian):
    lhs = quadrature_integral(
        gaussian.with_values(np.abs(gaussian.values) ** 2)
    ).real
    F = forward_ft(gaussian)
    rhs = fsum(np.abs(F.values) ** 2) * small1d.dxi / (2 * np.pi)
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


def test_quadrature_constant():
    spec = GridSpec(1, 4.0, 64)
    one = SampledFunction(spec, np.ones(64, complex))
    assert quadrature_integral(one).real == pytest.approx(4.0, abs=0.0)


def test_quadrature_gaussian(small1d):
    f = SampledFunction(small1d, np.exp(-small1d.axis_x ** 2).astype(complex))
    assert abs(quadrature_integral(f).real - np.sqrt(np.pi)) <= 1e-10


def test_quadrature_odd(small1d):
    f = SampledFunction(
        small1d, (small1d.axis_x * np.exp(-small1d.axis_x ** 2)).astype(complex)
    )
    assert abs(quadrature_integral(f)) <= 1e-12


def test_cell_boundaries_tile_box(small1d):
    edges = cell_boundaries(small1d)
    assert edges[0] == -16.0 and edges[-1] == 16.0
    assert fsum(np.diff(edges)) == pytest.approx(32.0, abs=1e-12)
    # every node lies inside its cell
    assert np.all(edges[:-1] <= small1d.axis_x)
    assert np.all(small1d.axis_x < edges[1:] + 1e-15)


def test_power_weighted_inverse_sqrt_exact():
    # 2 * int_0^1 x^{-1/2} dx = 4, telescoping exactly over the cells
    spec = GridSpec(1, 2.0, 256)
    one = SampledFunction(spec, np.ones(256, complex))
    assert power_weighted_quadrature(one, -0.5) == pytest.approx(4.0, abs=1e-12)


def test_power_weighted_linear_exact():
    spec = GridSpec(1, 2.0, 256)
    one = SampledFunction(spec, np.ones(256, complex))
    assert power_weighted_quadrature(one, 1.0) == pytest.approx(1.0, abs=1e-13)


def test_power_weighted_a0_reduces_to_plain(small1d, gaussian):
    weighted = power_weighted_quadrature(gaussian, 0.0)
    plain = quadrature_integral(gaussian.with_values(np.abs(gaussian.values))).real
    assert abs(weighted - plain) <= 1e-12


def test_power_weighted_rejects_nonintegrable(small1d, gaussian):
    with pytest.raises(NonIntegrableWeightError):
        power_weighted_quadrature(gaussian, -1.0)
    with pytest.raises(NonIntegrableWeightError):
        power_cell_weights(small1d, -1.5)


def test_power_weighted_vanishing_origin():
    # x^2 gaussian vanishes at 0, so the |x|^{-1.25} weight is usable;
    # oracle: int x^2 e^{-x^2} |x|^{-1.25} dx = Gamma(7/8)
    from scipy.special import gamma

    exact = gamma(0.875)
    fine = GridSpec(1, 32.0, 1 << 15)
    vals_f = fine.axis_x ** 2 * np.exp(-fine.axis_x ** 2)
    got = power_weighted_quadrature(
        SampledFunction(fine, vals_f.astype(complex)), -1.25, vanishing_origin=True
    )
    assert got == pytest.approx(exact, rel=1e-5)
    # a non-vanishing sample at the origin is rejected
    with pytest.raises(NonIntegrableWeightError):
        power_weighted_quadrature(
            SampledFunction(fine, np.ones(fine.points_per_axis, complex)),
            -1.25,
            vanishing_origin=True,
        )


def test_power_weighted_monotone_and_homogeneous(small1d, gaussian):
    bigger = gaussian.with_values(np.abs(gaussian.values) + 0.5)
    assert power_weighted_quadrature(bigger, 0.5) > power_weighted_quadrature(
        gaussian, 0.5
    )
    assert power_weighted_quadrature(
        gaussian.with_values(3.0 * gaussian.values), 0.5
    ) == pytest.approx(3.0 * power_weighted_quadrature(gaussian, 0.5), rel=1e-13)


def test_tail_mass(small1d, gaussian):
    # gaussian mass beyond |x| > 8 is ~ erfc(8/sqrt(2)), essentially zero
    assert tail_mass(gaussian) <= 1e-13
    spread = SampledFunction(small1d, np.ones(512, complex))
    # measure of [-16,16] minus [-8,8], up to one cell per boundary
    assert tail_mass(spread) == pytest.approx(16.0, abs=3 * small1d.h)


# --- two-dimensional checks -------------------------------------------------


def test_forward_ft_gaussian_2d():
    spec = GridSpec(2, 16.0, 128)
    xx, yy = spec.mesh_x()
    f = SampledFunction(spec, np.exp(-(xx ** 2 + yy ** 2) / 2).astype(complex))
    got = forward_ft(f)
    ex, ey = spec.mesh_xi()
    expected = 2 * np.pi * np.exp(-(ex ** 2 + ey ** 2) / 2)
    assert np.abs(got.values - expected).max() <= 1e-8
    back = inverse_ft(got)
    assert np.abs(back.values - f.values).max() <= 1e-10


def test_power_weights_2d_area_exact():
    spec = GridSpec(2, 4.0, 64)
    w = power_cell_weights(spec, 0.0)
    assert fsum(w) == pytest.approx(16.0, rel=1e-12)


def test_power_weighted_2d_radial_gaussian():
    # int e^{-|x|^2} |x| dx over R^2 = pi^{3/2} / 2
    spec = GridSpec(2, 16.0, 256)
    xx, yy = spec.mesh_x()
    f = SampledFunction(spec, np.exp(-(xx ** 2 + yy ** 2)).astype(complex))
    got = power_weighted_quadrature(f, 1.0)
    assert got == pytest.approx(np.pi ** 1.5 / 2.0, rel=2e-3)


def test_power_weighted_2d_singular():
    # int e^{-|x|^2} |x|^{-1/2} dx = 2 pi int r^{1/2} e^{-r^2} dr = pi Gamma(3/4)
    from scipy.special import gamma

    spec = GridSpec(2, 16.0, 256)
    xx, yy = spec.mesh_x()
    f = SampledFunction(spec, np.exp(-(xx ** 2 + yy ** 2)).astype(complex))
    got = power_weighted_quadrature(f, -0.5)
    assert got == pytest.approx(np.pi * gamma(0.75), rel=5e-3)
