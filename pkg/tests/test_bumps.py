import numpy as np
import pytest

from wmult.bumps import (
    BumpConstructionError,
    check_moments,
    make_annular_cutoff,
    make_moment_vanishing_bump,
    make_wide_bump,
    smoothstep,
)
from wmult.grid import (
    GridSpec,
    SampledFunction,
    forward_ft,
    frequency_integral,
    fsum,
)

R_DEFAULT = 0.05  # 1/(10 N) with N = 2


@pytest.fixture(scope="module")
def bump(ctx):
    return ctx.bump


def test_moments_vanish_order_zero(bump):
    # int phi_hat = int of an exact Laplacian over its support: zero
    assert check_moments(bump) <= 1e-10


def test_support_exactly_inside_ball(bump):
    outside = bump.spec.radius_xi > bump.r
    assert np.abs(bump.phi_hat.values[outside]).max() == 0.0
    inside = bump.spec.radius_xi <= 0.9 * bump.r
    assert np.abs(bump.phi_hat.values[inside]).max() > 0.0


def test_phiphi0_against_grid_quadrature(bump):
    # independent oracle: (2 pi)^{-d} int phi_hat^2 on the frequency grid
    sq = bump.phi_hat.with_values(bump.phi_hat.values ** 2)
    oracle = frequency_integral(sq).real / (2 * np.pi) ** bump.dim
    assert abs(bump.phiphi0 - oracle) <= 1e-10
    assert abs(bump.phiphi0) > 1e-6


def test_moments_vanish_order_two():
    # the higher-order profile concentrates at the support edge and its
    # physical side decays slowly, so it needs the wider box
    spec = GridSpec(1, 262144.0, 1 << 19)
    b2 = make_moment_vanishing_bump(R_DEFAULT, 2, spec)
    assert check_moments(b2) <= 1e-8
    assert abs(b2.phiphi0) > 1e-6


def test_seed_alone_has_nonzero_integral(bump):
    # without the Laplacian the (normalized) mollifier integrates to
    # something of definite sign, well above the moment tolerance
    spec = bump.spec
    g = bump.seed_eval(spec.radius_xi)
    g = g / g.max()
    integral = fsum(g) * spec.dxi
    assert abs(integral) > 0.01


def test_growth_bound_near_origin(bump):
    # |phi(x)| <= C |x|^{l+1} for |x| <= 1; C frozen from the measured
    # constant of the construction (1.14e-6 for the default bump)
    spec = bump.spec
    mask = (spec.radius_x <= 1.0) & (spec.radius_x > 0)
    ratio = np.abs(bump.phi.values[mask]) / spec.radius_x[mask] ** (bump.ell + 1)
    assert ratio.max() <= 2e-6


def test_analytic_phi_matches_grid(bump):
    sel = np.arange(0, bump.spec.points_per_axis, 64)
    analytic = bump.phi_eval(bump.spec.axis_x[sel])
    assert np.abs(analytic - bump.phi.values[sel].real).max() <= 1e-9


def test_forward_ft_of_analytic_phi_matches_construction():
    # cross-representation oracle on a box where truncation and aliasing
    # sit below the tolerance
    spec = GridSpec(1, 32768.0, 1 << 16)
    b = make_moment_vanishing_bump(R_DEFAULT, 0, spec)
    sampled = SampledFunction(spec, b.phi_eval(spec.axis_x).astype(complex))
    transformed = forward_ft(sampled)
    assert np.abs(transformed.values - b.phi_hat.values).max() <= 1e-7


def test_under_resolved_grid_rejected():
    spec = GridSpec(1, 64.0, 256)  # dxi ~ 0.098, one sample across the ball
    with pytest.raises(BumpConstructionError):
        make_moment_vanishing_bump(R_DEFAULT, 0, spec)


def test_invalid_parameters_rejected(small1d):
    with pytest.raises(BumpConstructionError):
        make_moment_vanishing_bump(-1.0, 0, small1d)
    with pytest.raises(BumpConstructionError):
        make_moment_vanishing_bump(0.05, -1, small1d)


def test_scaled_bump_tables(bump):
    doubled = bump.scaled(2.0)
    assert np.abs(doubled.phi_hat.values - 2 * bump.phi_hat.values).max() == 0.0
    assert doubled.phiphi0 == pytest.approx(4 * bump.phiphi0, rel=1e-13)
    y = np.array([0.0, 3.0, 17.0])
    assert doubled.conv_at(y) == pytest.approx(4 * bump.conv_at(y), rel=1e-12)


def test_bump_2d_moments_and_support():
    # box sized so the slowly decaying physical side aliases below 1e-10
    spec = GridSpec(2, 32768.0, 2048)
    b = make_moment_vanishing_bump(R_DEFAULT, 0, spec)
    assert check_moments(b) <= 1e-10
    outside = spec.radius_xi > b.r
    assert np.abs(b.phi_hat.values[outside]).max() == 0.0
    sq = b.phi_hat.with_values(b.phi_hat.values ** 2)
    oracle = frequency_integral(sq).real / (2 * np.pi) ** 2
    assert abs(b.phiphi0 - oracle) <= 1e-10
    # radial analytic evaluator against grid samples along the x2 axis
    xs = np.array([16.0, 64.0, 256.0])
    idx = [int(np.argmin(np.abs(spec.axis_x - x))) for x in xs]
    grid_vals = np.array([b.phi.values[spec.points_per_axis // 2, i].real for i in idx])
    assert np.abs(b.phi_eval(xs) - grid_vals).max() <= 1e-12


# --- annular cutoff ----------------------------------------------------------


def test_smoothstep_plateaus():
    assert smoothstep(np.array([-1.0, 0.0])).tolist() == [1.0, 1.0]
    assert smoothstep(np.array([1.0, 2.0])).tolist() == [0.0, 0.0]
    mid = smoothstep(np.array([0.5]))[0]
    assert 0.0 < mid < 1.0


def test_cutoff_flat_at_unit_radius():
    psi = make_annular_cutoff(0.05)
    assert psi(np.array([1.0]))[0] == 1.0


def test_cutoff_vanishes_at_two():
    psi = make_annular_cutoff(0.05)
    assert psi(np.array([2.0]))[0] == 0.0
    psi_wide = make_annular_cutoff(0.24)
    assert psi_wide(np.array([2.0]))[0] == 0.0


def test_cutoff_flat_and_support_bands():
    psi = make_annular_cutoff(0.05)
    rho = np.linspace(psi.flat_lo, psi.flat_hi, 1001)
    assert np.all(psi(rho) == 1.0)
    assert np.all(psi(np.linspace(0.01, psi.support_lo, 500)) == 0.0)
    assert np.all(psi(np.linspace(psi.support_hi, 8.0, 500)) == 0.0)


def test_cutoff_telescoping_partition():
    psi = make_annular_cutoff(0.05)
    rng = np.random.default_rng(11)
    rho = np.exp(rng.uniform(np.log(2.0 ** -8), np.log(2.0 ** 8), size=100))
    total = np.zeros_like(rho)
    for k in range(-10, 11):
        total += psi(rho / 2.0 ** k)
    assert np.abs(total - 1.0).max() <= 1e-12


def test_cutoff_gamma_range():
    with pytest.raises(ValueError):
        make_annular_cutoff(0.0)
    with pytest.raises(ValueError):
        make_annular_cutoff(0.3)


# --- wide bump ---------------------------------------------------------------


def test_wide_bump_plateau_and_support(bump):
    psi_hat = make_wide_bump(bump.r)
    assert psi_hat(np.array([0.0]))[0] == 1.0
    assert psi_hat(np.array([3 * bump.r]))[0] == 0.0
    # exactly 1 on the support of phi_hat, so their product is phi_hat
    vals = psi_hat(bump.spec.radius_xi)
    product = vals * bump.phi_hat.values
    assert np.abs(product - bump.phi_hat.values).max() == 0.0


def test_wide_bump_rejects_bad_radius():
    with pytest.raises(ValueError):
        make_wide_bump(0.0)
