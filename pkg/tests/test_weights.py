import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wmult.grid import NonIntegrableWeightError
from wmult.weights import (
    CubeFamily,
    ExponentConfig,
    InfeasibleConfigError,
    PowerWeightVector,
    ap_constant,
    choose_counterexample_exponents,
    choose_moment_order,
    class_expression,
    interval_power_integral,
    multilinear_constant,
    pq_class_constant,
    verify_lemma21,
)

P22 = (2.0, 2.0)


def _default_cfg(alpha1=-2.25, alpha2=0.5):
    return ExponentConfig(
        N=2, n=1, s=2.0, p_vec=P22, alpha1=alpha1, alpha2=alpha2,
        ell=0, r=0.05, gamma=0.05,
    )


# --- chooser -----------------------------------------------------------------


def test_chooser_default_midpoints():
    a1, a2 = choose_counterexample_exponents(2, 1, 2.0, P22)
    # alpha2 interval (0, 1), alpha1 interval (-2.5, -2)
    assert a2 == 0.5
    assert a1 == -2.25


def test_chooser_output_satisfies_all_inequalities():
    a1, a2 = choose_counterexample_exponents(2, 1, 2.0, P22)
    cfg = _default_cfg(a1, a2)
    cfg.validate_counterexample()  # raises on any violation
    assert a1 + a2 > -1.0 / cfg.p * 2  # alpha1 + alpha2 = -1.75 > -2
    assert a1 < -1 and a2 > -1


def test_chooser_rejects_low_regularity():
    with pytest.raises(InfeasibleConfigError, match=r"Nn/2 < s"):
        choose_counterexample_exponents(2, 1, 1.0, P22)


def test_chooser_rejects_small_p():
    with pytest.raises(InfeasibleConfigError, match=r"p_k > Nn/s"):
        choose_counterexample_exponents(2, 1, 2.0, (1.01, 2.0))


def test_generalized_chooser():
    a1, a2 = choose_counterexample_exponents(2, 1, (0.75, 1.0), P22)
    cfg = ExponentConfig(
        N=2, n=1, s=(0.75, 1.0), p_vec=P22, alpha1=a1, alpha2=a2,
        ell=0, r=0.05, gamma=0.05,
    )
    cfg.validate_counterexample()
    assert a1 == -2.0 and a2 == 0.5
    assert cfg.predicted_ratio_slope() == pytest.approx(-0.25)


def test_moment_order_chooser():
    assert choose_moment_order(2.0, -2.25, 1) == 0
    # stronger singularity needs a higher vanishing order
    assert choose_moment_order(2.0, -4.5, 1) == 1
    assert 2.0 * (choose_moment_order(2.0, -4.5, 1) + 1) - 4.5 > -1


@st.composite
def admissible_parameters(draw):
    N = draw(st.integers(2, 4))
    n = draw(st.integers(1, 2))
    nn = N * n
    s = draw(st.floats(nn / 2 * 1.05, nn, allow_nan=False))
    p_vec = tuple(
        draw(st.floats(nn / s * 1.05, 8.0, allow_nan=False)) for _ in range(N)
    )
    return N, n, s, p_vec


@settings(max_examples=50, deadline=None)
@given(admissible_parameters())
def test_chooser_property(params):
    N, n, s, p_vec = params
    a1, a2 = choose_counterexample_exponents(N, n, s, p_vec)
    cfg = ExponentConfig(
        N=N, n=n, s=s, p_vec=p_vec, alpha1=a1, alpha2=a2,
        ell=choose_moment_order(p_vec[0], a1, n), r=1.0 / (10 * N), gamma=0.05,
    )
    cfg.validate_counterexample()
    assert cfg.predicted_ratio_slope() < 0


# --- exact interval integrals ------------------------------------------------


def test_interval_power_integral_cases():
    # int over [0, 1] of x^{1/2} = 2/3, straddling [-1, 1] of |x|^{1/2} = 4/3
    assert interval_power_integral(0.5, 0.0, 1.0) == pytest.approx(2 / 3, abs=1e-15)
    assert interval_power_integral(0.5, -1.0, 1.0) == pytest.approx(4 / 3, abs=1e-15)
    # cutout removes the singular part: [delta, 1] of x^{-2}
    got = interval_power_integral(-2.0, -1.0, 1.0, delta=0.25)
    assert got == pytest.approx(2 * (4.0 - 1.0), abs=1e-12)
    # log case
    assert interval_power_integral(-1.0, 0.5, 2.0) == pytest.approx(
        math.log(4.0), abs=1e-14
    )


def test_ap_expression_on_half_open_interval():
    # A_2 expression of |x|^{1/2} over [0, r]: (2/3 sqrt(r)) * (2/sqrt(r)) = 4/3
    for r in (0.25, 1.0, 8.0):
        avg_w = interval_power_integral(0.5, 0.0, r) / r
        avg_dual = interval_power_integral(-0.5, 0.0, r) / r
        assert avg_w * avg_dual == pytest.approx(4 / 3, rel=1e-13)


# --- A_p constants -----------------------------------------------------------


def test_ap_constant_trivial_weight():
    report = ap_constant(0.0, 2.0)
    assert not report.divergent
    assert report.value == pytest.approx(1.0, abs=1e-13)


def test_ap_constant_origin_family_scale_invariant():
    report = ap_constant(0.5, 2.0, CubeFamily.origin_centered())
    assert not report.divergent
    assert report.value == pytest.approx(4 / 3, rel=1e-12)


def test_ap_constant_divergence_growth_factor():
    # |x|^{-2.25} sits outside A_2 (needs a > -1): the regularized origin
    # expression grows by 2^{1.25} per halving of the inner cutoff
    report = ap_constant(-2.25, 2.0, CubeFamily.origin_centered())
    assert report.divergent
    for g in report.growth_factors:
        assert abs(g - 2.0 ** 1.25) <= 0.01


def test_ap_constant_divergence_on_full_family():
    report = ap_constant(-2.25, 2.0)
    assert report.divergent
    assert min(report.growth_factors) >= 1.5


def test_ap_constant_requires_p_above_one():
    with pytest.raises(InfeasibleConfigError):
        ap_constant(0.5, 1.0)


# --- multilinear class constants ----------------------------------------------


def test_multilinear_constant_all_ones():
    w = PowerWeightVector(alphas=(0.0, 0.0), p_vec=P22)
    assert multilinear_constant(w, P22) == pytest.approx(1.0, abs=1e-13)


def test_multilinear_constant_origin_value():
    # exact: 8 sqrt(2 / 3.25) for (alpha1, alpha2) = (-2.25, 0.5), p = (2, 2)
    w = PowerWeightVector(alphas=(-2.25, 0.5), p_vec=P22)
    got = multilinear_constant(w, P22, CubeFamily.origin_centered())
    assert got == pytest.approx(8.0 * math.sqrt(2.0 / 3.25), abs=1e-9)


def test_multilinear_constant_scale_invariance():
    w = PowerWeightVector(alphas=(-2.25, 0.5), p_vec=P22)
    comps_family = CubeFamily.origin_centered()
    from wmult.weights import _multilinear_components

    expr = class_expression(_multilinear_components(w, P22), comps_family)
    assert expr.max() / expr.min() - 1.0 <= 1e-10


def test_multilinear_constant_off_origin_near_one():
    # far cubes see an essentially constant weight: expression within [1/2, 2]
    w = PowerWeightVector(alphas=(-2.25, 0.5), p_vec=P22)
    fam = CubeFamily.default()
    from wmult.weights import _multilinear_components

    centers, radii = fam.grids()
    expr = class_expression(_multilinear_components(w, P22), fam)
    off = centers >= 2.0 * radii
    assert expr[off].max() <= 2.0
    assert expr[off].min() >= 0.5


def test_multilinear_constant_stability_under_refinement():
    w = PowerWeightVector(alphas=(-2.25, 0.5), p_vec=P22)
    fam = CubeFamily.default()
    vals = [multilinear_constant(w, P22, fam.refine(k)) for k in range(3)]
    assert vals[1] / vals[0] <= 1.01
    assert vals[2] / vals[1] <= 1.01


def test_multilinear_constant_rejects_nonintegrable():
    w = PowerWeightVector(alphas=(-2.5, 0.0), p_vec=P22)  # a_nu = -1.25
    with pytest.raises(NonIntegrableWeightError):
        multilinear_constant(w, P22)


def test_multilinear_constant_2d_origin_value():
    # N = 2, n = 2, s = 3 with the chooser's weights; origin disks give an
    # exact closed form (2/(b+2) averages over disks)
    a1, a2 = choose_counterexample_exponents(2, 2, 3.0, P22)
    assert (a1, a2) == (-3.75, 0.5)
    q_vec = (1.5, 1.5)
    w = PowerWeightVector(alphas=(a1, a2), p_vec=P22)
    p = 0.75  # harmonic combination of (1.5, 1.5)
    a_nu = p * (a1 / 1.5 + a2 / 1.5)
    exponents = [(a_nu, 1.0 / p)]
    for ak, qk in zip((a1, a2), q_vec):
        qkp = qk / (qk - 1.0)
        exponents.append((ak * (1.0 - qkp), 1.0 / qkp))
    exact = math.prod((2.0 / (b + 2.0)) ** e for b, e in exponents)
    got = multilinear_constant(w, q_vec, CubeFamily.origin_centered(K=4, dimension=2))
    assert got == pytest.approx(exact, rel=1e-8)


# --- generalized class -------------------------------------------------------


def test_pq_class_reduces_to_multilinear():
    w = PowerWeightVector(alphas=(-2.25, 0.5), p_vec=P22)
    fam = CubeFamily.default()
    ml = multilinear_constant(w, P22, fam)
    pq = pq_class_constant(w, P22, (1.0, 1.0), fam)
    assert abs(ml - pq) <= 1e-12 * ml


def test_pq_class_all_ones():
    w = PowerWeightVector(alphas=(0.0, 0.0), p_vec=P22)
    assert pq_class_constant(w, P22, (1.0, 1.0)) == pytest.approx(1.0, abs=1e-13)


def test_pq_class_generalized_weights_stable():
    a1, a2 = choose_counterexample_exponents(2, 1, (0.75, 1.0), P22)
    w = PowerWeightVector(alphas=(a1, a2), p_vec=P22)
    q_vec = (1.0 / 0.75, 1.0)
    fam = CubeFamily.default()
    vals = [pq_class_constant(w, P22, q_vec, fam.refine(k)) for k in range(3)]
    assert vals[0] > 0 and np.isfinite(vals).all()
    assert vals[2] / vals[1] <= 1.01


def test_pq_class_rejects_bad_q():
    w = PowerWeightVector(alphas=(0.0, 0.0), p_vec=P22)
    with pytest.raises(InfeasibleConfigError):
        pq_class_constant(w, P22, (2.0, 1.0))  # q_1 not < p_1


# --- two-case verification ---------------------------------------------------


def test_lemma_verification_default_bounded():
    report = verify_lemma21(_default_cfg())
    assert report.bounded
    assert 0.5 <= report.off_origin_max <= 2.0
    assert report.origin_max > report.off_origin_max


def test_lemma_verification_all_ones():
    cfg = _default_cfg(0.0, 0.0)
    report = verify_lemma21(cfg)
    assert report.bounded
    assert report.off_origin_max == pytest.approx(1.0, abs=1e-12)
    assert report.origin_max == pytest.approx(1.0, abs=1e-12)


def test_lemma_verification_detects_divergence():
    # alpha1 + alpha2 <= -2 makes nu non-integrable: origin sups keep growing
    cfg = _default_cfg(-2.6, 0.1)
    report = verify_lemma21(cfg)
    assert not report.bounded
    origin_sups = [pair[1] for pair in report.sups_by_level]
    assert origin_sups[1] > 1.5 * origin_sups[0]
    assert origin_sups[2] > 1.5 * origin_sups[1]


# --- config validation -------------------------------------------------------


def test_validation_names_inequalities():
    with pytest.raises(InfeasibleConfigError, match=r"Nn/2 < s"):
        ExponentConfig(
            N=2, n=1, s=1.0, p_vec=P22, alpha1=-2.25, alpha2=0.5,
            ell=0, r=0.05, gamma=0.05,
        ).validate_hypotheses()
    with pytest.raises(InfeasibleConfigError, match=r"alpha1 < -n"):
        _default_cfg(alpha1=-0.5, alpha2=0.5).validate_counterexample()
    with pytest.raises(InfeasibleConfigError, match=r"alpha1/p1 \+ alpha2/p2 > -n/p"):
        _default_cfg(alpha1=-2.6, alpha2=0.1).validate_counterexample()


def test_config_derived_quantities(cfg):
    assert cfg.q_vec == (2.0, 2.0)
    assert cfg.q == pytest.approx(1.0)
    assert cfg.p == pytest.approx(1.0)
    assert cfg.a_nu == pytest.approx(-0.875)
    assert cfg.s_factors == (1.0, 1.0)
    assert cfg.alphas == (-2.25, 0.5)


def test_weight_vector_fields(cfg):
    w = cfg.weight_vector()
    assert w.alphas == (-2.25, 0.5)
    assert w.a_nu == pytest.approx(-0.875)
    wide = ExponentConfig(
        N=4, n=1, s=3.0, p_vec=(2.0, 2.0, 3.0, 3.0), alpha1=-1.5, alpha2=0.2,
        ell=0, r=0.025, gamma=0.05,
    ).weight_vector()
    assert wide.alphas[2:] == (0.0, 0.0)
