"""Weighted Lebesgue norms (strong and weak) and Sobolev norms.

Sobolev norms follow the convention in which the frequency integral is
not renormalized:

    ||F||_{W^s}^2 = int (1 + |xi|^2)^s |Fhat(xi)|^2 dxi,

so the s = 0 case equals (2 pi)^{d/2} times the plain L^2 norm.  The
product-type variant replaces the isotropic weight by
prod_k (1 + |xi_k|^2)^{s_k} over coordinate blocks.
"""

from __future__ import annotations

import numpy as np

from .grid import (
    FREQUENCY,
    PHYSICAL,
    GridSpec,
    SampledFunction,
    SideMismatchError,
    forward_ft,
    fsum,
    power_cell_weights,
    power_weighted_quadrature,
)


def weighted_lp_norm(
    f: SampledFunction, a: float, p: float, vanishing_origin: bool = False
) -> float:
    """(int |f|^p |x|^a dx)^{1/p} with exact power-weight cell integrals.

    Weights with a <= -d require vanishing_origin and a function whose
    sample at the origin is negligible (moment-vanishing bumps weighted
    by strongly singular powers).
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    powered = f.with_values(np.abs(f.values) ** p)
    return power_weighted_quadrature(powered, a, vanishing_origin) ** (1.0 / p)


def weak_lp_norm(f: SampledFunction, a: float, p: float) -> float:
    """sup_{lambda > 0} lambda * w({|f| > lambda})^{1/p} for w = |x|^a.

    On the grid the supremum over thresholds is attained at sample
    values: sweep the sorted |f| values and accumulate exact cell
    weights of the super-level sets.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if f.side != PHYSICAL:
        raise SideMismatchError("weak_lp_norm expects a physical-side function")
    magnitude = np.abs(f.values).ravel()
    weights = power_cell_weights(f.spec, a).ravel()
    order = np.argsort(magnitude, kind="stable")[::-1]
    vals = magnitude[order]
    mass = np.cumsum(weights[order])
    candidates = np.where(vals > 0.0, vals * mass ** (1.0 / p), 0.0)
    if candidates.size == 0:
        return 0.0
    return float(np.max(candidates))


def _sobolev_transform(F: SampledFunction) -> tuple[SampledFunction, GridSpec]:
    """Transform of F in its own variable, regardless of the side tag."""
    if F.side == FREQUENCY:
        F = F.as_physical_on_dual()
    hat = forward_ft(F)
    return hat, F.spec


def sobolev_norm(F: SampledFunction, s: float) -> float:
    """(int (1 + |xi|^2)^s |Fhat|^2 dxi)^{1/2}."""
    hat, spec = _sobolev_transform(F)
    weight = (1.0 + spec.radius_xi.astype(float) ** 2) ** s
    integrand = weight * np.abs(hat.values) ** 2
    return np.sqrt(fsum(integrand) * spec.dxi ** spec.dimension)


def product_sobolev_norm(F: SampledFunction, s_vec: tuple[float, ...]) -> float:
    """Product-type norm with weight prod_k (1 + |xi_k|^2)^{s_k}.

    The grid dimension d must equal N * n with N = len(s_vec); each
    coordinate block of n axes carries its own regularity weight.  For
    tensor-product inputs the norm factorizes into the per-block
    sobolev_norm values.
    """
    hat, spec = _sobolev_transform(F)
    N = len(s_vec)
    if spec.dimension % N != 0:
        raise ValueError(
            f"grid dimension {spec.dimension} is not divisible into {N} blocks"
        )
    n = spec.dimension // N
    axis = spec.axis_xi
    weight = np.ones(spec.shape())
    for k, sk in enumerate(s_vec):
        block = slice(k * n, (k + 1) * n)
        sq = np.zeros(spec.shape())
        for ax in range(*block.indices(spec.dimension)):
            shape = [1] * spec.dimension
            shape[ax] = spec.points_per_axis
            sq = sq + (axis ** 2).reshape(shape)
        weight = weight * (1.0 + sq) ** sk
    integrand = weight * np.abs(hat.values) ** 2
    return np.sqrt(fsum(integrand) * spec.dxi ** spec.dimension)


def rescaled_bump_sobolev_norm(
    phi: SampledFunction, epsilon: float, s: float, dim: int
) -> float:
    """W^s norm of xi -> phi_hat((xi - e1)/epsilon) via the exact substitution.

    Under the transform conventions,

        ||phi_hat((. - e1)/eps)||_{W^s}^2
            = (2 pi)^{2n} eps^{2n} int (1 + |x|^2)^s |phi(eps x)|^2 dx
            = (2 pi)^{2n} eps^{n}  int (1 + |y/eps|^2)^s |phi(y)|^2 dy,

    evaluated on the fixed grid carrying phi.  The integrand is band
    limited, so the midpoint sum is exact up to box truncation.
    """
    spec = phi.spec
    rad = spec.radius_x
    integrand = (1.0 + (rad / epsilon) ** 2) ** s * np.abs(phi.values) ** 2
    integral = fsum(integrand) * spec.h ** spec.dimension
    return (2.0 * np.pi) ** dim * epsilon ** (dim / 2.0) * np.sqrt(integral)


def bump_sobolev_norm(phi: SampledFunction, s: float, dim: int) -> float:
    """W^s norm of phi_hat itself (the epsilon = 1, no-translation case)."""
    return rescaled_bump_sobolev_norm(phi, 1.0, s, dim)
