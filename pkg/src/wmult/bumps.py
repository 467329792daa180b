"""Special functions: moment-vanishing frequency bumps, annular cutoffs.

The frequency bump phi_hat is built from the compactly supported seed
mollifier g(eta) = exp(-1/(1 - |eta/r|^2)) by applying powers of the
negative Laplacian.  Writing g as a function of u = |eta|^2, the
Laplacian becomes the degenerate operator 4u d^2/du^2 + 2 dim d/du with
polynomial coefficients, so the iterated derivative is computed exactly
with sympy and evaluated as a closed-form expression.  Every Laplacian
power kills one more polynomial moment of phi_hat, and on the physical
side contributes an |x|^2 factor:

    F^{-1}[(-Lap)^{l+1} g](x) = |x|^{2(l+1)} F^{-1}[g](x),

which is the independent analytic evaluator for phi used to cross-check
the grid representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import j0

from .grid import (
    FREQUENCY,
    GridSpec,
    SampledFunction,
    fsum,
    inverse_ft,
    quadrature_integral,
)


class BumpConstructionError(ValueError):
    """Bump failed a construction invariant (resolution, moments, energy)."""


DEFAULT_MOMENT_TOL = 1e-8
DEFAULT_GAMMA = 0.05
#: minimum per-axis frequency samples across the support ball
MIN_SAMPLES_ACROSS_BALL = 16


def smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity decreasing step: exactly 1 for t <= 0, exactly 0 for t >= 1."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    out[t <= 0.0] = 1.0
    out[t >= 1.0] = 0.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / (1.0 - tm))
    b = np.exp(-1.0 / tm)
    out[mid] = a / (a + b)
    if out.ndim == 0:
        return out[()]
    return out


@lru_cache(maxsize=None)
def _bump_profile(ell: int, dim: int) -> tuple[Callable[[np.ndarray], np.ndarray], float]:
    """Normalized radial profile of (-Lap)^{l+1} g versus the radius ratio |eta|/r.

    Returns (profile, scale) where profile has sup-norm 1 and
    profile = scale * (-Lam_v)^{l+1} G in v = (|eta|/r)^2, with
    Lam_v = 4v d^2/dv^2 + 2 dim d/dv.  The symbolic work runs in the
    boundary variable t = 1 - v so the result's denominator stays the
    monomial t^k; an expanded (v-1)^k denominator would be
    catastrophically cancellative in double precision near the support
    edge, where the high-order profiles concentrate.  The profile is
    independent of r (rescaling only changes a constant absorbed by the
    normalization).
    """
    import sympy as sp

    v, t = sp.symbols("v t")
    # write (-Lam)^{l+1} G as G * R with G = exp(-1/(1-v)) and R rational:
    # iterating on R alone keeps sympy away from the exponential, and the
    # final substitution v = 1 - t leaves a monomial denominator t^k
    log_deriv = -1 / (1 - v) ** 2
    log_deriv2 = sp.diff(log_deriv, v)
    R = sp.Integer(1)
    for _ in range(ell + 1):
        r1 = sp.diff(R, v)
        r2 = sp.diff(R, v, 2)
        R = -(
            4 * v * (r2 + 2 * r1 * log_deriv + R * (log_deriv ** 2 + log_deriv2))
            + 2 * dim * (r1 + R * log_deriv)
        )
        R = sp.cancel(sp.together(R))
    Rt = sp.cancel(sp.together(R.subs(v, 1 - t)))
    fn = sp.lambdify(t, Rt, "numpy")

    def evaluate(rho_ratio: np.ndarray) -> np.ndarray:
        rho = np.abs(np.asarray(rho_ratio, dtype=float))
        out = np.zeros_like(rho)
        # t = 1 - rho^2 without cancellation near the edge
        tt = (1.0 - rho) * (1.0 + rho)
        inside = tt > 1e-14
        if inside.any():
            with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
                out[inside] = np.exp(-1.0 / tt[inside]) * fn(tt[inside])
        out[~np.isfinite(out)] = 0.0
        return out

    # normalize once on a fine probe so sup |profile| = 1
    probe = np.linspace(0.0, 1.0, 200001)
    scale = 1.0 / np.abs(evaluate(probe)).max()

    def normalized(rho_ratio: np.ndarray) -> np.ndarray:
        return scale * evaluate(rho_ratio)

    return normalized, scale


def _gauss_nodes_on_ball(r: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(count)
    return 0.5 * r * (nodes + 1.0), 0.5 * r * weights


def _node_count_for(max_x: float, r: float) -> int:
    # resolve the oscillation of e^{i x eta} across the ball: >= ~6 nodes
    # per period plus a floor for the profile itself
    return max(512, int(2.0 * max_x * r) + 512)


@dataclass
class BumpPair:
    """Moment-vanishing frequency bump and its physical-side realisations.

    r: support radius of phi_hat.
    ell: moment-vanishing order (all moments of order <= ell vanish).
    amplitude: scale applied on top of the unit-sup profile.
    phi_hat: samples of phi_hat on spec's frequency grid.
    phi: samples of phi = F^{-1}[phi_hat] on the physical grid.
    phiphi0: (phi*phi)(0) = (2 pi)^{-d} int phi_hat^2, from Gauss quadrature.
    """

    r: float
    ell: int
    spec: GridSpec
    amplitude: float
    phi_hat: SampledFunction
    phi: SampledFunction
    phiphi0: float
    _profile: Callable = field(repr=False)
    _profile_scale: float = field(repr=False)
    _gl_cache: dict = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return self.spec.dimension

    def phi_hat_eval(self, eta_radius: np.ndarray) -> np.ndarray:
        """phi_hat at arbitrary points, given as |eta| (the bump is radial)."""
        rho = np.asarray(eta_radius, dtype=float)
        return self.amplitude * self._profile(rho / self.r)

    def seed_eval(self, eta_radius: np.ndarray) -> np.ndarray:
        """The raw seed mollifier g at radius |eta| (not normalized)."""
        rho = np.asarray(eta_radius, dtype=float)
        out = np.zeros_like(rho)
        inside = rho < self.r * (1.0 - 1e-14)
        t = (rho[inside] / self.r) ** 2
        out[inside] = np.exp(-1.0 / (1.0 - t))
        return out

    def phi_eval(self, x: np.ndarray, node_count: int | None = None) -> np.ndarray:
        """Analytic phi(x) = C |x|^{2(l+1)} F^{-1}[g](x) by ball quadrature.

        Independent of the grid transforms; used as the cross-representation
        oracle.  x is |x| in d=2 (phi is radial), signed position in d=1.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        rad = np.abs(x)
        count = node_count or _node_count_for(rad.max(initial=0.0), self.r)
        eta, w = _gauss_nodes_on_ball(self.r, count)
        g = np.exp(-1.0 / (1.0 - (eta / self.r) ** 2))
        out = np.empty_like(rad)
        chunk = max(1, (1 << 22) // count)
        for i in range(0, rad.size, chunk):
            seg = rad[i : i + chunk]
            if self.dim == 1:
                inv_g = (np.cos(np.outer(seg, eta)) @ (w * g)) / np.pi
            else:
                inv_g = (j0(np.outer(seg, eta)) @ (w * g * eta)) / (2.0 * np.pi)
            out[i : i + chunk] = inv_g
        # phi_hat = amplitude * profile(v) = amplitude * scale * (-Lam_v)^{l+1} G
        #         = amplitude * scale * (r^2)^{l+1} * (-Lap_eta)^{l+1} g
        coeff = self.amplitude * self._profile_scale * (self.r ** 2) ** (self.ell + 1)
        return coeff * rad ** (2 * (self.ell + 1)) * out

    def _gl_rule(self, max_arg: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Cached Gauss rule on [0, r] sized to resolve e^{i max_arg eta}."""
        need = _node_count_for(max_arg, self.r)
        count = 512
        while count < need:
            count *= 2
        if count not in self._gl_cache:
            eta, w = _gauss_nodes_on_ball(self.r, count)
            self._gl_cache[count] = (eta, w, self.phi_hat_eval(eta))
        return self._gl_cache[count]

    def conv_at(self, y: np.ndarray) -> np.ndarray:
        """(phi * phi)(y) = (2 pi)^{-d} int phi_hat(eta)^2 e^{i y.eta} d eta.

        Gauss quadrature over the support ball; y is |y| (radial symmetry).
        """
        y = np.atleast_1d(np.asarray(y, dtype=float))
        rad = np.abs(y)
        eta, w, phat = self._gl_rule(rad.max(initial=0.0))
        out = np.empty_like(rad)
        w2 = w * phat ** 2
        chunk = max(1, (1 << 22) // eta.size)
        for i in range(0, rad.size, chunk):
            seg = rad[i : i + chunk]
            if self.dim == 1:
                out[i : i + chunk] = (np.cos(np.outer(seg, eta)) @ w2) / np.pi
            else:
                out[i : i + chunk] = (j0(np.outer(seg, eta)) @ (w2 * eta)) / (
                    2.0 * np.pi
                )
        return out

    def scaled(self, factor: float) -> "BumpPair":
        """Same bump with phi_hat multiplied by factor (all tables rescaled)."""
        return BumpPair(
            r=self.r,
            ell=self.ell,
            spec=self.spec,
            amplitude=self.amplitude * factor,
            phi_hat=self.phi_hat.with_values(self.phi_hat.values * factor),
            phi=self.phi.with_values(self.phi.values * factor),
            phiphi0=self.phiphi0 * factor ** 2,
            _profile=self._profile,
            _profile_scale=self._profile_scale,
        )


def check_moments(bump: BumpPair) -> float:
    """Max over |beta| <= ell of |int eta^beta phi_hat(eta) d eta| by grid quadrature."""
    spec = bump.spec
    vals = bump.phi_hat.values.real  # the bump is real valued
    cell = spec.dxi ** spec.dimension
    worst = 0.0
    if spec.dimension == 1:
        eta = spec.axis_xi
        for b in range(bump.ell + 1):
            worst = max(worst, abs(fsum(eta ** b * vals) * cell))
    else:
        e1, e2 = spec.mesh_xi()
        for b1 in range(bump.ell + 1):
            for b2 in range(bump.ell + 1 - b1):
                worst = max(worst, abs(fsum(e1 ** b1 * e2 ** b2 * vals) * cell))
    return worst


def make_moment_vanishing_bump(
    r: float,
    ell: int,
    spec: GridSpec,
    moment_tol: float = DEFAULT_MOMENT_TOL,
    energy_floor: float = 1e-12,
) -> BumpPair:
    """Construct the bump pair on the given grid and verify its invariants."""
    if r <= 0:
        raise BumpConstructionError(f"support radius must be positive, got {r}")
    if ell < 0:
        raise BumpConstructionError(f"moment order must be >= 0, got {ell}")
    across = 2.0 * r / spec.dxi
    if across < MIN_SAMPLES_ACROSS_BALL:
        raise BumpConstructionError(
            f"grid resolves only {across:.1f} frequency samples across the "
            f"support ball; need >= {MIN_SAMPLES_ACROSS_BALL} "
            f"(increase box_length beyond {2 * np.pi * MIN_SAMPLES_ACROSS_BALL / (2 * r):.0f})"
        )
    profile, profile_scale = _bump_profile(ell, spec.dimension)
    vals = profile(spec.radius_xi / r)
    phi_hat = SampledFunction(spec, vals.astype(complex), FREQUENCY)
    phi = inverse_ft(phi_hat)

    gl_eta, gl_w = _gauss_nodes_on_ball(r, 2048)
    gl_phat = profile(gl_eta / r)
    if spec.dimension == 1:
        energy = 2.0 * fsum(gl_w * gl_phat ** 2)
    else:
        energy = 2.0 * np.pi * fsum(gl_w * gl_phat ** 2 * gl_eta)
    phiphi0 = energy / (2.0 * np.pi) ** spec.dimension
    if not abs(phiphi0) >= energy_floor:
        raise BumpConstructionError(f"(phi*phi)(0) = {phiphi0:.3e} below floor {energy_floor}")

    bump = BumpPair(
        r=r,
        ell=ell,
        spec=spec,
        amplitude=1.0,
        phi_hat=phi_hat,
        phi=phi,
        phiphi0=phiphi0,
        _profile=profile,
        _profile_scale=profile_scale,
    )
    residual = check_moments(bump)
    if residual > moment_tol:
        raise BumpConstructionError(
            f"moment residual {residual:.3e} exceeds tolerance {moment_tol}"
        )
    return bump


@dataclass(frozen=True)
class AnnularCutoff:
    """Radial dyadic cutoff Psi with Psi(xi) = chi(|xi|) - chi(2 |xi|).

    chi is a smooth decreasing step in log2 |xi|, equal to 1 below
    2^{1/2-gamma} and 0 above 2^{1/2+gamma}.  By telescoping,
    sum_k Psi(xi / 2^k) = 1 for every xi != 0, and Psi is exactly 1 on
    the flat annulus 2^{-1/2+gamma} <= |xi| <= 2^{1/2-gamma}.
    """

    gamma: float

    @property
    def flat_lo(self) -> float:
        return 2.0 ** (-0.5 + self.gamma)

    @property
    def flat_hi(self) -> float:
        return 2.0 ** (0.5 - self.gamma)

    @property
    def support_lo(self) -> float:
        return 2.0 ** (-0.5 - self.gamma)

    @property
    def support_hi(self) -> float:
        return 2.0 ** (0.5 + self.gamma)

    def chi(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        out = np.ones_like(rho)
        pos = rho > 0.0
        t = np.zeros_like(rho)
        t[pos] = (np.log2(rho[pos]) - (0.5 - self.gamma)) / (2.0 * self.gamma)
        out[pos] = smoothstep(t[pos])
        if out.ndim == 0:
            return out[()]
        return out

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        """Psi as a function of the radius |xi|."""
        rho = np.asarray(rho, dtype=float)
        return self.chi(rho) - self.chi(2.0 * rho)


def make_annular_cutoff(gamma: float = DEFAULT_GAMMA) -> AnnularCutoff:
    if not 0.0 < gamma < 0.25:
        raise ValueError(f"gamma must lie in (0, 1/4), got {gamma}")
    return AnnularCutoff(gamma)


@dataclass(frozen=True)
class WideBump:
    """Frequency-side bump psi_hat: exactly 1 on |xi| <= r, 0 beyond 2r."""

    r: float

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        return smoothstep((rho - self.r) / self.r)

    def sample(self, spec: GridSpec) -> SampledFunction:
        return SampledFunction(spec, self(spec.radius_xi).astype(complex), FREQUENCY)


def make_wide_bump(r: float) -> WideBump:
    if r <= 0:
        raise ValueError(f"support radius must be positive, got {r}")
    return WideBump(r)
