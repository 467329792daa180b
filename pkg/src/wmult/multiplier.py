"""Multilinear Fourier multiplier operators and their dyadic pieces.

A symbol on R^{Nn} acts on N inputs by

    T_m(f_1, ..., f_N)(x) = (2 pi)^{-Nn} int e^{i x.(xi_1+...+xi_N)}
                             m(xi) f_1hat(xi_1) ... f_Nhat(xi_N) d xi.

Tensor symbols m = sigma_1 x ... x sigma_N factorize the operator into a
pointwise product of linear multiplier outputs; the direct joint-grid
Riemann sum is kept as the oracle for that factorization.  Dyadic pieces
m_j(xi) = m(2^j xi) Psi(xi) are localized by the annular cutoff, and the
supremum of their Sobolev norms over j is computed with support-based
pruning: a piece whose dilated support misses the cutoff annulus is
certified zero without a norm computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .bumps import AnnularCutoff
from .grid import (
    FREQUENCY,
    GridSpec,
    SampledFunction,
    forward_ft,
    inverse_ft,
)
from .norms import product_sobolev_norm

DEFAULT_J_RANGE = range(-8, 9)


@dataclass(frozen=True)
class TensorFactor:
    """One factor sigma_k of a tensor symbol on R (n = 1).

    fn evaluates sigma_k on arrays of frequencies; the support interval
    [center - radius, center + radius] feeds the pruning certificates
    (radius = inf marks an unbounded factor).
    """

    fn: Callable[[np.ndarray], np.ndarray]
    center: float = 0.0
    radius: float = np.inf

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(xi, dtype=float))

    def dilated(self, scale: float) -> "TensorFactor":
        """The factor xi -> sigma(scale * xi)."""
        base = self.fn
        return TensorFactor(
            fn=lambda xi, _b=base, _s=scale: _b(_s * np.asarray(xi, dtype=float)),
            center=self.center / scale,
            radius=self.radius / scale if np.isfinite(self.radius) else np.inf,
        )

    def abs_range(self) -> tuple[float, float]:
        """Range of |xi_k| over the support interval."""
        if not np.isfinite(self.radius):
            return 0.0, np.inf
        lo = max(0.0, abs(self.center) - self.radius)
        hi = abs(self.center) + self.radius
        return lo, hi


@dataclass(frozen=True)
class MultiplierSymbol:
    """Tensor or fully materialized multiplier symbol.

    Exactly one of factors / full is set.  Tensor symbols hold per
    coordinate factors on R; full symbols hold samples on the joint
    frequency grid (total dimension N*n <= 2).
    """

    factors: tuple[TensorFactor, ...] | None = None
    full: SampledFunction | None = None

    def __post_init__(self):
        if (self.factors is None) == (self.full is None):
            raise ValueError("provide exactly one of factors or full samples")
        if self.full is not None and self.full.side != FREQUENCY:
            raise ValueError("full symbols must be frequency-side samples")

    @property
    def is_tensor(self) -> bool:
        return self.factors is not None

    @property
    def N(self) -> int:
        if self.is_tensor:
            return len(self.factors)
        return self.full.spec.dimension

    def dilated(self, scale: float) -> "MultiplierSymbol":
        """The symbol xi -> m(scale * xi) (tensor representation only)."""
        if not self.is_tensor:
            raise ValueError("dilation needs the tensor representation")
        return MultiplierSymbol(factors=tuple(f.dilated(scale) for f in self.factors))

    def evaluate(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate on the tensor mesh spanned by per-coordinate axes."""
        if not self.is_tensor:
            raise ValueError("evaluate needs the tensor representation")
        out = np.ones((1,) * len(axes))
        for k, (factor, ax) in enumerate(zip(self.factors, axes)):
            vals = factor(ax)
            shape = [1] * len(axes)
            shape[k] = len(ax)
            out = out * vals.reshape(shape)
        return out

    def materialize(self, joint_spec: GridSpec) -> SampledFunction:
        """Samples on the joint frequency grid."""
        if not self.is_tensor:
            if self.full.spec != joint_spec:
                raise ValueError("full symbol lives on a different grid")
            return self.full
        if joint_spec.dimension != self.N:
            raise ValueError(
                f"joint grid dimension {joint_spec.dimension} != N = {self.N}"
            )
        vals = self.evaluate([joint_spec.axis_xi] * self.N)
        return SampledFunction(joint_spec, vals.astype(complex), FREQUENCY)

    def joint_support_radius_range(self) -> tuple[float, float]:
        """Bounds on |xi| (joint Euclidean norm) over the symbol's support."""
        if not self.is_tensor:
            return 0.0, np.inf
        lo_sq = hi_sq = 0.0
        for factor in self.factors:
            lo, hi = factor.abs_range()
            lo_sq += lo * lo
            hi_sq += hi * hi if np.isfinite(hi) else np.inf
        return math.sqrt(lo_sq), math.sqrt(hi_sq) if np.isfinite(hi_sq) else np.inf


def _sigma_values(sigma, spec: GridSpec) -> np.ndarray:
    if isinstance(sigma, SampledFunction):
        if sigma.spec != spec or sigma.side != FREQUENCY:
            raise ValueError("sampled symbol must live on the input's frequency grid")
        return sigma.values
    if isinstance(sigma, TensorFactor) or callable(sigma):
        if spec.dimension == 1:
            return np.asarray(sigma(spec.axis_xi))
        return np.asarray(sigma(*spec.mesh_xi()))
    return np.asarray(sigma)


def apply_linear_multiplier(sigma, f: SampledFunction) -> SampledFunction:
    """F^{-1}[sigma * fhat] on the grid of f."""
    fhat = forward_ft(f)
    return inverse_ft(fhat.with_values(_sigma_values(sigma, f.spec) * fhat.values))


def apply_multilinear_tensor(
    factors: Sequence, fs: Sequence[SampledFunction]
) -> SampledFunction:
    """T_m for a tensor symbol: the product of linear multiplier outputs."""
    if len(factors) != len(fs):
        raise ValueError("need one factor per input function")
    spec = fs[0].spec
    for f in fs[1:]:
        if f.spec != spec:
            raise ValueError("all inputs must share one grid")
    out = np.ones(spec.shape(), dtype=complex)
    for sigma, f in zip(factors, fs):
        out = out * apply_linear_multiplier(sigma, f).values
    return SampledFunction(spec, out, side="physical")


def apply_multilinear_direct(
    m: SampledFunction | MultiplierSymbol,
    fs: Sequence[SampledFunction],
    x_points: np.ndarray,
) -> np.ndarray:
    """Direct Riemann sum of the joint frequency integral at given points.

    Verified path: N = 2 inputs on a common 1-d grid, joint symbol on
    the matching 2-d frequency grid.  Cost O(len(x_points) * M^2).
    """
    if len(fs) != 2 or fs[0].spec.dimension != 1:
        raise ValueError("direct evaluation supports N = 2, n = 1 (budget N*n <= 2)")
    spec = fs[0].spec
    if fs[1].spec != spec:
        raise ValueError("all inputs must share one grid")
    joint_spec = GridSpec(2, spec.box_length, spec.points_per_axis)
    if isinstance(m, MultiplierSymbol):
        m = m.materialize(joint_spec)
    if m.spec != joint_spec or m.side != FREQUENCY:
        raise ValueError("joint symbol grid does not match the inputs")
    f1hat = forward_ft(fs[0]).values
    f2hat = forward_ft(fs[1]).values
    amplitude = m.values * np.multiply.outer(f1hat, f2hat)
    x_points = np.atleast_1d(np.asarray(x_points, dtype=float))
    phases = np.exp(1j * np.outer(x_points, spec.axis_xi))
    scale = (spec.dxi / (2.0 * np.pi)) ** 2
    return ((phases @ amplitude) * phases).sum(axis=1) * scale


@dataclass(frozen=True)
class LittlewoodPaleyPiece:
    """m_j(xi) = m(2^j xi) Psi(xi)."""

    symbol: MultiplierSymbol
    j: int
    cutoff: AnnularCutoff

    def dilated_symbol(self) -> MultiplierSymbol:
        return self.symbol.dilated(2.0 ** self.j)

    def materialize(self, joint_spec: GridSpec) -> SampledFunction:
        base = self.dilated_symbol().materialize(joint_spec)
        return base.with_values(base.values * self.cutoff(joint_spec.radius_xi))

    def support_radius_range(self) -> tuple[float, float]:
        lo, hi = self.symbol.joint_support_radius_range()
        scale = 2.0 ** (-self.j)
        return lo * scale, hi * scale

    def provably_zero(self) -> bool:
        """True when the dilated support misses the cutoff annulus."""
        lo, hi = self.support_radius_range()
        return hi <= self.cutoff.support_lo or lo >= self.cutoff.support_hi


def littlewood_paley_piece(
    m: MultiplierSymbol, j: int, cutoff: AnnularCutoff
) -> LittlewoodPaleyPiece:
    return LittlewoodPaleyPiece(symbol=m, j=j, cutoff=cutoff)


@dataclass(frozen=True)
class JTableRow:
    j: int
    norm: float
    pruned: bool
    support_lo: float
    support_hi: float


@dataclass(frozen=True)
class SupSobolevResult:
    sup: float
    argmax_j: int | None
    table: tuple[JTableRow, ...]


def sup_sobolev_over_j(
    m: MultiplierSymbol,
    cutoff: AnnularCutoff,
    s_vec: tuple[float, ...],
    j_range=DEFAULT_J_RANGE,
    piece_norm: Callable[[int], float] | None = None,
    joint_spec: GridSpec | None = None,
) -> SupSobolevResult:
    """sup over j of ||m_j||_{W^{(s_1,...,s_N)}} with support pruning.

    Pieces whose support certificate proves them zero are recorded with
    norm 0 and no computation.  Surviving pieces are measured either by
    the supplied piece_norm fast path or by materializing on joint_spec
    and taking the product Sobolev norm.
    """
    rows = []
    for j in j_range:
        piece = littlewood_paley_piece(m, j, cutoff)
        lo, hi = piece.support_radius_range()
        if piece.provably_zero():
            rows.append(JTableRow(j, 0.0, True, lo, hi))
            continue
        if piece_norm is not None:
            norm = float(piece_norm(j))
        else:
            if joint_spec is None:
                raise ValueError("need joint_spec (or piece_norm) for surviving pieces")
            norm = product_sobolev_norm(piece.materialize(joint_spec), s_vec)
        rows.append(JTableRow(j, norm, False, lo, hi))
    best = max(rows, key=lambda row: row.norm)
    argmax = best.j if best.norm > 0 else None
    return SupSobolevResult(sup=best.norm, argmax_j=argmax, table=tuple(rows))
