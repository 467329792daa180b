"""Hardy-Littlewood and multilinear maximal operators on grids.

Averages over a cube are computed against the piecewise-constant
extension of the samples (each node owns its Voronoi cell clipped to the
box), so an average over a cube inside one cell returns that sample
exactly and Mf >= |f| holds pointwise.  The supremum ranges over a
finite cube family; restricting both sides of every asserted inequality
to the same family keeps the comparisons direction-safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, SampledFunction, cell_boundaries


@dataclass(frozen=True)
class MaximalCubeFamily:
    """Cubes probing the maximal suprema: (center, half-side) pairs.

    Built from dyadic half-sides and a center lattice covering the grid
    box, plus one cell-sized cube per node so that the pointwise lower
    bound Mf >= |f| is attained exactly.
    """

    centers: np.ndarray
    radii: np.ndarray

    @classmethod
    def for_grid(cls, spec: GridSpec, scales: int = 10) -> "MaximalCubeFamily":
        half = 0.5 * spec.box_length
        exps = np.arange(scales)
        radii_scale = half / 2.0 ** exps
        lattice = np.linspace(-half, half, 129)
        cs, rs = [np.repeat(spec.axis_x, 1)], [np.full(spec.points_per_axis, 0.5 * spec.h)]
        for r in radii_scale:
            cs.append(lattice)
            rs.append(np.full(lattice.shape, r))
        return cls(centers=np.concatenate(cs), radii=np.concatenate(rs))


def _clipped_masses_1d(f: SampledFunction) -> tuple[np.ndarray, np.ndarray]:
    edges = cell_boundaries(f.spec)
    prefix = np.zeros(edges.size)
    np.cumsum(np.abs(f.values) * np.diff(edges), out=prefix[1:])
    return edges, prefix


def _cube_mass_1d(edges, prefix, values_abs, lo, hi):
    """int over [lo, hi] of the cellwise-constant |f|, exact per cell."""
    lo = max(lo, edges[0])
    hi = min(hi, edges[-1])
    if hi <= lo:
        return 0.0
    i = np.searchsorted(edges, lo, side="right") - 1
    k = np.searchsorted(edges, hi, side="right") - 1
    i = min(max(i, 0), values_abs.size - 1)
    k = min(max(k, 0), values_abs.size - 1)
    if i == k:
        return values_abs[i] * (hi - lo)
    mass = values_abs[i] * (edges[i + 1] - lo)
    mass += prefix[k] - prefix[i + 1]
    mass += values_abs[k] * (hi - edges[k])
    return mass


def _averages_over_family(
    fs: list[SampledFunction], family: MaximalCubeFamily
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-cube averages of each |f|, with node index ranges per cube."""
    spec = fs[0].spec
    edges_prefix = [_clipped_masses_1d(f) for f in fs]
    abs_vals = [np.abs(f.values) for f in fs]
    x = spec.axis_x
    lo = family.centers - family.radii
    hi = family.centers + family.radii
    averages = np.empty((len(fs), family.centers.size))
    for c in range(family.centers.size):
        size = hi[c] - lo[c]
        for idx, (edges, prefix) in enumerate(edges_prefix):
            averages[idx, c] = (
                _cube_mass_1d(edges, prefix, abs_vals[idx], lo[c], hi[c]) / size
            )
    i_lo = np.searchsorted(x, lo, side="left")
    i_hi = np.searchsorted(x, hi, side="right")
    return averages, i_lo, i_hi


def _sup_over_nodes(spec, scores, i_lo, i_hi) -> np.ndarray:
    out = np.zeros(spec.points_per_axis)
    for c in range(scores.size):
        if i_hi[c] > i_lo[c]:
            seg = out[i_lo[c] : i_hi[c]]
            np.maximum(seg, scores[c], out=seg)
    return out


def hl_maximal(
    f: SampledFunction, family: MaximalCubeFamily | None = None
) -> SampledFunction:
    """Mf(x) = sup over family cubes containing x of the average of |f|."""
    if f.spec.dimension != 1:
        raise NotImplementedError("maximal operators are implemented on 1-d grids")
    family = family or MaximalCubeFamily.for_grid(f.spec)
    averages, i_lo, i_hi = _averages_over_family([f], family)
    out = _sup_over_nodes(f.spec, averages[0], i_lo, i_hi)
    return SampledFunction(f.spec, out.astype(complex), "physical")


def multilinear_maximal(
    fs: list[SampledFunction], family: MaximalCubeFamily | None = None
) -> SampledFunction:
    """Multi(sub)linear maximal: sup over cubes of the product of averages."""
    spec = fs[0].spec
    if spec.dimension != 1:
        raise NotImplementedError("maximal operators are implemented on 1-d grids")
    for f in fs[1:]:
        if f.spec != spec:
            raise ValueError("all inputs must share one grid")
    family = family or MaximalCubeFamily.for_grid(spec)
    averages, i_lo, i_hi = _averages_over_family(fs, family)
    out = _sup_over_nodes(spec, averages.prod(axis=0), i_lo, i_hi)
    return SampledFunction(spec, out.astype(complex), "physical")
