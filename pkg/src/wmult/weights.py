"""Power weights, weight-class constants over cube families, exponent chooser.

Weight classes are probed numerically: the defining expression
(averages of |x|^b over cubes, combined with the appropriate powers) is
evaluated over a family of origin-centered and shifted dyadic cubes with
exact power-weight integrals, and divergence is detected through a
geometric-growth test as an inner integration cutoff is refined.  For
power weights the class expression is scale invariant, so the family of
realised center/radius ratios determines the supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.integrate import quad

from .grid import NonIntegrableWeightError, interval_power_integral


class InfeasibleConfigError(ValueError):
    """An exponent hypothesis fails; the message names the inequality."""


GROWTH_THRESHOLD = 1.5
CUTOFF_REL_DEFAULT = 2.0 ** -12


def _mid(lo: float, hi: float) -> float:
    return 0.5 * (lo + hi)


def _require(cond: bool, name: str, detail: str):
    if not cond:
        raise InfeasibleConfigError(f"hypothesis violated: {name} ({detail})")


@dataclass(frozen=True)
class ExponentConfig:
    """All exponents of one counterexample instance.

    s is a scalar (standard mode, shared regularity) or a tuple of per
    factor regularities (generalized mode).  p_vec holds the Lebesgue
    exponents; q_vec and the combined p, q are derived.
    """

    N: int
    n: int
    s: float | tuple[float, ...]
    p_vec: tuple[float, ...]
    alpha1: float
    alpha2: float
    ell: int
    r: float
    gamma: float

    @property
    def is_generalized(self) -> bool:
        return isinstance(self.s, tuple)

    @property
    def p(self) -> float:
        return 1.0 / sum(1.0 / pk for pk in self.p_vec)

    @property
    def q_vec(self) -> tuple[float, ...]:
        if self.is_generalized:
            # per-factor class exponents q_k = n / s_k
            return tuple(self.n / sk for sk in self.s)
        return tuple(pk * self.s / (self.N * self.n) for pk in self.p_vec)

    @property
    def q(self) -> float:
        return 1.0 / sum(1.0 / qk for qk in self.q_vec)

    @property
    def s_factors(self) -> tuple[float, ...]:
        """Per-factor Sobolev regularity: s/N repeated, or the given vector."""
        if self.is_generalized:
            return tuple(self.s)
        return (self.s / self.N,) * self.N

    @property
    def alphas(self) -> tuple[float, ...]:
        return (self.alpha1, self.alpha2) + (0.0,) * (self.N - 2)

    @property
    def a_nu(self) -> float:
        """Exponent of nu = prod w_k^{p/p_k} = |x|^{a_nu}."""
        return self.p * (self.alpha1 / self.p_vec[0] + self.alpha2 / self.p_vec[1])

    def validate_hypotheses(self):
        """Range conditions on (N, n, s, p); raises naming the inequality."""
        _require(self.N >= 2, "N >= 2", f"got N={self.N}")
        _require(self.n in (1, 2), "n in {1, 2}", f"got n={self.n}")
        _require(len(self.p_vec) == self.N, "len(p) == N", f"got {len(self.p_vec)} exponents")
        _require(all(pk > 1 for pk in self.p_vec), "p_k > 1", f"got p={self.p_vec}")
        if self.is_generalized:
            _require(len(self.s) == self.N, "len(s) == N", f"got {len(self.s)} entries")
            for k, sk in enumerate(self.s):
                _require(sk > self.n / 2, "n/2 < s_k", f"s_{k + 1}={sk}, n/2={self.n / 2}")
                _require(sk <= self.n, "s_k <= n", f"s_{k + 1}={sk}, n={self.n}")
            for k, (pk, sk) in enumerate(zip(self.p_vec, self.s)):
                _require(pk > self.n / sk, "p_k > n/s_k", f"p_{k + 1}={pk}, n/s_{k + 1}={self.n / sk}")
        else:
            nn = self.N * self.n
            _require(self.s > nn / 2, "Nn/2 < s", f"s={self.s}, Nn/2={nn / 2}")
            _require(self.s <= nn, "s <= Nn", f"s={self.s}, Nn={nn}")
            for k, pk in enumerate(self.p_vec):
                _require(pk > nn / self.s, "p_k > Nn/s", f"p_{k + 1}={pk}, Nn/s={nn / self.s}")
        for k, qk in enumerate(self.q_vec):
            _require(qk > 1, "q_k > 1", f"q_{k + 1}={qk}")

    def validate_counterexample(self):
        """Full validation including the weight-exponent inequalities."""
        self.validate_hypotheses()
        n, p = self.n, self.p
        p1, p2 = self.p_vec[0], self.p_vec[1]
        a1, a2 = self.alpha1, self.alpha2
        s1 = self.s_factors[0]
        _require(
            a1 / p1 + a2 / p2 > -n / p,
            "alpha1/p1 + alpha2/p2 > -n/p",
            f"lhs={a1 / p1 + a2 / p2}, rhs={-n / p}",
        )
        for k, (ak, pk, sk) in enumerate(
            zip((a1, a2), (p1, p2), self.s_factors[:2])
        ):
            _require(
                ak / pk < sk - n / pk,
                "alpha_k/p_k < s_k - n/p_k",
                f"k={k + 1}, lhs={ak / pk}, rhs={sk - n / pk}",
            )
        _require(
            a1 / p1 < -n / p1 - s1 + n / 2,
            "alpha1/p1 < -n/p1 - s_1 + n/2",
            f"lhs={a1 / p1}, rhs={-n / p1 - s1 + n / 2}",
        )
        _require(a1 < -n, "alpha1 < -n", f"alpha1={a1}")
        _require(a2 > -n, "alpha2 > -n", f"alpha2={a2}")
        _require(
            p1 * (self.ell + 1) + a1 > -n,
            "p_1(l+1) + alpha_1 > -n",
            f"lhs={p1 * (self.ell + 1) + a1}, rhs={-n}",
        )
        _require(self.a_nu > -n, "a_nu > -n", f"a_nu={self.a_nu}")
        _require(0 < self.gamma < 0.25, "0 < gamma < 1/4", f"gamma={self.gamma}")
        _require(self.r > 0, "r > 0", f"r={self.r}")

    def validate_weight_class(self):
        """Only the membership conditions for A_{(q_1,...,q_N)} (Lemma-style)."""
        self.validate_hypotheses()
        n = self.n
        q = self.q
        q1, q2 = self.q_vec[0], self.q_vec[1]
        a1, a2 = self.alpha1, self.alpha2
        _require(
            a1 / q1 + a2 / q2 > -n / q,
            "alpha1/q1 + alpha2/q2 > -n/q",
            f"lhs={a1 / q1 + a2 / q2}, rhs={-n / q}",
        )
        for k, (ak, qk) in enumerate(zip((a1, a2), (q1, q2))):
            _require(
                ak < n * (qk - 1),
                "alpha_k < n(q_k - 1)",
                f"k={k + 1}, alpha={ak}, bound={n * (qk - 1)}",
            )

    def weight_vector(self) -> "PowerWeightVector":
        return PowerWeightVector(alphas=self.alphas, p_vec=self.p_vec)

    def predicted_ratio_slope(self) -> float:
        n, p1 = self.n, self.p_vec[0]
        return n / p1 + self.alpha1 / p1 + self.s_factors[0] - n / 2


@dataclass(frozen=True)
class PowerWeightVector:
    """Weight vector (|x|^{a_1}, ..., |x|^{a_N}) with its Lebesgue exponents."""

    alphas: tuple[float, ...]
    p_vec: tuple[float, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.p_vec):
            raise ValueError("alphas and p_vec must have equal length")

    @property
    def N(self) -> int:
        return len(self.alphas)

    @property
    def p(self) -> float:
        return 1.0 / sum(1.0 / pk for pk in self.p_vec)

    @property
    def a_nu(self) -> float:
        return self.p * sum(a / pk for a, pk in zip(self.alphas, self.p_vec))


def choose_counterexample_exponents(
    N: int,
    n: int,
    s: float | tuple[float, ...],
    p_vec: tuple[float, ...],
) -> tuple[float, float]:
    """Pick (alpha1, alpha2) as interval midpoints, maximizing slack.

    alpha2 is the midpoint of its admissible interval intersected with
    [0, inf); alpha1 then sits at the midpoint of the interval that the
    chosen alpha2 leaves open.  Raises InfeasibleConfigError when the
    range hypotheses fail.
    """
    trial = ExponentConfig(
        N=N, n=n, s=s, p_vec=tuple(p_vec),
        alpha1=-2.0 * n, alpha2=0.0, ell=0, r=1.0 / (10 * N), gamma=0.05,
    )
    trial.validate_hypotheses()
    p = trial.p
    p1, p2 = p_vec[0], p_vec[1]
    s1, s2 = trial.s_factors[0], trial.s_factors[1]
    lo2 = max(0.0, p2 * (-n / p + n / p1 + s1 - n / 2))
    hi2 = p2 * (s2 - n / p2)
    if not lo2 < hi2:
        raise InfeasibleConfigError(
            f"hypothesis violated: alpha2 interval empty (lo={lo2}, hi={hi2})"
        )
    alpha2 = _mid(lo2, hi2)
    lo1 = p1 * (-alpha2 / p2 - n / p)
    hi1 = p1 * (-n / p1 - s1 + n / 2)
    if not lo1 < hi1:
        raise InfeasibleConfigError(
            f"hypothesis violated: alpha1 interval empty (lo={lo1}, hi={hi1})"
        )
    alpha1 = _mid(lo1, hi1)
    return alpha1, alpha2


def choose_moment_order(p1: float, alpha1: float, n: int) -> int:
    """Smallest l >= 0 with p_1 (l+1) + alpha_1 > -n."""
    m = math.floor((-n - alpha1) / p1) + 1
    return max(0, m - 1)


# ---------------------------------------------------------------------------
# cube/ball families and exact power-weight averages


@dataclass(frozen=True)
class CubeFamily:
    """Dyadic cubes (intervals / balls) probing the class expressions.

    Radii are half the dyadic side lengths 2^m, scale_exp_min <= m <=
    scale_exp_max; centers sit on the nonnegative lattice
    {j * center_spacing} plus the origin (power weights are radial, so
    only the center distance matters).  Refinement adds one dyadic scale
    at each end and halves the center spacing.
    """

    dimension: int = 1
    scale_exp_min: int = -12
    scale_exp_max: int = 12
    center_spacing: float = 2.0 ** -6
    center_count: int = 257

    @classmethod
    def default(cls, K: int = 12, dimension: int = 1) -> "CubeFamily":
        return cls(
            dimension=dimension,
            scale_exp_min=-K,
            scale_exp_max=K,
            center_spacing=2.0 ** (-(K // 2)),
            center_count=257,
        )

    @classmethod
    def origin_centered(cls, K: int = 12, dimension: int = 1) -> "CubeFamily":
        """Only origin-centered cubes (the scale-invariant diagonal)."""
        return cls(
            dimension=dimension,
            scale_exp_min=-K,
            scale_exp_max=K,
            center_spacing=1.0,
            center_count=1,
        )

    def refine(self, levels: int = 1) -> "CubeFamily":
        if levels == 0:
            return self
        return replace(
            self,
            scale_exp_min=self.scale_exp_min - levels,
            scale_exp_max=self.scale_exp_max + levels,
            center_spacing=self.center_spacing / 2 ** levels,
            center_count=(self.center_count - 1) * 2 ** levels + 1,
        )

    @cached_property
    def radii(self) -> np.ndarray:
        exps = np.arange(self.scale_exp_min, self.scale_exp_max + 1, dtype=float)
        return 0.5 * 2.0 ** exps

    @cached_property
    def centers(self) -> np.ndarray:
        return self.center_spacing * np.arange(self.center_count, dtype=float)

    def grids(self) -> tuple[np.ndarray, np.ndarray]:
        """(centers, radii) meshes of shape (center_count, n_radii)."""
        return np.meshgrid(self.centers, self.radii, indexing="ij")


def _ball_power_integral_2d(b: float, c: float, R: float, delta: float = 0.0) -> float:
    """Exact/adaptive integral of |x|^b over the disk B(c, R) minus |x| < delta."""

    def full_disk(r_lo, r_hi):
        if r_hi <= r_lo:
            return 0.0
        if b == -2.0:
            return 2.0 * np.pi * math.log(r_hi / r_lo)
        return 2.0 * np.pi * (r_hi ** (b + 2.0) - r_lo ** (b + 2.0)) / (b + 2.0)

    if c == 0.0:
        return full_disk(delta, R)
    total = 0.0
    if R > c:
        total += full_disk(delta, R - c)
    rho_lo = max(abs(R - c), delta)
    rho_hi = c + R
    if rho_hi > rho_lo:

        def integrand(rho):
            cosang = (rho * rho + c * c - R * R) / (2.0 * rho * c)
            cosang = min(1.0, max(-1.0, cosang))
            return rho ** (b + 1.0) * 2.0 * math.acos(cosang)

        val, _ = quad(integrand, rho_lo, rho_hi, epsabs=1e-13, epsrel=1e-11, limit=200)
        total += val
    return total


def _ball_volume(dimension: int, R: np.ndarray) -> np.ndarray:
    if dimension == 1:
        return 2.0 * R
    return np.pi * R ** 2


def _average_power(
    dimension: int,
    b: float,
    centers: np.ndarray,
    radii: np.ndarray,
    delta_rel: float,
) -> np.ndarray:
    """Average of |x|^b over balls B(c, R), with relative cutoff delta_rel * R.

    The cutoff is applied only when |x|^b is not locally integrable
    (b <= -dimension); integrable powers use the exact delta = 0 value.
    """
    integrable = b > -dimension
    if dimension == 1:
        delta = 0.0 if integrable else delta_rel * radii
        vals = interval_power_integral(b, centers - radii, centers + radii, delta)
        return vals / _ball_volume(1, radii)
    flat_c, flat_r = centers.ravel(), radii.ravel()
    cut = 0.0 if integrable else delta_rel
    flat = np.array(
        [_ball_power_integral_2d(b, c, r, cut * r) for c, r in zip(flat_c, flat_r)]
    ).reshape(centers.shape)
    return flat / _ball_volume(2, radii)


def class_expression(
    components: list[tuple[float, float]],
    family: CubeFamily,
    delta_rel: float = CUTOFF_REL_DEFAULT,
) -> np.ndarray:
    """prod_i avg(|x|^{b_i}, Q)^{e_i} for every cube Q in the family.

    components is a list of (exponent b_i, power e_i).
    """
    centers, radii = family.grids()
    result = np.ones_like(centers)
    for b, e in components:
        result = result * _average_power(family.dimension, b, centers, radii, delta_rel) ** e
    return result


@dataclass(frozen=True)
class ApConstantReport:
    """Estimate of an A_p constant with the divergence diagnosis."""

    value: float | None
    divergent: bool
    sups_by_level: tuple[float, ...]
    growth_factors: tuple[float, ...]


def ap_constant(
    a: float,
    p: float,
    family: CubeFamily | None = None,
    cutoff_rel: float = CUTOFF_REL_DEFAULT,
    levels: int = 3,
) -> ApConstantReport:
    """sup_Q (avg_Q |x|^a)(avg_Q |x|^{a(1-p')})^{p-1}, with divergence detection.

    Finite exactly when -n < a < n(p-1).  Outside that range the
    regularized sup grows geometrically as the inner cutoff is halved;
    the report carries the measured growth factor per halving.
    """
    if p <= 1:
        raise InfeasibleConfigError(f"hypothesis violated: p > 1 (got p={p})")
    family = family or CubeFamily.default()
    pprime = p / (p - 1.0)
    components = [(a, 1.0), (a * (1.0 - pprime), p - 1.0)]
    sups = []
    for lvl in range(levels):
        expr = class_expression(components, family, cutoff_rel / 2 ** lvl)
        sups.append(float(np.max(expr)))
    growth = tuple(sups[i + 1] / sups[i] for i in range(levels - 1))
    divergent = all(g >= GROWTH_THRESHOLD for g in growth)
    value = None if divergent else sups[-1]
    return ApConstantReport(
        value=value,
        divergent=divergent,
        sups_by_level=tuple(sups),
        growth_factors=growth,
    )


def _multilinear_components(
    w: PowerWeightVector, p_vec: tuple[float, ...]
) -> list[tuple[float, float]]:
    p = 1.0 / sum(1.0 / pk for pk in p_vec)
    a_nu = p * sum(a / pk for a, pk in zip(w.alphas, p_vec))
    comps = [(a_nu, 1.0 / p)]
    for a, pk in zip(w.alphas, p_vec):
        pkp = pk / (pk - 1.0)
        comps.append((a * (1.0 - pkp), 1.0 / pkp))
    return comps


def _check_integrable(comps: list[tuple[float, float]], dimension: int):
    for b, _ in comps:
        if b <= -dimension:
            raise NonIntegrableWeightError(
                f"component |x|^({b}) not integrable in d={dimension}; "
                "class expression undefined"
            )


def multilinear_constant(
    w: PowerWeightVector,
    p_vec: tuple[float, ...],
    family: CubeFamily | None = None,
) -> float:
    """sup_Q (avg nu)^{1/p} prod_k (avg w_k^{1-p_k'})^{1/p_k'} over the family."""
    family = family or CubeFamily.default()
    comps = _multilinear_components(w, tuple(p_vec))
    _check_integrable(comps, family.dimension)
    return float(np.max(class_expression(comps, family)))


def pq_class_constant(
    w: PowerWeightVector,
    p_vec: tuple[float, ...],
    q_vec: tuple[float, ...],
    family: CubeFamily | None = None,
) -> float:
    """Generalized class constant with per-factor regularity exponents q_k.

    Coincides with multilinear_constant when q_1 = ... = q_N = 1.
    """
    for k, (pk, qk) in enumerate(zip(p_vec, q_vec)):
        if not 1.0 <= qk < pk:
            raise InfeasibleConfigError(
                f"hypothesis violated: 1 <= q_k < p_k (k={k + 1}, q={qk}, p={pk})"
            )
    family = family or CubeFamily.default()
    p = 1.0 / sum(1.0 / pk for pk in p_vec)
    a_nu = p * sum(a / pk for a, pk in zip(w.alphas, p_vec))
    comps = [(a_nu, 1.0 / p)]
    for a, pk, qk in zip(w.alphas, p_vec, q_vec):
        ratio = pk / qk
        conj = ratio / (ratio - 1.0)
        comps.append((a * (1.0 - conj), 1.0 / qk - 1.0 / pk))
    _check_integrable(comps, family.dimension)
    return float(np.max(class_expression(comps, family)))


@dataclass(frozen=True)
class Lemma21Report:
    """Two-case supremum of the multilinear class expression."""

    off_origin_max: float
    origin_max: float
    bounded: bool
    sups_by_level: tuple[tuple[float, float], ...]


def verify_lemma21(
    cfg: ExponentConfig,
    family: CubeFamily | None = None,
    stability_tol: float = 0.01,
    cutoff_rel: float = CUTOFF_REL_DEFAULT,
) -> Lemma21Report:
    """Split the family into |x_0| >= 2R and |x_0| < 2R and probe both sups.

    bounded is True when both sups stay within stability_tol relative
    growth across two successive refinements (family scales and centers
    refined, inner cutoff halved).
    """
    family = family or CubeFamily.default(dimension=cfg.n)
    w = cfg.weight_vector()
    comps = _multilinear_components(w, cfg.q_vec)
    sups = []
    for lvl in range(3):
        fam = family.refine(lvl)
        centers, radii = fam.grids()
        expr = class_expression(comps, fam, cutoff_rel / 2 ** lvl)
        off = centers >= 2.0 * radii
        off_max = float(np.max(expr[off])) if off.any() else 0.0
        ori_max = float(np.max(expr[~off])) if (~off).any() else 0.0
        sups.append((off_max, ori_max))
    bounded = True
    for i in range(2):
        for j in range(2):
            prev, cur = sups[i][j], sups[i + 1][j]
            if prev > 0 and cur / prev > 1.0 + stability_tol:
                bounded = False
    return Lemma21Report(
        off_origin_max=sups[-1][0],
        origin_max=sups[-1][1],
        bounded=bounded,
        sups_by_level=tuple(sups),
    )
