"""Counterexample scenarios: per-epsilon construction, norms, sweeps, fits.

One scenario fixes the exponent configuration and a localization scale
epsilon, builds the tensor multiplier whose first factor is the
moment-vanishing bump squeezed to width epsilon*r around the unit
frequency, and measures both sides of the weighted estimate:

    lhs  = || T_m(f) ||_{L^p(nu)}        (strong or weak norm),
    rhs  = sup_j ||m_j||_{W^(s_1,...)} * ||f_1||_{L^{p_1}(w_1)} * rest.

All epsilon-dependent quantities are evaluated through exact
substitution identities on one fixed fine grid carrying phi; direct
grid transforms cross-check the identities at moderate epsilon.  A
sweep over geometrically spaced epsilon fits log-log slopes and
compares them with the arithmetic predictions; a negative fitted ratio
slope is the measured blow-up.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bumps import (
    AnnularCutoff,
    BumpPair,
    WideBump,
    make_annular_cutoff,
    make_moment_vanishing_bump,
    make_wide_bump,
)
from .grid import GridSpec, SampledFunction, fsum, inverse_ft, power_cell_weights, tail_mass
from .multiplier import (
    MultiplierSymbol,
    SupSobolevResult,
    TensorFactor,
    sup_sobolev_over_j,
)
from .norms import (
    bump_sobolev_norm,
    rescaled_bump_sobolev_norm,
    weak_lp_norm,
    weighted_lp_norm,
)
from .weights import ExponentConfig, InfeasibleConfigError, PowerWeightVector

DEFAULT_BOX_LENGTH = 65536.0
DEFAULT_POINTS = 1 << 17
#: concrete stand-in for "sufficiently small epsilon"
DEFAULT_EPS_CAP = 0.5
FLOOR_FRACTION = 0.5

MODES = ("standard", "generalized", "weak", "contrast")


class AdmissibilityError(ValueError):
    """epsilon fails the support or smallness conditions."""


class SweepAbortedError(RuntimeError):
    """Fewer than the minimum admissible epsilon values remain."""


def default_eps_list(eps_max: float = 2.0 ** -3, eps_min: float = 2.0 ** -10,
                     steps: int = 8) -> list[float]:
    """Geometric ladder from eps_max down to eps_min."""
    if steps < 2:
        return [eps_max]
    ratio = (eps_min / eps_max) ** (1.0 / (steps - 1))
    return [eps_max * ratio ** i for i in range(steps)]


def admissibility_reason(cfg: ExponentConfig, epsilon: float,
                         eps_cap: float = DEFAULT_EPS_CAP) -> str | None:
    """None when epsilon is admissible, else the violated condition.

    The support of the symbol is the product of the shifted ball
    |xi_1 - e_1| <= eps*r with N-1 balls |xi_k| <= r; admissibility
    places it inside the flat annulus of the cutoff, and additionally
    caps epsilon to keep "sufficiently small" explicit.
    """
    if epsilon <= 0:
        return f"epsilon must be positive, got {epsilon}"
    if epsilon > eps_cap:
        return (
            f"epsilon={epsilon:g} exceeds the admissibility cap {eps_cap:g} "
            "(construction requires small epsilon)"
        )
    cutoff = make_annular_cutoff(cfg.gamma)
    lo = 1.0 - epsilon * cfg.r
    hi = math.sqrt((1.0 + epsilon * cfg.r) ** 2 + (cfg.N - 1) * cfg.r ** 2)
    if lo < cutoff.flat_lo:
        return (
            f"support inclusion violated: min |xi| = {lo:.6f} < "
            f"2^(-1/2+gamma) = {cutoff.flat_lo:.6f}"
        )
    if hi > cutoff.flat_hi:
        return (
            f"support inclusion violated: max |xi| = {hi:.6f} > "
            f"2^(1/2-gamma) = {cutoff.flat_hi:.6f}"
        )
    return None


@dataclass
class SweepContext:
    """Shared tables for one exponent configuration and sweep."""

    cfg: ExponentConfig
    spec: GridSpec
    bump: BumpPair
    wide: WideBump
    cutoff: AnnularCutoff
    psi: SampledFunction
    base_f1_norm: float
    rest_norm_product: float
    sobolev_rest_factors: tuple[float, ...]
    R: float
    floor_const: float
    eps_list: tuple[float, ...]
    diagnostics: dict = field(default_factory=dict)
    _conv_cache: dict = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        cfg: ExponentConfig,
        eps_list: Sequence[float] | None = None,
        box_length: float = DEFAULT_BOX_LENGTH,
        points: int = DEFAULT_POINTS,
    ) -> "SweepContext":
        if cfg.n != 1:
            raise InfeasibleConfigError(
                "hypothesis violated: n == 1 (the sweep path evaluates on "
                "1-d grids; joint grids for n >= 2 are out of scope)"
            )
        eps_list = tuple(eps_list if eps_list is not None else default_eps_list())
        spec = GridSpec(cfg.n, box_length, points)
        bump = make_moment_vanishing_bump(cfg.r, cfg.ell, spec)
        wide = make_wide_bump(cfg.r)
        psi = inverse_ft(wide.sample(spec))
        p1 = cfg.p_vec[0]
        # alpha1 < -n in counterexample mode: phi vanishes at the origin
        base_f1 = weighted_lp_norm(bump.phi, cfg.alpha1, p1, vanishing_origin=True)
        rest = weighted_lp_norm(psi, cfg.alpha2, cfg.p_vec[1])
        for pk in cfg.p_vec[2:]:
            rest *= weighted_lp_norm(psi, 0.0, pk)
        sob_rest = tuple(
            bump_sobolev_norm(bump.phi, sk, cfg.n) for sk in cfg.s_factors[1:]
        )
        ctx = cls(
            cfg=cfg,
            spec=spec,
            bump=bump,
            wide=wide,
            cutoff=make_annular_cutoff(cfg.gamma),
            psi=psi,
            base_f1_norm=base_f1,
            rest_norm_product=rest,
            sobolev_rest_factors=sob_rest,
            R=0.0,
            floor_const=0.0,
            eps_list=eps_list,
        )
        ctx._find_radius()
        ctx.diagnostics["tail_mass_phi"] = tail_mass(bump.phi)
        ctx.diagnostics["tail_mass_psi"] = tail_mass(psi)
        ctx.diagnostics["phiphi0"] = bump.phiphi0
        return ctx

    def conv_on_grid(self, epsilon: float) -> np.ndarray:
        """(phi*phi)(eps x_k) at every grid node, cached per epsilon.

        Evaluated on the distinct radii only (phi*phi is even).
        """
        key = float(epsilon)
        if key not in self._conv_cache:
            unique, inverse = np.unique(self.spec.radius_x, return_inverse=True)
            vals = self.bump.conv_at(epsilon * unique)
            self._conv_cache[key] = vals[inverse].reshape(self.spec.shape())
        return self._conv_cache[key]

    def _find_radius(self):
        """Largest grid radius on which |phi*phi(eps x)| keeps the floor for
        every swept epsilon."""
        floor = FLOOR_FRACTION * abs(self.bump.phiphi0)
        ok = np.ones(self.spec.shape(), dtype=bool)
        for eps in self.eps_list:
            ok &= np.abs(self.conv_on_grid(eps)) >= floor
        rad = self.spec.radius_x
        bad = ~ok
        if bad.any():
            limit = rad[bad].min()
            good = rad[rad < limit]
            radius = float(good.max()) if good.size else 0.0
        else:
            radius = float(rad.max())
        if radius <= 0.0:
            raise AdmissibilityError(
                f"no radius sustains the floor {floor:.3e}; largest "
                f"|phi*phi| deficit at the origin cell"
            )
        self.R = radius
        self.floor_const = floor
        self.diagnostics["R"] = radius
        self.diagnostics["floor_const"] = floor


@dataclass
class Scenario:
    """One epsilon-instance of the counterexample construction."""

    cfg: ExponentConfig
    epsilon: float
    bump: BumpPair
    wide: WideBump
    cutoff: AnnularCutoff
    symbol: MultiplierSymbol
    weights: PowerWeightVector
    R: float
    context: SweepContext


def scenario_symbol(bump: BumpPair, epsilon: float, N: int) -> MultiplierSymbol:
    """Tensor symbol (phi_hat((. - e1)/eps), phi_hat, ..., phi_hat)."""

    def first(xi: np.ndarray) -> np.ndarray:
        return bump.phi_hat_eval(np.abs((xi - 1.0) / epsilon))

    def plain(xi: np.ndarray) -> np.ndarray:
        return bump.phi_hat_eval(np.abs(xi))

    factors = [TensorFactor(fn=first, center=1.0, radius=epsilon * bump.r)]
    factors += [TensorFactor(fn=plain, center=0.0, radius=bump.r)] * (N - 1)
    return MultiplierSymbol(factors=tuple(factors))


def build_scenario(
    cfg: ExponentConfig,
    epsilon: float,
    context: SweepContext | None = None,
    eps_cap: float = DEFAULT_EPS_CAP,
) -> Scenario:
    """Construct and verify one scenario; raises on inadmissible epsilon."""
    reason = admissibility_reason(cfg, epsilon, eps_cap)
    if reason is not None:
        raise AdmissibilityError(reason)
    if context is None:
        context = SweepContext.create(cfg, eps_list=[epsilon])
    symbol = scenario_symbol(context.bump, epsilon, cfg.N)
    # the cutoff must be identically 1 on the support radius range
    lo, hi = symbol.joint_support_radius_range()
    psi_vals = context.cutoff(np.array([lo, hi]))
    if not np.all(psi_vals == 1.0):
        raise AdmissibilityError(
            f"cutoff is not flat on the support radius range [{lo:.4f}, {hi:.4f}]"
        )
    sc = Scenario(
        cfg=cfg,
        epsilon=epsilon,
        bump=context.bump,
        wide=context.wide,
        cutoff=context.cutoff,
        symbol=symbol,
        weights=cfg.weight_vector(),
        R=context.R,
        context=context,
    )
    # the restricted nu-weighted mass of phi^{N-1} must be positive and finite
    mass = _restricted_mass(sc)
    if not (0.0 < mass < np.inf):
        raise AdmissibilityError(f"restricted weighted mass {mass} is degenerate")
    return sc


def _product_form(sc: Scenario) -> SampledFunction:
    """|T_m(f)| / eps^{n/p_1} = |(phi*phi)(eps x)| |phi(x)|^{N-1} on the grid."""
    conv = sc.context.conv_on_grid(sc.epsilon)
    vals = np.abs(conv) * np.abs(sc.bump.phi.values) ** (sc.cfg.N - 1)
    return SampledFunction(sc.context.spec, vals, "physical")


def _restricted_mass(sc: Scenario) -> float:
    cfg = sc.cfg
    spec = sc.context.spec
    weights = power_cell_weights(spec, cfg.a_nu)
    inside = spec.radius_x <= sc.R
    vals = np.abs(sc.bump.phi.values) ** (cfg.p * (cfg.N - 1))
    return fsum(vals * weights * inside)


def lhs_strong(sc: Scenario) -> float:
    """||T_m(f)||_{L^p(nu)} via the exact product form."""
    cfg = sc.cfg
    scale = sc.epsilon ** (cfg.n / cfg.p_vec[0])
    return scale * weighted_lp_norm(_product_form(sc), cfg.a_nu, cfg.p)


def lhs_weak(sc: Scenario) -> float:
    """||T_m(f)||_{L^{p,infty}(nu)} via the product form."""
    cfg = sc.cfg
    scale = sc.epsilon ** (cfg.n / cfg.p_vec[0])
    return scale * weak_lp_norm(_product_form(sc), cfg.a_nu, cfg.p)


@dataclass(frozen=True)
class RhsParts:
    sup_sobolev: float
    f1_norm: float
    rest_norm_product: float
    sup_result: SupSobolevResult


def rhs(sc: Scenario) -> RhsParts:
    """Symbol regularity, first-input norm and the epsilon-free norms."""
    cfg = sc.cfg
    ctx = sc.context

    def piece_norm(j: int) -> float:
        if j != 0:
            raise AdmissibilityError(
                f"piece j={j} survived pruning; epsilon={sc.epsilon} is not "
                "inside the flat annulus"
            )
        first = rescaled_bump_sobolev_norm(
            ctx.bump.phi, sc.epsilon, cfg.s_factors[0], cfg.n
        )
        return first * math.prod(ctx.sobolev_rest_factors)

    sup_result = sup_sobolev_over_j(
        sc.symbol, sc.cutoff, cfg.s_factors, piece_norm=piece_norm
    )
    f1 = sc.epsilon ** (-cfg.alpha1 / cfg.p_vec[0]) * ctx.base_f1_norm
    return RhsParts(
        sup_sobolev=sup_result.sup,
        f1_norm=f1,
        rest_norm_product=ctx.rest_norm_product,
        sup_result=sup_result,
    )


# ---------------------------------------------------------------------------
# slope fitting and predictions


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least squares fit of log ys against log xs."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 3:
        raise ValueError(f"need at least 3 points, got {xs.size}")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("power-law fit requires strictly positive data")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(slope=float(slope), intercept=float(intercept), r_squared=r2)


@dataclass(frozen=True)
class PredictedSlopes:
    f1: float
    sobolev: float
    lhs: float
    ratio: float

    def as_dict(self) -> dict:
        return {"f1": self.f1, "sobolev": self.sobolev, "lhs": self.lhs, "ratio": self.ratio}


def predicted_slopes(cfg: ExponentConfig) -> PredictedSlopes:
    """Log-log slopes implied by the exact scaling identities."""
    n, p1 = cfg.n, cfg.p_vec[0]
    s1 = cfg.s_factors[0]
    return PredictedSlopes(
        f1=-cfg.alpha1 / p1,
        sobolev=n / 2.0 - s1,
        lhs=n / p1,
        ratio=n / p1 + cfg.alpha1 / p1 + s1 - n / 2.0,
    )


# ---------------------------------------------------------------------------
# sweeping


CSV_COLUMNS = (
    "epsilon",
    "lhs_strong",
    "lhs_weak",
    "sup_sobolev",
    "f1_norm",
    "rest_norm_product",
    "ratio_strong",
    "ratio_weak",
)

#: pre-asymptotic points excluded from the headline fits
FIT_DROP_LARGEST = 2
MIN_SWEEP_POINTS = 4


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    lhs_strong: float
    lhs_weak: float
    sup_sobolev: float
    f1_norm: float
    rest_norm_product: float
    ratio_strong: float
    ratio_weak: float
    argmax_j: int

    def as_csv_values(self) -> tuple:
        return tuple(getattr(self, c) for c in CSV_COLUMNS)


@dataclass
class SweepReport:
    cfg: ExponentConfig
    mode: str
    rows: list[SweepRow]
    skipped: list[tuple[float, str]]
    fitted: dict[str, FitResult]
    fitted_all: dict[str, FitResult]
    predicted: PredictedSlopes
    monotone_ratio: bool
    passed: bool
    diagnostics: dict

    def fitted_slopes(self) -> dict:
        return {k: v.slope for k, v in self.fitted.items()}

    def as_json_dict(self, config_echo: dict | None = None) -> dict:
        return {
            "config_echo": config_echo if config_echo is not None else {},
            "mode": self.mode,
            "fitted_slopes": {k: v.slope for k, v in self.fitted.items()},
            "fitted_slopes_all_points": {k: v.slope for k, v in self.fitted_all.items()},
            "fit_r_squared": {k: v.r_squared for k, v in self.fitted.items()},
            "predicted_slopes": self.predicted.as_dict(),
            "monotone_ratio": self.monotone_ratio,
            "pass": self.passed,
            "skipped_epsilons": [
                {"epsilon": e, "reason": r} for e, r in self.skipped
            ],
            "diagnostics": self.diagnostics,
        }


def _sweep_row(cfg: ExponentConfig, eps: float, ctx: SweepContext) -> SweepRow:
    sc = build_scenario(cfg, eps, context=ctx)
    strong = lhs_strong(sc)
    weak = lhs_weak(sc)
    parts = rhs(sc)
    denom = parts.sup_sobolev * parts.f1_norm * parts.rest_norm_product
    return SweepRow(
        epsilon=eps,
        lhs_strong=strong,
        lhs_weak=weak,
        sup_sobolev=parts.sup_sobolev,
        f1_norm=parts.f1_norm,
        rest_norm_product=parts.rest_norm_product,
        ratio_strong=strong / denom,
        ratio_weak=weak / denom,
        argmax_j=parts.sup_result.argmax_j if parts.sup_result.argmax_j is not None else 0,
    )


def _fit_columns(rows: list[SweepRow]) -> dict[str, FitResult]:
    eps = [r.epsilon for r in rows]
    return {
        "f1": fit_power_law(eps, [r.f1_norm for r in rows]),
        "sobolev": fit_power_law(eps, [r.sup_sobolev for r in rows]),
        "lhs": fit_power_law(eps, [r.lhs_strong for r in rows]),
        "ratio_strong": fit_power_law(eps, [r.ratio_strong for r in rows]),
        "ratio_weak": fit_power_law(eps, [r.ratio_weak for r in rows]),
    }


def _evaluate_pass(
    mode: str, fitted: dict[str, FitResult], predicted: PredictedSlopes, monotone: bool
) -> bool:
    if mode == "contrast":
        return fitted["ratio_strong"].slope >= -0.05
    ok = (
        abs(fitted["ratio_strong"].slope - predicted.ratio) <= 0.1
        and abs(fitted["f1"].slope - predicted.f1) <= 1e-3
        and abs(fitted["sobolev"].slope - predicted.sobolev) <= 0.05
        and predicted.ratio < 0.0
        and monotone
    )
    if mode == "weak":
        ok = ok and fitted["ratio_weak"].slope <= -0.05
    return ok


def sweep(
    cfg: ExponentConfig,
    eps_list: Sequence[float] | None = None,
    context: SweepContext | None = None,
    mode: str = "standard",
    box_length: float = DEFAULT_BOX_LENGTH,
    points: int = DEFAULT_POINTS,
    jobs: int = 1,
) -> SweepReport:
    """Run the epsilon sweep and assemble the report.

    Inadmissible epsilons are skipped with a recorded reason; fewer than
    MIN_SWEEP_POINTS admissible points aborts.  Headline fits drop the
    FIT_DROP_LARGEST largest epsilon values (pre-asymptotic regime);
    the all-points fits are reported alongside.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode == "contrast":
        cfg.validate_hypotheses()
        cfg.validate_weight_class()
    else:
        cfg.validate_counterexample()
    requested = list(eps_list if eps_list is not None else default_eps_list())
    admissible, skipped = [], []
    for eps in requested:
        reason = admissibility_reason(cfg, eps)
        if reason is None:
            admissible.append(eps)
        else:
            skipped.append((eps, reason))
    if len(admissible) < MIN_SWEEP_POINTS:
        raise SweepAbortedError(
            f"only {len(admissible)} admissible epsilon values "
            f"(need >= {MIN_SWEEP_POINTS}); skipped: {skipped}"
        )
    ctx = context or SweepContext.create(
        cfg, eps_list=admissible, box_length=box_length, points=points
    )
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda e: _sweep_row(cfg, e, ctx), admissible))
    else:
        rows = [_sweep_row(cfg, eps, ctx) for eps in admissible]
    rows.sort(key=lambda r: -r.epsilon)

    by_eps_desc = [r.ratio_strong for r in rows]
    monotone = all(b > a * 0.99 for a, b in zip(by_eps_desc, by_eps_desc[1:]))
    fitted_all = _fit_columns(rows)
    tail = rows[FIT_DROP_LARGEST:] if len(rows) > FIT_DROP_LARGEST + 2 else rows
    fitted = _fit_columns(tail)
    predicted = predicted_slopes(cfg)
    passed = _evaluate_pass(mode, fitted, predicted, monotone)
    diagnostics = dict(ctx.diagnostics)
    diagnostics["argmax_j"] = sorted({r.argmax_j for r in rows})
    diagnostics["fit_drop_largest"] = FIT_DROP_LARGEST if len(rows) > FIT_DROP_LARGEST + 2 else 0
    return SweepReport(
        cfg=cfg,
        mode=mode,
        rows=rows,
        skipped=skipped,
        fitted=fitted,
        fitted_all=fitted_all,
        predicted=predicted,
        monotone_ratio=monotone,
        passed=passed,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# direct-grid cross-checks (moderate epsilon only)

CROSSCHECK_EPS = (0.25, 0.125)
DIRECT_BOX_LENGTH = 262144.0
DIRECT_POINTS = 1 << 19
SOBOLEV_CHECK_BOX = 8.0
SOBOLEV_CHECK_POINTS = 1 << 18


@dataclass(frozen=True)
class CrossCheckResult:
    name: str
    epsilon: float
    identity_value: float
    direct_value: float
    rel_error: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.rel_error <= self.tolerance


def crosscheck_sobolev(
    ctx: SweepContext, epsilon: float, tolerance: float = 1e-4
) -> CrossCheckResult:
    """Identity-path W^{s_1} factor vs a direct grid transform of the symbol."""
    cfg = ctx.cfg
    s1 = cfg.s_factors[0]
    identity = rescaled_bump_sobolev_norm(ctx.bump.phi, epsilon, s1, cfg.n)
    spec = GridSpec(1, SOBOLEV_CHECK_BOX, SOBOLEV_CHECK_POINTS)
    g = ctx.bump.phi_hat_eval(np.abs((spec.axis_x - 1.0) / epsilon))
    sampled = SampledFunction(spec, g.astype(complex), "physical")
    from .norms import sobolev_norm

    direct = sobolev_norm(sampled, s1)
    rel = abs(identity - direct) / max(identity, direct)
    return CrossCheckResult("sobolev_factor", epsilon, identity, direct, rel, tolerance)


def _direct_grid_inputs(
    ctx: SweepContext, epsilon: float
) -> tuple[GridSpec, SampledFunction, SampledFunction]:
    cfg = ctx.cfg
    spec = GridSpec(1, DIRECT_BOX_LENGTH, DIRECT_POINTS)
    p1 = cfg.p_vec[0]
    f1hat = epsilon ** (cfg.n / p1 - cfg.n) * ctx.bump.phi_hat_eval(
        np.abs((spec.axis_xi - 1.0) / epsilon)
    )
    f1 = inverse_ft(SampledFunction(spec, f1hat.astype(complex), "frequency"))
    f2 = inverse_ft(ctx.wide.sample(spec))
    return spec, f1, f2


def crosscheck_f1_norm(
    ctx: SweepContext, epsilon: float, tolerance: float = 0.01
) -> CrossCheckResult:
    """Exact substitution identity for ||f_1|| vs the direct grid norm."""
    cfg = ctx.cfg
    p1 = cfg.p_vec[0]
    identity = epsilon ** (-cfg.alpha1 / p1) * ctx.base_f1_norm
    _, f1, _ = _direct_grid_inputs(ctx, epsilon)
    direct = weighted_lp_norm(f1, cfg.alpha1, p1, vanishing_origin=True)
    rel = abs(identity - direct) / max(identity, direct)
    return CrossCheckResult("f1_norm", epsilon, identity, direct, rel, tolerance)


def crosscheck_tm_norm(
    ctx: SweepContext, epsilon: float, tolerance: float = 0.02
) -> CrossCheckResult:
    """Product-form lhs vs tensor-path evaluation plus the weighted norm."""
    cfg = ctx.cfg
    if cfg.N != 2:
        raise InfeasibleConfigError(
            "hypothesis violated: N == 2 (direct multiplier cross-check)"
        )
    sc = build_scenario(cfg, epsilon, context=ctx)
    identity = lhs_strong(sc)
    spec, f1, f2 = _direct_grid_inputs(ctx, epsilon)
    from .multiplier import apply_multilinear_tensor

    symbol = scenario_symbol(ctx.bump, epsilon, cfg.N)
    t = apply_multilinear_tensor(symbol.factors, [f1, f2])
    direct = weighted_lp_norm(t, cfg.a_nu, cfg.p)
    rel = abs(identity - direct) / max(identity, direct)
    return CrossCheckResult("tm_norm", epsilon, identity, direct, rel, tolerance)


def run_crosschecks(
    cfg: ExponentConfig,
    context: SweepContext | None = None,
    eps_values: Sequence[float] = CROSSCHECK_EPS,
    tolerances: dict | None = None,
) -> list[CrossCheckResult]:
    tolerances = tolerances or {}
    ctx = context or SweepContext.create(cfg, eps_list=list(eps_values))
    out = []
    for eps in eps_values:
        out.append(crosscheck_sobolev(ctx, eps, tolerances.get("sobolev", 1e-4)))
        out.append(crosscheck_f1_norm(ctx, eps, tolerances.get("f1", 0.01)))
        out.append(crosscheck_tm_norm(ctx, eps, tolerances.get("tm", 0.02)))
    return out


# ---------------------------------------------------------------------------
# table probe: which (regularity, weight-class) cell blows up


def _full_sobolev_symbol_norm(ctx: SweepContext, epsilon: float, s: int) -> float:
    """||m^(eps)||_{W^s} on R^{2n} for integer s, via separable moments.

    The joint transform of the tensor symbol factorizes, and for integer
    s the isotropic weight (1 + x1^2 + x2^2)^s expands binomially into
    separable moments of the two profiles.
    """
    if ctx.cfg.N != 2 or ctx.cfg.n != 1:
        raise InfeasibleConfigError(
            "hypothesis violated: N == 2 and n == 1 (full-Sobolev probe)"
        )
    if s != int(s) or s < 0:
        raise InfeasibleConfigError(
            f"hypothesis violated: integer s (full-Sobolev probe needs integer s, got {s})"
        )
    s = int(s)
    spec = ctx.spec
    x = spec.radius_x
    h = spec.h
    phi_sq = np.abs(ctx.bump.phi.values) ** 2
    # |m_hat(x1, x2)|^2 = (2 pi eps)^2 phi(eps x1)^2 * (2 pi)^2 phi(x2)^2;
    # substituting y = eps x1 leaves one eps^{-1} and separable moments:
    # I1(j) = int (1 + (y/eps)^2)^j phi(y)^2 dy, I2(k) = int y^{2k} phi(y)^2 dy
    profile1 = (2.0 * np.pi * epsilon) ** 2 * phi_sq
    profile2 = (2.0 * np.pi) ** 2 * phi_sq
    i1 = [
        fsum((1.0 + (x / epsilon) ** 2) ** j * profile1) * h for j in range(s + 1)
    ]
    i2 = [fsum(x ** (2 * k) * profile2) * h for k in range(s + 1)]
    total = sum(math.comb(s, k) * i1[s - k] * i2[k] for k in range(s + 1))
    return math.sqrt(total / epsilon)


@dataclass(frozen=True)
class TableCell:
    regularity: str
    weight_class: str
    ratio_slope: float
    blows_up: bool


def table_probe(
    cfg: ExponentConfig,
    eps_list: Sequence[float] | None = None,
    box_length: float = DEFAULT_BOX_LENGTH,
    points: int = DEFAULT_POINTS,
) -> list[TableCell]:
    """Probe the four (regularity, weight-class) cells with mini sweeps.

    Rows: full-space W^s versus product-type W^{(s/N,...,s/N)}.
    Columns: product-class weights (all exponents 0) versus the
    counterexample weight vector.  Only the (product-type, multilinear
    class) cell should show a negative fitted ratio slope.
    """
    if cfg.is_generalized:
        raise InfeasibleConfigError(
            "hypothesis violated: scalar s (the table probe uses standard mode)"
        )
    cfg.validate_counterexample()
    eps_values = list(eps_list if eps_list is not None else default_eps_list())
    contrast_cfg = ExponentConfig(
        N=cfg.N, n=cfg.n, s=cfg.s, p_vec=cfg.p_vec,
        alpha1=0.0, alpha2=0.0, ell=cfg.ell, r=cfg.r, gamma=cfg.gamma,
    )
    cells = []
    for weight_name, wcfg in (("product_class", contrast_cfg), ("multilinear_class", cfg)):
        ctx = SweepContext.create(wcfg, eps_list=eps_values,
                                  box_length=box_length, points=points)
        rows_prod, rows_full, eps_ok = [], [], []
        for eps in eps_values:
            if admissibility_reason(wcfg, eps) is not None:
                continue
            sc = build_scenario(wcfg, eps, context=ctx)
            strong = lhs_strong(sc)
            parts = rhs(sc)
            denom_rest = parts.f1_norm * parts.rest_norm_product
            rows_prod.append(strong / (parts.sup_sobolev * denom_rest))
            full_norm = _full_sobolev_symbol_norm(ctx, eps, int(cfg.s))
            rows_full.append(strong / (full_norm * denom_rest))
            eps_ok.append(eps)
        tail = slice(FIT_DROP_LARGEST, None) if len(eps_ok) > FIT_DROP_LARGEST + 2 else slice(None)
        slope_full = fit_power_law(eps_ok[tail], rows_full[tail]).slope
        slope_prod = fit_power_law(eps_ok[tail], rows_prod[tail]).slope
        cells.append(TableCell("W^s", weight_name, slope_full, slope_full < -0.05))
        cells.append(
            TableCell("W^(s/N,...)", weight_name, slope_prod, slope_prod < -0.05)
        )
    return cells
