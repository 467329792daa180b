"""Flat key=value run configuration: parsing, serialization, resolution.

The file format is one `key = value` pair per line, `#` comments, no
sections.  Unknown keys are rejected so config typos fail loudly, and
the parsed mapping serializes back losslessly.  Exponent fields accept
the literal `auto`, resolved through the chooser into concrete numbers;
the resolved values are echoed into every JSON report.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .scenario import default_eps_list
from .weights import (
    ExponentConfig,
    choose_counterexample_exponents,
    choose_moment_order,
)

AUTO = "auto"
MODES = ("standard", "generalized", "weak", "contrast")


class ConfigParseError(ValueError):
    """Malformed, unknown or duplicated configuration key."""


def _parse_int(text: str) -> int:
    return int(text)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _parse_scalar_or_list(text: str):
    if "," in text:
        return _parse_float_list(text)
    return float(text)


def _parse_auto_float(text: str):
    return AUTO if text == AUTO else float(text)


def _parse_auto_int(text: str):
    return AUTO if text == AUTO else int(text)


def _parse_mode(text: str) -> str:
    if text not in MODES:
        raise ConfigParseError(f"mode must be one of {MODES}, got {text!r}")
    return text


def _fmt(value) -> str:
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    """Everything one reproducible run needs."""

    N: int = 2
    n: int = 1
    s: float | tuple[float, ...] = 2.0
    p: tuple[float, ...] = (2.0, 2.0)
    alpha1: float | str = AUTO
    alpha2: float | str = AUTO
    ell: int | str = AUTO
    r: float | str = AUTO
    gamma: float = 0.05
    L_box: float = 65536.0
    M: int = 131072
    eps_min: float = 2.0 ** -10
    eps_max: float = 2.0 ** -3
    steps: int = 8
    mode: str = "standard"
    family_K: int = 12
    jobs: int = 1
    tol_crosscheck_sobolev: float = 1e-4
    tol_crosscheck_f1: float = 0.01
    tol_crosscheck_tm: float = 0.02

    def resolved_r(self) -> float:
        return 1.0 / (10.0 * self.N) if self.r == AUTO else float(self.r)

    def resolve_exponents(self) -> ExponentConfig:
        """Concrete ExponentConfig with auto fields filled in."""
        s = tuple(self.s) if isinstance(self.s, tuple) else float(self.s)
        if self.mode == "generalized" and not isinstance(s, tuple):
            s = (float(s),) * self.N
        if self.mode != "generalized" and isinstance(s, tuple):
            raise ConfigParseError(
                "vector s requires mode = generalized (or pass a scalar s)"
            )
        if self.mode == "contrast":
            alpha1 = 0.0 if self.alpha1 == AUTO else float(self.alpha1)
            alpha2 = 0.0 if self.alpha2 == AUTO else float(self.alpha2)
        elif self.alpha1 == AUTO or self.alpha2 == AUTO:
            a1, a2 = choose_counterexample_exponents(self.N, self.n, s, self.p)
            alpha1 = a1 if self.alpha1 == AUTO else float(self.alpha1)
            alpha2 = a2 if self.alpha2 == AUTO else float(self.alpha2)
        else:
            alpha1, alpha2 = float(self.alpha1), float(self.alpha2)
        if self.ell == AUTO:
            ell = choose_moment_order(self.p[0], alpha1, self.n)
        else:
            ell = int(self.ell)
        return ExponentConfig(
            N=self.N,
            n=self.n,
            s=s,
            p_vec=tuple(self.p),
            alpha1=alpha1,
            alpha2=alpha2,
            ell=ell,
            r=self.resolved_r(),
            gamma=self.gamma,
        )

    def eps_list(self) -> list[float]:
        return default_eps_list(self.eps_max, self.eps_min, self.steps)

    def echo_dict(self) -> dict:
        """Fully resolved values for report provenance."""
        cfg = self.resolve_exponents()
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["s"] = list(cfg.s) if cfg.is_generalized else cfg.s
        out["p"] = list(self.p)
        out["alpha1"] = cfg.alpha1
        out["alpha2"] = cfg.alpha2
        out["ell"] = cfg.ell
        out["r"] = cfg.r
        out["q"] = list(cfg.q_vec)
        out["a_nu"] = cfg.a_nu
        return out


_PARSERS = {
    "N": _parse_int,
    "n": _parse_int,
    "s": _parse_scalar_or_list,
    "p": _parse_float_list,
    "alpha1": _parse_auto_float,
    "alpha2": _parse_auto_float,
    "ell": _parse_auto_int,
    "r": _parse_auto_float,
    "gamma": _parse_float,
    "L_box": _parse_float,
    "M": _parse_int,
    "eps_min": _parse_float,
    "eps_max": _parse_float,
    "steps": _parse_int,
    "mode": _parse_mode,
    "family_K": _parse_int,
    "jobs": _parse_int,
    "tol_crosscheck_sobolev": _parse_float,
    "tol_crosscheck_f1": _parse_float,
    "tol_crosscheck_tm": _parse_float,
}


def parse_config(text: str) -> RunConfig:
    """Parse the flat key=value format; unknown keys are rejected."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _PARSERS:
            raise ConfigParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](val)
        except ConfigParseError:
            raise
        except ValueError as exc:
            raise ConfigParseError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    lines = [f"{f.name} = {_fmt(getattr(cfg, f.name))}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    filtered = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **filtered) if filtered else cfg
