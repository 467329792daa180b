"""Numerical laboratory for weighted estimates of multilinear Fourier
multiplier operators: grids and transforms, moment-vanishing bumps,
power-weight Muckenhoupt-class probes, weighted and Sobolev norms,
multiplier evaluation, and epsilon-sweep scaling experiments."""

from .grid import GridSpec, SampledFunction, forward_ft, inverse_ft
from .weights import ExponentConfig, PowerWeightVector, choose_counterexample_exponents

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "SampledFunction",
    "forward_ft",
    "inverse_ft",
    "ExponentConfig",
    "PowerWeightVector",
    "choose_counterexample_exponents",
    "__version__",
]
