"""Schwarzian derivatives as multipliers between weighted Bergman spaces.

Submodules: ``series`` (truncated power series and the test-function
registry), ``schwarzian``, ``bergman`` (weighted norms and quadrature),
``multiplier``, ``grunsky``, ``spectrum``, ``curveclass`` and ``cli``.
"""
from .errors import DomainError, NormInfinite, NumericalError, RegistryError, SeriesError
from .series import DiskFunction, TaylorSeries, build_from_spec, registry_build
from .schwarzian import ahlfors_weill_k, bloch_norm, schwarzian_at
from .bergman import bergman_norm, disk_integral, kernel_probe, monomial_norm_sq
from .multiplier import brennan_threshold, shimorin_bound, theorem1_bound, theorem1_check
from .grunsky import grunsky_coefficients, grunsky_form, grunsky_norm
from .spectrum import hedenmalm_bound, hedenmalm_roots, spectrum_estimate
from .curveclass import classify

__version__ = "0.1.0"

__all__ = [
    "DiskFunction",
    "DomainError",
    "NormInfinite",
    "NumericalError",
    "RegistryError",
    "SeriesError",
    "TaylorSeries",
    "ahlfors_weill_k",
    "bergman_norm",
    "bloch_norm",
    "brennan_threshold",
    "build_from_spec",
    "classify",
    "disk_integral",
    "grunsky_coefficients",
    "grunsky_form",
    "grunsky_norm",
    "hedenmalm_bound",
    "hedenmalm_roots",
    "kernel_probe",
    "monomial_norm_sq",
    "registry_build",
    "schwarzian_at",
    "shimorin_bound",
    "spectrum_estimate",
    "theorem1_bound",
    "theorem1_check",
]
