"""Monte Carlo experiments on the necessity constructions.

Floating point is confined to this subpackage. The integrand kernel comes
from a compiled extension when available (see ``backend``).
"""

from .backend import NAME as BACKEND
from .constructions import TestFunctionSpec, find_w, weighted_norm
from .growth import (DEFAULT_SCALES, GrowthFit, IntegrabilityReport, SlopeTestResult, fit_growth,
                     integrability_test, scaling_slope_test, subspace_slope_test, translation_test)
from .montecarlo import Estimate, SampleConfig, estimate_form

__all__ = [
    "BACKEND", "DEFAULT_SCALES", "Estimate", "GrowthFit", "IntegrabilityReport", "SampleConfig",
    "SlopeTestResult", "TestFunctionSpec", "estimate_form", "find_w", "fit_growth",
    "integrability_test", "scaling_slope_test", "subspace_slope_test", "translation_test",
    "weighted_norm",
]
