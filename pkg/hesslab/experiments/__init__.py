from .pogorelov import (
    pogorelov_scan, pogorelov_sweep, test_function_field, localization_weight, beta_threshold,
    refinement_change,
)
from .rigidity import rigidity_experiment, rigidity_row, holder_proxy, decay_holds
from .fit import quadratic_fit, fit_quadratic

__all__ = [
    "pogorelov_scan", "pogorelov_sweep", "test_function_field", "localization_weight", "beta_threshold",
    "refinement_change", "rigidity_experiment", "rigidity_row", "holder_proxy", "decay_holds",
    "quadratic_fit", "fit_quadratic",
]
