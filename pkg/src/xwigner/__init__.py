"""Cross-Wigner distributions, Gouy phases and phase-space tomography for
correlated Gaussian matter waves."""

from .crosswigner import (PhaseSpaceField, cw_free_params, cw_screen_params, cw_slits,
                          eval_cw_free, eval_cw_screen, gouy_delta_free, gouy_delta_slit,
                          quasi_prob)
from .errors import (ConfigError, ConsistencyError, CoverageError, DegenerateOverlapError,
                     FocusSingularityError, GridIOError, NumericalError, TruncationError,
                     XWignerError)
from .propagation import (aging_time, eval_free, eval_slit, free_evolve, kernel, screen_state,
                          slit_evolve)
from .states import (NEUTRON, GaussianState, PhysicalConfig, covariance, eval_state,
                     make_initial_state, quadrature_variances)

__version__ = "0.1.0"

__all__ = [
    "PhaseSpaceField", "cw_free_params", "cw_screen_params", "cw_slits", "eval_cw_free",
    "eval_cw_screen", "gouy_delta_free", "gouy_delta_slit", "quasi_prob",
    "ConfigError", "ConsistencyError", "CoverageError", "DegenerateOverlapError",
    "FocusSingularityError", "GridIOError", "NumericalError", "TruncationError", "XWignerError",
    "aging_time", "eval_free", "eval_slit", "free_evolve", "kernel", "screen_state", "slit_evolve",
    "NEUTRON", "GaussianState", "PhysicalConfig", "covariance", "eval_state",
    "make_initial_state", "quadrature_variances",
]
