"""Design and verification tools for a flux-tunable two-photon phase shifter."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .circuit import (BaseQuantities, CircuitParams, FluxBias, LinearizationPoint,
                      coupling_coefficients, derive_base_quantities, dressed_frequencies,
                      linearization_point)
from .errors import (CQEDError, ConfigError, ConvergenceError, InfeasibleDesignError,
                     NumericalError, ParameterDomainError, UnstablePotentialError)
from .gate import FockRegister, gate_fidelity, two_photon_phase_gate
from .linear import analytic_model, effective_hamiltonian, normal_modes
from .protocol import HoldModel, LossParams, design_protocol, evolve_oracle
from .spectrum import BasisSpec, flux_sweep, solve

__all__ = [
    "BACKEND", "BaseQuantities", "BasisSpec", "CQEDError", "CircuitParams", "ConfigError",
    "ConvergenceError", "FluxBias", "FockRegister", "HoldModel", "InfeasibleDesignError",
    "LinearizationPoint", "LossParams", "NumericalError", "ParameterDomainError",
    "UnstablePotentialError", "analytic_model", "coupling_coefficients",
    "derive_base_quantities", "design_protocol", "dressed_frequencies",
    "effective_hamiltonian", "evolve_oracle", "flux_sweep", "gate_fidelity",
    "linearization_point", "normal_modes", "solve", "two_photon_phase_gate",
]
