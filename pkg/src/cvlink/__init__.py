"""Gaussian covariance simulation of remote atomic-gas entanglement over lossy optical links."""

from .entanglement import TwoModeSummary, epr_uncertainty, negativity, partial_transpose
from .gaussian import DomainError, GaussianState, ModeKind, ModeLabel, SymplecticMap
from .protocols import (
    ChannelParams,
    analytic_asymmetric_covariance,
    asymptotic_negativity,
    delta_closed_form,
    delta_steady_state,
    epr_source_delta,
    optimal_r,
    riccati_coeffs,
    run_asymmetric,
    run_polygamy,
    run_symmetric,
)
from .teleport import clone_bound, fidelity_bk, fidelity_symmetric, optimize_local_squeezing

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "DomainError",
    "GaussianState",
    "ModeKind",
    "ModeLabel",
    "SymplecticMap",
    "TwoModeSummary",
    "analytic_asymmetric_covariance",
    "asymptotic_negativity",
    "clone_bound",
    "delta_closed_form",
    "delta_steady_state",
    "epr_source_delta",
    "epr_uncertainty",
    "fidelity_bk",
    "fidelity_symmetric",
    "negativity",
    "optimal_r",
    "optimize_local_squeezing",
    "partial_transpose",
    "riccati_coeffs",
    "run_asymmetric",
    "run_polygamy",
    "run_symmetric",
]
