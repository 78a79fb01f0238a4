"""Multiphoton ladder operators of solvable 1D Hamiltonians and their SUSY partners."""
from .coherent import CoefficientVector, CoherentStateSpec, coefficients, eigen_residual, phi, rho
from .errors import (
    ConfigError,
    DimensionTooSmall,
    MissingLevel,
    MultiphotonError,
    NegativeRadicand,
    PoleProximity,
    PositionSpaceError,
    SingularDenominator,
    TruncationFailure,
    ZeroCrossing,
)
from .ladder import LadderSpec, annihilate_m, commutator_structure, create_m, r_coefficient
from .spectrum import ModelSpec, gap, multiphoton_gap, validate
from .susy import SusyConfig, ell_annihilate, ell_create, partner_spectrum
from .uncertainty import QuadratureKind, scan, uncertainty_product

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector", "CoherentStateSpec", "coefficients", "eigen_residual", "phi", "rho",
    "ConfigError", "DimensionTooSmall", "MissingLevel", "MultiphotonError", "NegativeRadicand",
    "PoleProximity", "PositionSpaceError", "SingularDenominator", "TruncationFailure",
    "ZeroCrossing", "LadderSpec", "annihilate_m", "commutator_structure", "create_m",
    "r_coefficient", "ModelSpec", "gap", "multiphoton_gap", "validate", "SusyConfig",
    "ell_annihilate", "ell_create", "partner_spectrum", "QuadratureKind", "scan",
    "uncertainty_product",
]
