"""Exact open-system dynamics of the damped quantum harmonic oscillator.

The Lindblad generator of an oscillator in a thermal bath has a closed-form
biorthogonal eigenbasis.  This package builds it, propagates states with it,
and cross-checks the result against a product-of-exponentials propagator, a
ladder-operator construction and a dense matrix-exponential oracle.
"""

__version__ = "0.1.0"

from .core import (
    ModelParams,
    annihilation,
    corpus,
    creation,
    default_dim,
    fock_state,
    gibbs_state,
    make_params,
    number,
    std_params,
    superposition_state,
    trace_distance,
    trace_norm,
    validate_density,
)
from .disentangle import TruncationWarning, disentangled_propagate, f_functions
from .estimators import DisentangledPropagator, ExpmPropagator, LadderPropagator, SpectralPropagator
from .ladder import apply_ladder, build_eigenstate, dual_vector, ladder_propagate
from .observables import energy_trajectory, expectation, quadrature_trajectory, trajectory_compare
from .oracle import expm_propagate, numerical_spectrum
from .spectral import (
    SpectralBasis,
    eigenvalue,
    left_vector,
    pairing,
    projection_apply,
    right_vector,
    spectral_propagate,
)
from .superop import SuperOperator, liouvillian_matrix
from .validation import DimensionError, ParameterError, TruncationError

__all__ = [
    "DimensionError", "DisentangledPropagator", "ExpmPropagator", "LadderPropagator", "ModelParams",
    "ParameterError", "SpectralBasis", "SpectralPropagator", "SuperOperator", "TruncationError",
    "TruncationWarning", "annihilation", "apply_ladder", "build_eigenstate", "corpus", "creation",
    "default_dim", "disentangled_propagate", "dual_vector", "eigenvalue", "energy_trajectory",
    "expectation", "expm_propagate", "f_functions", "fock_state", "gibbs_state", "ladder_propagate",
    "left_vector", "liouvillian_matrix", "make_params", "number", "numerical_spectrum", "pairing",
    "projection_apply", "quadrature_trajectory", "right_vector", "spectral_propagate", "std_params",
    "superposition_state", "trace_distance", "trace_norm", "trajectory_compare", "validate_density",
]
