"""
Gaussian-state thermodynamics of a bosonic mode driven against a squeezed
thermal reservoir, with a truncated Fock-space oracle for cross-checks.
"""

from .gaussian import (
    DomainError,
    GaussianState,
    InvalidStateError,
    ModeFrame,
    SymplecticOp,
    beam_splitter_op,
    entropy,
    make_thermal,
    rotation_op,
    squeeze_op,
    vacuum,
)
from .kernels import BACKEND
from .reservoir import ReservoirSpec, equilibrium_state, xi_star

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "GaussianState",
    "InvalidStateError",
    "ModeFrame",
    "ReservoirSpec",
    "SymplecticOp",
    "beam_splitter_op",
    "entropy",
    "equilibrium_state",
    "make_thermal",
    "rotation_op",
    "squeeze_op",
    "vacuum",
    "xi_star",
]
