"""Numerical verification of the rotationally invariant, inequality-free Bell
argument for two spin-3/2 particles in the singlet state."""

from .correlations import (
    CorrelationConstraint,
    correlation_value,
    nine_constraints,
    rotated_constraints,
    verify_perfect,
)
from .lhv import LhvAssignment, exhaustive_search, parity_argument
from .observables import DichotomicObservable, build_context, canonical_observables, commute, sz_readout
from .rotations import RotationSpec, random_rotation, rotation_operator
from .sampling import run_experiment, sample_round
from .spin_algebra import hermitian_eigensystem, matrix_exponential_skew_hermitian, spin_operators, tensor
from .states import invariance_defect, singlet

__version__ = "0.1.0"
