"""The dichotomic spin-3/2 observables D, d, U, u, their products, and joint contexts."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .spin_algebra import TOL, as_matrix, hermitian_eigensystem, is_hermitian, max_abs

GENERATORS = ("D", "d", "U", "u")
PRODUCTS = ("Dd", "Du", "Ud", "Uu")
LABELS = GENERATORS + PRODUCTS


class NonCommutingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DichotomicObservable:
    """Hermitian involution (spectrum within {-1, +1}) tagged with a label."""

    label: str
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        if not is_hermitian(m):
            raise ValueError(f"observable {self.label!r} is not Hermitian")
        if max_abs(m @ m - np.eye(m.shape[0])) > TOL:
            raise ValueError(f"observable {self.label!r} does not square to the identity")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @functools.cached_property
    def _eigenprojectors(self) -> dict[int, np.ndarray]:
        out = {+1: np.zeros_like(self.matrix), -1: np.zeros_like(self.matrix)}
        for lam, proj in hermitian_eigensystem(self.matrix):
            out[int(round(lam))] = proj
        return out

    def eigenprojector(self, outcome: int) -> np.ndarray:
        """Projector onto the ``outcome`` (+1 or -1) eigenspace."""
        return self._eigenprojectors[outcome]

    def conjugated(self, r) -> DichotomicObservable:
        """The observable ``r O r^H`` measured by a device rotated by ``r``."""
        r = as_matrix(r)
        rh = r.conj().T
        out = DichotomicObservable(self.label, r @ self.matrix @ rh)
        # spectral projectors transform covariantly; no need to diagonalize again
        out.__dict__["_eigenprojectors"] = {k: r @ p @ rh for k, p in self._eigenprojectors.items()}
        return out


def _permutation(pairs) -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.complex128)
    for i, j in pairs:
        m[i, j] = m[j, i] = 1.0
    return m


def canonical_observables() -> dict[str, DichotomicObservable]:
    gens = {
        "D": np.diag([1.0, 1.0, -1.0, -1.0]).astype(np.complex128),
        "d": np.diag([1.0, -1.0, 1.0, -1.0]).astype(np.complex128),
        "U": _permutation([(0, 2), (1, 3)]),
        "u": _permutation([(0, 1), (2, 3)]),
    }
    obs = {k: DichotomicObservable(k, v) for k, v in gens.items()}
    for label in PRODUCTS:
        a, b = obs[label[0]], obs[label[1]]
        if not commute(a, b):
            raise AssertionError(f"factors of {label} do not commute")
        obs[label] = DichotomicObservable(label, a.matrix @ b.matrix)
    return obs


def commute(a: DichotomicObservable, b: DichotomicObservable, tol: float = TOL) -> bool:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.label} is {a.dim}, {b.label} is {b.dim}")
    return max_abs(a.matrix @ b.matrix - b.matrix @ a.matrix) <= tol


@dataclass(frozen=True)
class MeasurementContext:
    """Commuting observables together with their joint spectral projectors.

    ``joint_projectors`` lists ``(outcomes, projector)`` in lexicographic
    order of the outcome tuples with +1 before -1; empty joint eigenspaces
    are dropped.
    """

    observables: tuple[DichotomicObservable, ...]
    joint_projectors: tuple[tuple[tuple[int, ...], np.ndarray], ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(o.label for o in self.observables)

    @property
    def dim(self) -> int:
        return self.observables[0].dim


def build_context(observables) -> MeasurementContext:
    observables = tuple(observables)
    if not observables:
        raise ValueError("a measurement context needs at least one observable")
    for a, b in itertools.combinations(observables, 2):
        if not commute(a, b):
            raise NonCommutingError(f"observables {a.label!r} and {b.label!r} do not commute")

    joint = []
    for outcomes in itertools.product((+1, -1), repeat=len(observables)):
        proj = np.eye(observables[0].dim, dtype=np.complex128)
        for o, r in zip(observables, outcomes):
            proj = proj @ o.eigenprojector(r)
        if np.trace(proj).real > 0.5:
            joint.append((outcomes, proj))
    return MeasurementContext(observables, tuple(joint))


_SZ_READOUT = {
    Fraction(3, 2): (+1, +1),
    Fraction(1, 2): (+1, -1),
    Fraction(-1, 2): (-1, +1),
    Fraction(-3, 2): (-1, -1),
}


def sz_readout(sz_outcome) -> tuple[int, int]:
    """Values ``(r(D), r(d))`` revealed by an S_z measurement on one spin-3/2 particle."""
    try:
        key = Fraction(sz_outcome)
    except (TypeError, ValueError):
        key = None
    if key not in _SZ_READOUT:
        raise ValueError(f"S_z outcome must be one of 3/2, 1/2, -1/2, -3/2, got {sz_outcome!r}")
    return _SZ_READOUT[key]
