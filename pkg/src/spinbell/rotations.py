"""Spin-s rotation operators ``exp(-i angle n.S)`` and a seeded sampler for them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_algebra import TOL, matrix_exponential_skew_hermitian, spin_operators


@dataclass(frozen=True)
class RotationSpec:
    axis: tuple[float, float, float]
    angle: float

    def __post_init__(self):
        axis = tuple(float(c) for c in self.axis)
        if len(axis) != 3:
            raise ValueError(f"axis must have 3 components, got {len(axis)}")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"axis must be a unit vector, |axis| = {norm!r}")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "angle", float(self.angle))

    @classmethod
    def normalized(cls, axis, angle: float) -> RotationSpec:
        """Build a spec from any nonzero axis, rescaling it to unit length."""
        v = np.asarray(axis, dtype=float)
        norm = float(np.linalg.norm(v))
        if v.shape != (3,) or not np.isfinite(norm) or norm == 0.0:
            raise ValueError(f"malformed axis {axis!r}")
        return cls(tuple(v / norm), angle)


def rotation_operator(spec: RotationSpec, s) -> np.ndarray:
    """Unitary ``exp(-i angle (n_x S_x + n_y S_y + n_z S_z))`` in the spin-s basis."""
    generator = spin_operators(s).along(spec.axis)
    return matrix_exponential_skew_hermitian(generator, spec.angle)


def random_rotation(seed) -> RotationSpec:
    """Random axis (normalized Gaussian 3-vector) and angle uniform in [0, 4pi).

    ``seed`` is an int or a ``numpy.random.Generator``; passing a generator
    lets a sweep draw many specs from one stream.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            break
    angle = rng.uniform(0.0, 4.0 * np.pi)
    return RotationSpec.normalized(v / norm, angle)


def random_rotations(count: int, seed: int) -> list[RotationSpec]:
    rng = np.random.default_rng(seed)
    return [random_rotation(rng) for _ in range(count)]
