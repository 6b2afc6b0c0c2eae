"""The nine perfect-correlation identities and their exact quantum verification."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .observables import (
    DichotomicObservable,
    NonCommutingError,
    build_context,
    canonical_observables,
    commute,
)
from .spin_algebra import TOL, as_matrix, is_unitary
from .states import as_state

PROBABILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class CorrelationConstraint:
    """``prod(Alice's results) = sign * prod(Bob's results)``."""

    id: int
    alice: tuple[str, ...]
    bob: tuple[str, ...]
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        object.__setattr__(self, "alice", tuple(self.alice))
        object.__setattr__(self, "bob", tuple(self.bob))
        if not self.alice or not self.bob:
            raise ValueError("both sides of a constraint need at least one label")

    def with_sign(self, sign: int) -> CorrelationConstraint:
        return CorrelationConstraint(self.id, self.alice, self.bob, sign)

    def describe(self) -> str:
        lhs = " ".join(f"rA({l})" for l in self.alice)
        rhs = " ".join(f"rB({l})" for l in self.bob)
        return f"{lhs} = {'-' if self.sign < 0 else ''}{rhs}"


_NINE = (
    (("D",), ("D",), -1),
    (("d",), ("d",), -1),
    (("U",), ("U",), +1),
    (("u",), ("u",), -1),
    (("Dd",), ("D", "d"), +1),
    (("Uu",), ("U", "u"), -1),
    (("D", "u"), ("Du",), +1),
    (("U", "d"), ("Ud",), -1),
    (("Dd", "Uu"), ("Du", "Ud"), +1),
)


def nine_constraints() -> list[CorrelationConstraint]:
    return [CorrelationConstraint(i, a, b, s) for i, (a, b, s) in enumerate(_NINE, start=1)]


def resolve_labels(labels, obs) -> list[DichotomicObservable]:
    missing = [l for l in labels if l not in obs]
    if missing:
        raise KeyError(f"unknown observable label(s): {', '.join(missing)}")
    resolved = [obs[l] for l in labels]
    for a, b in itertools.combinations(resolved, 2):
        if not commute(a, b):
            raise NonCommutingError(f"observables {a.label!r} and {b.label!r} do not commute")
    return resolved


def _product(observables) -> np.ndarray:
    out = np.eye(observables[0].dim, dtype=np.complex128)
    for o in observables:
        out = out @ o.matrix
    return out


def correlation_value(state, c: CorrelationConstraint, obs) -> float:
    """``<state| prod(Alice ops) (x) prod(Bob ops) |state>`` (real part)."""
    state = as_state(state)
    a = _product(resolve_labels(c.alice, obs))
    b = _product(resolve_labels(c.bob, obs))
    val = complex(np.vdot(state, np.kron(a, b) @ state))
    if abs(val.imag) > TOL:
        raise ArithmeticError(f"constraint {c.id}: expectation has imaginary part {val.imag:.3e}")
    return val.real


@dataclass(frozen=True)
class JointOutcome:
    alice: tuple[int, ...]
    bob: tuple[int, ...]
    probability: float


def joint_distribution(state, alice_ctx, bob_ctx) -> list[JointOutcome]:
    """Born probabilities ``<state| P_a (x) P_b |state>`` over all joint projector pairs."""
    state = as_state(state)
    n = alice_ctx.dim
    if state.size != n * bob_ctx.dim:
        raise ValueError(f"state of dim {state.size} does not match contexts of dims {n}, {bob_ctx.dim}")
    # amplitude grid psi[i, j] = <i|_A <j|_B |psi>; (Pa (x) Pb)|psi> is Pa psi Pb^T
    grid = state.reshape(n, bob_ctx.dim)
    out = []
    for a_out, pa in alice_ctx.joint_projectors:
        left = pa @ grid
        for b_out, pb in bob_ctx.joint_projectors:
            p = float(np.vdot(grid, left @ pb.T).real)
            out.append(JointOutcome(a_out, b_out, p))
    return out


def satisfies(c: CorrelationConstraint, alice_outcomes, bob_outcomes) -> bool:
    return math.prod(alice_outcomes) == c.sign * math.prod(bob_outcomes)


@dataclass(frozen=True)
class PerfectReport:
    holds: bool
    max_violating_probability: float
    violating_probability: float


def verify_perfect(state, c: CorrelationConstraint, obs) -> PerfectReport:
    """Check that every outcome with nonzero Born weight obeys the identity."""
    alice_ctx = build_context(resolve_labels(c.alice, obs))
    bob_ctx = build_context(resolve_labels(c.bob, obs))
    worst = 0.0
    total = 0.0
    for o in joint_distribution(state, alice_ctx, bob_ctx):
        if not satisfies(c, o.alice, o.bob):
            worst = max(worst, o.probability)
            total += max(o.probability, 0.0)
    return PerfectReport(worst <= PROBABILITY_FLOOR, worst, total)


def constraint_report(state, c: CorrelationConstraint, obs) -> dict:
    """Serializable summary: id, sides, sign, exact value and the distributional check."""
    perfect = verify_perfect(state, c, obs)
    return {
        "id": c.id,
        "alice": list(c.alice),
        "bob": list(c.bob),
        "sign": c.sign,
        "value": correlation_value(state, c, obs),
        "holds": perfect.holds,
        "max_violating_probability": perfect.max_violating_probability,
    }


def rotated_constraints(r, obs=None):
    """Observables seen through devices rotated by ``r`` and the unchanged nine constraints.

    Products are conjugated like any other observable; ``r(XY)r^H`` equals
    ``(rXr^H)(rYr^H)`` because ``r`` is unitary.
    """
    r = as_matrix(r)
    if not is_unitary(r, 1e-9):
        raise ValueError("rotation matrix is not unitary")
    obs = canonical_observables() if obs is None else obs
    return {k: o.conjugated(r) for k, o in obs.items()}, nine_constraints()
