"""Born-rule Monte Carlo of measurement rounds on the two-particle state.

Randomness comes from numpy's PCG64 (``numpy.random.default_rng``).
``run_experiment`` spawns one child stream per constraint from
``SeedSequence(seed)``, so a constraint's tallies depend only on the master
seed and its position in the list.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .correlations import (
    CorrelationConstraint,
    JointOutcome,
    joint_distribution,
    resolve_labels,
    satisfies,
)
from .observables import MeasurementContext, build_context

PROBABILITY_SUM_TOL = 1e-9
RNG_NAME = "numpy.PCG64"


@dataclass(frozen=True)
class RoundOutcome:
    alice_outcomes: dict[str, int]
    bob_outcomes: dict[str, int]
    joint_probability_index: int


def _probabilities(dist: list[JointOutcome]) -> np.ndarray:
    p = np.array([o.probability for o in dist])
    total = p.sum()
    if abs(total - 1.0) > PROBABILITY_SUM_TOL:
        raise RuntimeError(f"joint outcome probabilities sum to {total!r}; context construction is broken")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def sample_round(state, alice_ctx: MeasurementContext, bob_ctx: MeasurementContext, rng) -> RoundOutcome:
    """Draw one joint outcome ``(P_a (x) P_b)`` with its Born probability."""
    dist = joint_distribution(state, alice_ctx, bob_ctx)
    k = int(rng.choice(len(dist), p=_probabilities(dist)))
    o = dist[k]
    return RoundOutcome(dict(zip(alice_ctx.labels, o.alice)), dict(zip(bob_ctx.labels, o.bob)), k)


@dataclass
class ConstraintTally:
    agree_count: int = 0
    disagree_count: int = 0

    @property
    def shots(self) -> int:
        return self.agree_count + self.disagree_count

    @property
    def empirical_value(self) -> float:
        if self.shots == 0:
            return 0.0
        return (self.agree_count - self.disagree_count) / self.shots


@dataclass
class ExperimentStats:
    shots: int
    seed: int
    per_constraint: dict[int, ConstraintTally] = field(default_factory=dict)

    @property
    def no_data(self) -> bool:
        return self.shots == 0

    def rows(self) -> list[dict]:
        return [
            {
                "id": cid,
                "shots": self.shots,
                "agree": t.agree_count,
                "disagree": t.disagree_count,
                "empirical_value": t.empirical_value,
            }
            for cid, t in sorted(self.per_constraint.items())
        ]

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "seed": self.seed,
            "rng": RNG_NAME,
            "no_data": self.no_data,
            "per_constraint": self.rows(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=["id", "shots", "agree", "disagree", "empirical_value"], lineterminator="\n"
        )
        writer.writeheader()
        for row in self.rows():
            row["empirical_value"] = format(row["empirical_value"], ".17g")
            writer.writerow(row)
        return buf.getvalue()


def run_experiment(state, constraints, obs, shots: int, seed: int) -> ExperimentStats:
    """Sample ``shots`` rounds for each constraint and tally agreement with its identity.

    Rounds are drawn in one batch from the full joint distribution, which
    gives the same law as repeated ``sample_round`` calls.
    """
    if shots < 0:
        raise ValueError(f"shots must be >= 0, got {shots}")
    constraints: list[CorrelationConstraint] = list(constraints)
    streams = np.random.SeedSequence(seed).spawn(len(constraints))
    stats = ExperimentStats(shots, seed)
    for c, ss in zip(constraints, streams):
        tally = ConstraintTally()
        stats.per_constraint[c.id] = tally
        if shots == 0:
            continue
        dist = joint_distribution(
            state, build_context(resolve_labels(c.alice, obs)), build_context(resolve_labels(c.bob, obs))
        )
        rng = np.random.default_rng(ss)
        counts = np.bincount(rng.choice(len(dist), size=shots, p=_probabilities(dist)), minlength=len(dist))
        for o, n in zip(dist, counts):
            if satisfies(c, o.alice, o.bob):
                tally.agree_count += int(n)
            else:
                tally.disagree_count += int(n)
    return stats


def tolerance_band(shots: int, sigmas: float = 5.0) -> float:
    """``sigmas / sqrt(shots)``: a conservative band for a +-1-valued mean."""
    return sigmas / math.sqrt(shots) if shots else math.inf
