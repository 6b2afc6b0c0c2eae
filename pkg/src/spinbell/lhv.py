"""Local hidden-variable side: exhaustive value assignments and the parity count."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass

from .correlations import CorrelationConstraint, nine_constraints

# Enumeration order; the last label is bit 0 of the assignment index.
LHV_LABELS = (
    "A:D", "A:d", "A:U", "A:u", "A:Dd", "A:Uu",
    "B:D", "B:d", "B:U", "B:u", "B:Du", "B:Ud",
)


class LhvAssignment(Mapping):
    """Preexisting +-1 values for the twelve local observables."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, int]):
        if set(values) != set(LHV_LABELS):
            extra = sorted(set(values) - set(LHV_LABELS))
            missing = sorted(set(LHV_LABELS) - set(values))
            raise ValueError(f"bad label set (missing {missing}, unexpected {extra})")
        bad = {k: v for k, v in values.items() if v not in (-1, 1)}
        if bad:
            raise ValueError(f"values must be +1 or -1: {bad}")
        self._values = {k: int(values[k]) for k in LHV_LABELS}

    @classmethod
    def from_index(cls, index: int) -> LhvAssignment:
        """Assignment number ``index`` in 0..4095; a set bit means -1."""
        n = len(LHV_LABELS)
        if not 0 <= index < 2**n:
            raise ValueError(f"index out of range: {index}")
        return cls({l: -1 if (index >> (n - 1 - k)) & 1 else 1 for k, l in enumerate(LHV_LABELS)})

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return f"LhvAssignment({self._values})"


def constraint_satisfied(a: Mapping[str, int], c: CorrelationConstraint) -> bool:
    try:
        lhs = math.prod(a[f"A:{l}"] for l in c.alice)
        rhs = math.prod(a[f"B:{l}"] for l in c.bob)
    except KeyError as exc:
        raise KeyError(f"constraint {c.id} refers to {exc.args[0]!r}, absent from the assignment") from None
    return lhs == c.sign * rhs


@dataclass(frozen=True)
class LhvSearchReport:
    total_assignments: int
    perfectly_satisfying: int
    max_satisfied: int
    witness_assignment: LhvAssignment | None
    violation_histogram: dict[int, int]

    @property
    def witness_index(self) -> int | None:
        if self.witness_assignment is None:
            return None
        n = len(LHV_LABELS)
        return sum(1 << (n - 1 - k) for k, l in enumerate(LHV_LABELS) if self.witness_assignment[l] < 0)

    def to_dict(self) -> dict:
        return {
            "total": self.total_assignments,
            "perfect": self.perfectly_satisfying,
            "max_satisfied": self.max_satisfied,
            "witness": dict(self.witness_assignment) if self.witness_assignment is not None else None,
        }


def exhaustive_search(constraints=None) -> LhvSearchReport:
    """Try every one of the 2^12 assignments against the constraints.

    The witness is the lowest-index assignment reaching ``max_satisfied``.
    ``violation_histogram`` maps number-of-violated-constraints to count.
    """
    constraints = nine_constraints() if constraints is None else list(constraints)
    total = 2 ** len(LHV_LABELS)
    perfect = 0
    best, witness = -1, None
    histogram: Counter[int] = Counter()
    for index in range(total):
        a = LhvAssignment.from_index(index)
        n_sat = sum(constraint_satisfied(a, c) for c in constraints)
        histogram[len(constraints) - n_sat] += 1
        if n_sat == len(constraints):
            perfect += 1
        if n_sat > best:
            best, witness = n_sat, a
    return LhvSearchReport(total, perfect, best, witness, dict(sorted(histogram.items())))


@dataclass(frozen=True)
class ParityResult:
    lhs_sign: int
    rhs_sign: int
    per_label_counts: dict[str, int]

    def to_dict(self) -> dict:
        return {"lhs": self.lhs_sign, "rhs": self.rhs_sign, "counts": dict(self.per_label_counts)}


def parity_argument(constraints=None) -> ParityResult:
    """Multiply all identities symbolically.

    Every label occurs an even number of times on its side, so the product
    of the left-hand sides is +1 for any assignment, while the right-hand
    product carries the product of the signs.
    """
    constraints = nine_constraints() if constraints is None else list(constraints)
    counts = Counter({l: 0 for l in LHV_LABELS})
    for c in constraints:
        counts.update(f"A:{l}" for l in c.alice)
        counts.update(f"B:{l}" for l in c.bob)
    if any(n % 2 for n in counts.values()):
        odd = sorted(l for l, n in counts.items() if n % 2)
        raise AssertionError(f"labels with odd multiplicity: {odd}")
    # any assignment gives the same products since every value is squared; use all +1
    lhs = 1
    rhs = math.prod(c.sign for c in constraints)
    return ParityResult(lhs, rhs, dict(counts))


def product_preserving_flips(constraints=None) -> list[frozenset[str]]:
    """Nonempty label subsets whose joint sign flip leaves every constraint's truth value unchanged.

    A flip is harmless for a constraint exactly when it touches an even
    number of that constraint's labels (both sides counted together).
    """
    constraints = nine_constraints() if constraints is None else list(constraints)
    supports = [[f"A:{l}" for l in c.alice] + [f"B:{l}" for l in c.bob] for c in constraints]
    found = []
    for r in range(1, len(LHV_LABELS) + 1):
        for subset in itertools.combinations(LHV_LABELS, r):
            s = set(subset)
            if all(sum(l in s for l in sup) % 2 == 0 for sup in supports):
                found.append(frozenset(subset))
    return found


def flip(a: Mapping[str, int], labels) -> LhvAssignment:
    labels = set(labels)
    return LhvAssignment({k: -v if k in labels else v for k, v in a.items()})
