import math

import numpy as np
import pytest

from spinbell.correlations import CorrelationConstraint, correlation_value, nine_constraints, rotated_constraints
from spinbell.observables import build_context
from spinbell.rotations import random_rotations, rotation_operator
from spinbell.sampling import run_experiment, sample_round, tolerance_band

SHOTS = 100_000


def test_D_D_always_opposite(psi, obs):
    ctx = build_context([obs["D"]])
    rng = np.random.default_rng(1)
    for _ in range(500):
        r = sample_round(psi, ctx, ctx, rng)
        assert r.alice_outcomes["D"] == -r.bob_outcomes["D"]


def test_Dd_joint_is_anti_aligned(psi, obs):
    ctx = build_context([obs["D"], obs["d"]])
    rng = np.random.default_rng(2)
    for _ in range(500):
        r = sample_round(psi, ctx, ctx, rng)
        assert r.alice_outcomes == {k: -v for k, v in r.bob_outcomes.items()}


def test_pinned_pcg64_stream(psi, obs):
    # smoke test tied to numpy's PCG64 and the joint-outcome ordering
    ctx = build_context([obs["D"], obs["d"]])
    rng = np.random.default_rng(2024)
    got = [sample_round(psi, ctx, ctx, rng).joint_probability_index for _ in range(12)]
    assert got == [9, 3, 6, 12, 12, 3, 3, 3, 6, 3, 9, 9]


def test_sample_round_deterministic(psi, obs):
    a, b = build_context([obs["U"], obs["u"]]), build_context([obs["Uu"]])
    s1 = [sample_round(psi, a, b, np.random.default_rng(9)) for _ in range(20)]
    s2 = [sample_round(psi, a, b, np.random.default_rng(9)) for _ in range(20)]
    assert s1 == s2


def test_bad_contexts_detected(obs):
    ctx = build_context([obs["D"]])
    with pytest.raises(ValueError):
        sample_round(np.ones(9) / 3, ctx, ctx, np.random.default_rng(0))


def test_zero_shots(psi, obs):
    stats = run_experiment(psi, nine_constraints(), obs, 0, 0)
    assert stats.no_data
    for t in stats.per_constraint.values():
        assert (t.agree_count, t.disagree_count, t.empirical_value) == (0, 0, 0.0)


def test_negative_shots_rejected(psi, obs):
    with pytest.raises(ValueError):
        run_experiment(psi, nine_constraints(), obs, -1, 0)


def test_perfect_constraints_never_disagree(psi, obs):
    stats = run_experiment(psi, nine_constraints(), obs, SHOTS, seed=3)
    for t in stats.per_constraint.values():
        assert t.agree_count == SHOTS and t.disagree_count == 0 and t.empirical_value == 1.0


def test_rotated_constraints_never_disagree(psi):
    for spec in random_rotations(3, seed=6):
        rot, cs = rotated_constraints(rotation_operator(spec, "3/2"))
        stats = run_experiment(psi, cs, rot, 20_000, seed=4)
        assert all(t.disagree_count == 0 for t in stats.per_constraint.values())


@pytest.mark.parametrize("alice, bob", [(("D",), ("d",)), (("U",), ("d",)), (("D", "u"), ("U",))])
def test_non_perfect_pairs_within_band(psi, obs, alice, bob):
    c = CorrelationConstraint(0, alice, bob, +1)
    exact = correlation_value(psi, c, obs)
    stats = run_experiment(psi, [c], obs, SHOTS, seed=5)
    assert abs(stats.per_constraint[0].empirical_value - exact) <= tolerance_band(SHOTS)


def test_marginal_fidelity(psi, obs):
    ctx_a = build_context([obs["D"]])
    ctx_b = build_context([obs["U"]])
    rng = np.random.default_rng(10)
    n = 20_000
    plus = sum(sample_round(psi, ctx_a, ctx_b, rng).alice_outcomes["D"] == 1 for _ in range(n))
    p_exact = float(np.vdot(psi, np.kron(obs["D"].eigenprojector(1), np.eye(4)) @ psi).real)
    se = math.sqrt(p_exact * (1 - p_exact) / n)
    assert abs(plus / n - p_exact) <= 5 * se


def test_run_experiment_deterministic(psi, obs):
    a = run_experiment(psi, nine_constraints(), obs, 1000, seed=8).to_dict()
    b = run_experiment(psi, nine_constraints(), obs, 1000, seed=8).to_dict()
    assert a == b


def test_csv_layout(psi, obs):
    text = run_experiment(psi, nine_constraints(), obs, 10, seed=1).to_csv()
    lines = text.splitlines()
    assert lines[0] == "id,shots,agree,disagree,empirical_value"
    assert lines[1] == "1,10,10,0,1"
    assert len(lines) == 10
