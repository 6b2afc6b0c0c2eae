from fractions import Fraction

import numpy as np
import pytest

from spinbell.rotations import RotationSpec, random_rotations, rotation_operator
from spinbell.spin_algebra import spin_operators
from spinbell.states import basis_state, invariance_defect, rotation_overlap, singlet


def total_spin_zero_space(s):
    """Oracle: kernel of the two-particle total-spin Casimir."""
    S = spin_operators(s)
    n = S.dim
    I = np.eye(n)
    tot = [np.kron(a, I) + np.kron(I, a) for a in (S.sx, S.sy, S.sz)]
    casimir = sum(t @ t for t in tot)
    w, v = np.linalg.eigh(casimir)
    return v[:, np.abs(w) < 1e-9]


def test_singlet_three_halves_is_bit_exact(psi):
    expected = np.zeros(16, dtype=complex)
    # |3/2,-3/2>, |1/2,-1/2>, |-1/2,1/2>, |-3/2,3/2> in the Alice (x) Bob basis
    expected[[3, 6, 9, 12]] = [0.5, -0.5, 0.5, -0.5]
    assert np.array_equal(psi, expected)
    assert np.array_equal(psi, 0.5 * (basis_state("3/2", 1.5, -1.5) - basis_state("3/2", 0.5, -0.5)
                                      + basis_state("3/2", -0.5, 0.5) - basis_state("3/2", -1.5, 1.5)))


def test_singlet_half():
    expected = (basis_state("1/2", 0.5, -0.5) - basis_state("1/2", -0.5, 0.5)) / np.sqrt(2)
    assert np.max(np.abs(singlet("1/2") - expected)) <= 1e-15


def test_singlet_one():
    expected = (basis_state(1, 1, -1) - basis_state(1, 0, 0) + basis_state(1, -1, 1)) / np.sqrt(3)
    assert np.max(np.abs(singlet(1) - expected)) <= 1e-15


@pytest.mark.parametrize("s", [Fraction(k, 2) for k in range(1, 8)])
def test_singlet_spans_total_spin_zero(s):
    psi = singlet(s)
    assert abs(np.vdot(psi, psi).real - 1) <= 1e-12
    kernel = total_spin_zero_space(s)
    assert kernel.shape[1] == 1
    assert abs(abs(np.vdot(kernel[:, 0], psi)) - 1) <= 1e-12


@pytest.mark.parametrize("s", [Fraction(k, 2) for k in range(1, 8)])
def test_singlet_only_anti_aligned_amplitudes(s):
    n = int(2 * s) + 1
    grid = singlet(s).reshape(n, n)
    mask = np.fliplr(np.eye(n, dtype=bool))
    assert np.all(grid[~mask] == 0)
    assert np.all(grid[mask] != 0)


@pytest.mark.parametrize("bad", [0, "1/3", -0.5])
def test_singlet_invalid_spin(bad):
    with pytest.raises(ValueError):
        singlet(bad)


def test_defect_identity(psi):
    assert invariance_defect(psi, np.eye(4)) == 0.0


@pytest.mark.parametrize("s", ["1/2", 1, "3/2"])
def test_defect_random_rotations(s):
    psi = singlet(s)
    for spec in random_rotations(200, seed=11):
        assert abs(invariance_defect(psi, rotation_operator(spec, s))) <= 1e-12


def test_three_halves_overlap_phase_is_one(psi):
    for spec in random_rotations(200, seed=5):
        ov = rotation_overlap(psi, rotation_operator(spec, "3/2"))
        assert abs(ov - 1) <= 1e-12


def test_defect_matches_explicit_kron(psi):
    # oracle: the same quantity through an explicit 16x16 operator
    for spec in random_rotations(10, seed=2):
        r = rotation_operator(spec, "3/2")
        ref = 1 - abs(psi.conj() @ np.kron(r, r) @ psi)
        assert abs(invariance_defect(psi, r) - ref) <= 1e-14


def test_product_state_is_not_invariant():
    prod = basis_state("3/2", 1.5, -1.5)
    r = rotation_operator(RotationSpec((1.0, 0.0, 0.0), np.pi / 2), "3/2")
    ref = 1 - abs(prod.conj() @ np.kron(r, r) @ prod)
    defect = invariance_defect(prod, r)
    assert defect > 0.1
    assert abs(defect - ref) <= 1e-14


def test_defect_dimension_mismatch(psi):
    with pytest.raises(ValueError):
        invariance_defect(psi, np.eye(3))
