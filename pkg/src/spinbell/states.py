"""Two-particle singlet states and their behaviour under common rotations."""
from __future__ import annotations

import numpy as np

from .spin_algebra import TOL, as_matrix, check_spin, is_unitary, m_values, spin_dim


def as_state(v) -> np.ndarray:
    """Coerce to a 1-D complex vector and check normalization."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a nonempty vector, got shape {arr.shape}")
    norm = float(np.vdot(arr, arr).real)
    if abs(norm - 1.0) > TOL:
        raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
    return arr


def basis_state(s, m_alice, m_bob) -> np.ndarray:
    """Product basis vector ``|m_alice> (x) |m_bob>``."""
    ms = list(m_values(s))
    n = len(ms)
    try:
        i, j = ms.index(float(m_alice)), ms.index(float(m_bob))
    except ValueError:
        raise ValueError(f"m values ({m_alice}, {m_bob}) not valid for spin {s}") from None
    v = np.zeros(n * n, dtype=np.complex128)
    v[i * n + j] = 1.0
    return v


def singlet(s) -> np.ndarray:
    """Total-spin-zero state ``(2s+1)^(-1/2) sum_m (-1)^(s-m) |m, -m>``.

    For ``s = 3/2`` the amplitudes on ``|3/2,-3/2>, |1/2,-1/2>, |-1/2,1/2>,
    |-3/2,3/2>`` are exactly ``+1/2, -1/2, +1/2, -1/2``.
    """
    s = check_spin(s)
    if s == 0:
        raise ValueError("singlet needs s >= 1/2")
    n = spin_dim(s)
    amp = 1.0 / np.sqrt(n)
    psi = np.zeros(n * n, dtype=np.complex128)
    # with highest m first, |m> has index k = s - m and |-m> has index n - 1 - k
    for k in range(n):
        psi[k * n + (n - 1 - k)] = amp if k % 2 == 0 else -amp
    return psi


def rotation_overlap(state, r) -> complex:
    """``<state| (r (x) r) |state>``."""
    state = as_state(state)
    r = as_matrix(r)
    n = r.shape[0]
    if state.size != n * n:
        raise ValueError(f"state of dim {state.size} does not match two copies of dim {n}")
    if not is_unitary(r, 1e-9):
        raise ValueError("rotation is not unitary")
    # (r (x) r)|psi> without forming the 16x16 product: reshape to an n x n amplitude grid
    grid = state.reshape(n, n)
    rotated = (r @ grid @ r.T).reshape(-1)
    return complex(np.vdot(state, rotated))


def invariance_defect(state, r) -> float:
    """``1 - |<state|(r (x) r)|state>|``; zero iff the state is invariant up to phase."""
    return 1.0 - abs(rotation_overlap(state, r))
