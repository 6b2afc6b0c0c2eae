"""Dense complex linear algebra and spin-s matrices.

Matrices are plain ``numpy`` complex128 arrays. The basis is ordered with the
highest magnetic quantum number first, ``|s>, |s-1>, ..., |-s>``, and every
other module in the package inherits that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TOL = 1e-12
CLUSTER_TOL = 1e-9


class NotHermitianError(ValueError):
    pass


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a square complex128 array or raise ``ValueError``."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {arr.shape}")
    return arr


def max_abs(m) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def is_hermitian(m, tol: float = TOL) -> bool:
    m = as_matrix(m)
    return max_abs(m - m.conj().T) <= tol


def is_unitary(m, tol: float = TOL) -> bool:
    m = as_matrix(m)
    return max_abs(m.conj().T @ m - np.eye(m.shape[0])) <= tol


def check_spin(s) -> Fraction:
    """Return ``s`` as an exact fraction; reject anything but 0, 1/2, 1, ..."""
    try:
        two_s = Fraction(s) * 2
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid spin {s!r}") from exc
    if two_s.denominator != 1 or two_s < 0:
        raise ValueError(f"spin must be a nonnegative integer or half-integer, got {s!r}")
    return two_s / 2


def spin_dim(s) -> int:
    return int(2 * check_spin(s)) + 1


def m_values(s) -> np.ndarray:
    """Magnetic quantum numbers ``s, s-1, ..., -s``."""
    s = float(check_spin(s))
    return s - np.arange(int(round(2 * s)) + 1)


@dataclass(frozen=True)
class SpinTriple:
    s: Fraction
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def dim(self) -> int:
        return self.sz.shape[0]

    def along(self, axis) -> np.ndarray:
        """Spin component ``n . S`` for a 3-vector ``n``."""
        nx, ny, nz = (float(c) for c in axis)
        return nx * self.sx + ny * self.sy + nz * self.sz


def spin_operators(s) -> SpinTriple:
    """Spin matrices for spin ``s`` with Condon-Shortley ladder coefficients.

    ``sx`` comes out real symmetric and ``sy`` imaginary antisymmetric.
    """
    s = check_spin(s)
    m = m_values(s)
    sf = float(s)
    # S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; with highest m first, S+ sits on the superdiagonal.
    coeff = np.sqrt(sf * (sf + 1) - m[1:] * (m[1:] + 1))
    splus = np.diag(coeff, k=1).astype(np.complex128)
    sminus = splus.conj().T
    sx = 0.5 * (splus + sminus)
    sy = -0.5j * (splus - sminus)
    sz = np.diag(m).astype(np.complex128)
    for a in (sx, sy, sz):
        a.setflags(write=False)
    return SpinTriple(s, sx, sy, sz)


def tensor(a, b) -> np.ndarray:
    """Kronecker product with ``a`` indexing the coarse blocks (Alice first)."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermitian_eigensystem(m, tol: float = TOL, cluster_tol: float = CLUSTER_TOL):
    """Spectral decomposition of a Hermitian matrix.

    Returns ``[(eigenvalue, projector), ...]`` with ascending eigenvalues.
    Eigenvalues closer than ``cluster_tol`` to the first member of a cluster
    share one projector, so a degenerate eigenspace appears once.
    """
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian (max |m - m^H| = {max_abs(m - m.conj().T):.3e})"
        )
    evals, evecs = np.linalg.eigh(0.5 * (m + m.conj().T))

    groups: list[list[int]] = []
    for i, lam in enumerate(evals):
        if groups and lam - evals[groups[-1][0]] <= cluster_tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    out = []
    for idx in groups:
        v = evecs[:, idx]
        out.append((float(sum(evals[idx])) / len(idx), v @ v.conj().T))
    return out


def matrix_exponential_skew_hermitian(h, t: float) -> np.ndarray:
    """``exp(-i t h)`` for Hermitian ``h``, assembled from its spectral projectors."""
    result = np.zeros_like(as_matrix(h))
    for lam, proj in hermitian_eigensystem(h):
        result += np.exp(-1j * t * lam) * proj
    return result
