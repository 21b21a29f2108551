"""Dense complex linear algebra for the constructions.

Operators are plain ``numpy`` arrays. ``hermitian_eig`` runs the cyclic
Jacobi kernel; the inverse square roots of the two frame operators also have
closed forms, and both routes are kept so they can be compared.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .errors import ConvergenceFailure, DimensionMismatch, NotPositiveDefinite

JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 60
PD_GATE = 1e-10
RANK_RTOL = 1e-8


def as_unit_vector(entries, atol: float = 1e-12) -> np.ndarray:
    v = np.asarray(entries, dtype=np.complex128).reshape(-1)
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > atol * v.size:
        raise ValueError(f"vector has squared norm {norm2}, expected 1")
    return v


def as_hermitian(a) -> np.ndarray:
    """Symmetrised copy ``(A + A^H) / 2``."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return (a + a.conj().T) / 2


def outer_product(v, weight: float) -> np.ndarray:
    """``weight * |v><v|``."""
    if weight <= 0:
        raise ValueError("weight must be positive")
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return weight * np.outer(v, v.conj())


def hermitian_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in ascending order and the unitary of eigenvectors (columns)."""
    A = as_hermitian(a)
    w, V, sweeps = kernels.jacobi_eigh(A, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceFailure(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def inverse_sqrt(a) -> np.ndarray:
    """Positive-definite ``A^(-1/2)`` through the eigendecomposition."""
    w, U = hermitian_eig(a)
    if w[0] <= PD_GATE:
        raise NotPositiveDefinite(float(w[0]))
    B = (U * w**-0.5) @ U.conj().T
    return as_hermitian(B)


def structured_inverse_sqrt_q(q: int) -> np.ndarray:
    """Closed-form ``E^(-1/2)`` for the dimension-q frame operator.

    ``E`` is 1 on the diagonal and ``-1/q`` on each pair ``(i, q - i)``
    (0-based, ``1 <= i < q``); each pair block has eigenvalues ``1 -+ 1/q``.
    """
    if q < 3 or q % 2 == 0:
        raise ValueError("q must be odd and at least 3")
    lo = (1 - 1 / q) ** -0.5
    hi = (1 + 1 / q) ** -0.5
    diag = (lo + hi) / 2
    anti = (lo - hi) / 2
    B = np.zeros((q, q), dtype=np.complex128)
    B[0, 0] = 1.0
    for i in range(1, (q + 1) // 2):
        j = q - i
        B[i, i] = B[j, j] = diag
        B[i, j] = B[j, i] = anti
    return B


def structured_inverse_sqrt_q1(q: int) -> np.ndarray:
    """Closed-form ``E^(-1/2)`` for ``E = c I - V/(q+1)^2`` in dimension ``q + 1``."""
    if q < 2:
        raise ValueError("q must be at least 2")
    d = q + 1
    c = (d * d + 1) / (d * d)
    lam1 = c - 1 / d
    B = c**-0.5 * np.eye(d) + ((lam1**-0.5 - c**-0.5) / d) * np.ones((d, d))
    return B.astype(np.complex128)


def frame_operator_q_closed_form(q: int) -> np.ndarray:
    E = np.eye(q, dtype=np.complex128)
    for i in range(1, (q + 1) // 2):
        E[i, q - i] = E[q - i, i] = -1 / q
    return E


def frame_operator_q1_closed_form(q: int) -> np.ndarray:
    d = q + 1
    return ((d * d + 1) / (d * d)) * np.eye(d, dtype=np.complex128) - np.ones((d, d)) / (d * d)


def gram_matrix(ops: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """``G[i, j] = Tr(ops[i] ops[j])`` for Hermitian operators (real symmetric)."""
    X = np.asarray(ops, dtype=np.complex128)
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise DimensionMismatch("operators must share one square shape")
    n = X.shape[0]
    flat = X.reshape(n, -1)
    # Tr(A B) = sum_kl A_kl conj(B_kl) when B is Hermitian
    G = (flat @ flat.conj().T).real
    return (G + G.T) / 2


def gram_rank(ops: Sequence[np.ndarray] | np.ndarray) -> tuple[int, float]:
    """Numerical rank of the Gram matrix and its smallest retained eigenvalue."""
    X = np.asarray(ops, dtype=np.complex128)
    if X.ndim != 3:
        raise DimensionMismatch("operators must share one square shape")
    d = X.shape[1]
    if X.shape[0] > d * d:
        raise DimensionMismatch(f"at most {d * d} operators fit in dimension {d}")
    w = np.linalg.eigvalsh(gram_matrix(X))
    top = float(w[-1]) if w.size else 0.0
    if top <= 0:
        return 0, 0.0
    kept = w[w > RANK_RTOL * top]
    return int(kept.size), float(kept.min())


def min_eigenvalues(ops: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of every operator in a batch (LAPACK, batched)."""
    X = np.asarray(ops, dtype=np.complex128)
    X = (X + np.conj(np.swapaxes(X, -1, -2))) / 2
    return np.linalg.eigvalsh(X)[..., 0]


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def leading_minors(a) -> list[float]:
    A = as_hermitian(a)
    return [float(np.linalg.det(A[:u, :u]).real) for u in range(1, A.shape[0] + 1)]


def reconstruction_error(a, w, U) -> float:
    A = as_hermitian(a)
    return max_abs(A - (U * w) @ U.conj().T)

