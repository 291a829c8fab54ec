"""Dense complex linear algebra used throughout pydiii.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Stacks of matrices (one per
grid point) carry the grid dimensions first and the matrix dimensions last.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg as la
from pfapack import pfaffian as pfa

from ..exceptions import (
    NotHermitianError,
    SingularInputError,
    OddDimensionError,
    NotSkewSymmetricError,
    NotSkewUnitaryError,
    NoConvergenceError,
    NotSignLikeError,
)

logger = logging.getLogger(__name__)


class KernelDimension(NamedTuple):
    """Result of :func:`kernel_dimension`.

    Attributes:
        dim: Number of kernel directions.
        gap_ratio: Smallest retained singular value divided by the largest discarded one.
            ``inf`` when nothing is discarded, ``0`` when nothing is retained.
        singular_values: All singular values, descending.
    """

    dim: int
    gap_ratio: float
    singular_values: np.ndarray


def standard_symplectic(n: int) -> np.ndarray:
    """The standard symplectic matrix Q = [[0, -1_n], [1_n, 0]] of size 2n."""
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, -eye], [eye, zero]])


def op_norm(A: np.ndarray) -> float:
    """Spectral norm of a matrix, or the largest spectral norm of a stack."""
    if A.size == 0:
        return 0.0
    norms = np.linalg.norm(A, ord=2, axis=(-2, -1))
    return float(np.max(norms))


def hermiticity_residual(H: np.ndarray) -> float:
    return op_norm(H - np.conj(np.swapaxes(H, -1, -2)))


def skew_residual(A: np.ndarray) -> float:
    return op_norm(A + np.swapaxes(A, -1, -2))


def unitarity_residual(U: np.ndarray) -> float:
    eye = np.eye(U.shape[-1])
    return op_norm(np.conj(np.swapaxes(U, -1, -2)) @ U - eye)


def round_to_sign(value: complex, tol: float = 1e-6) -> tuple[int, float]:
    """Round a value that should be exactly +1 or -1.

    Returns:
        (sign, deviation) where deviation is the distance to the returned sign.

    Raises:
        NotSignLikeError: The value is farther than ``tol`` from both signs.
    """
    value = complex(value)
    sign = 1 if value.real >= 0 else -1
    deviation = abs(value - sign)
    if deviation > tol:
        raise NotSignLikeError(value, deviation)
    return sign, deviation


def polar_flatten(H: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Flatten a Hermitian invertible matrix to Q = H |H|^-1.

    Args:
        H (np.ndarray): Hermitian invertible matrix.
        tol (float): Tolerance for the Hermiticity check and the invertibility gap.

    Returns:
        np.ndarray: The involution with the eigenvectors of H and eigenvalues sign(E).

    Raises:
        NotHermitianError: ``||H - H*|| > tol``.
        SingularInputError: The smallest singular value of H does not exceed ``tol``.
    """
    H = np.asarray(H, dtype=complex)
    residual = hermiticity_residual(H)
    if residual > tol:
        raise NotHermitianError(residual)

    H = 0.5 * (H + H.conj().T)
    energies, vecs = la.eigh(H)
    min_sv = float(np.min(np.abs(energies))) if energies.size else np.inf
    if min_sv <= tol:
        raise SingularInputError(min_sv)

    return (vecs * np.sign(energies)) @ vecs.conj().T


def pfaffian_with_residual(A: np.ndarray, tol: float = 1e-8) -> tuple[complex, float]:
    """Pfaffian of a skew-symmetric matrix together with the discarded symmetric part.

    The input is skew-symmetrised as (A - A^t)/2 before the Householder
    tridiagonalisation. The convention is Pf([[0, a], [-a, 0]]) = a.

    Raises:
        OddDimensionError: The matrix size is odd.
        NotSkewSymmetricError: ``||A + A^t|| > tol`` (plain transpose).
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"Expected a square matrix, received shape {A.shape}.")

    size = A.shape[0]
    if size % 2 == 1:
        raise OddDimensionError(size)

    residual = skew_residual(A)
    if residual > tol:
        raise NotSkewSymmetricError(residual)

    if size == 0:
        return 1.0 + 0.0j, residual

    skew = 0.5 * (A - A.T)
    return complex(pfa.pfaffian(skew, overwrite_a=False, method="H")), residual


def pfaffian(A: np.ndarray, tol: float = 1e-8) -> complex:
    """Pfaffian of an even-size skew-symmetric matrix. See :func:`pfaffian_with_residual`."""
    return pfaffian_with_residual(A, tol)[0]


def kernel_dimension(A: np.ndarray, tol: float = 1e-8) -> KernelDimension:
    """Number of singular values of A below ``tol``, counting structural zeros.

    A wide matrix (more columns than rows) has at least ``cols - rows`` kernel
    directions regardless of its singular values.
    """
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        n_cols = A.shape[1] if A.ndim == 2 else 0
        return KernelDimension(n_cols, np.inf, np.zeros(0))

    n_rows, n_cols = A.shape
    svals = la.svdvals(A)
    structural = max(n_cols - n_rows, 0)
    discarded = svals[svals < tol]
    retained = svals[svals >= tol]

    if retained.size == 0:
        gap_ratio = 0.0
    elif discarded.size == 0 and structural == 0:
        gap_ratio = np.inf
    else:
        largest_discarded = float(discarded.max()) if discarded.size else 0.0
        gap_ratio = (
            np.inf if largest_discarded == 0.0 else retained.min() / largest_discarded
        )

    dim = structural + int(discarded.size)
    logger.debug("kernel_dimension: dim=%d gap_ratio=%.3e", dim, gap_ratio)
    return KernelDimension(dim, float(gap_ratio), svals)


def _interleave_permutation(n: int) -> np.ndarray:
    """Permutation matrix P with P^t Q_2n P = diag(J, ..., J), J = [[0, -1], [1, 0]]."""
    perm = np.zeros((2 * n, 2 * n))
    for j in range(n):
        perm[j, 2 * j] = 1.0
        perm[n + j, 2 * j + 1] = 1.0
    return perm


def skew_takagi(S: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Find U unitary with U^t Q U = S for a skew-symmetric unitary S.

    S is brought to skew tridiagonal form S = V T V^t by Householder congruences. For a
    unitary S the tridiagonal form splits into 2x2 blocks [[0, t], [-t, 0]] with |t| = 1,
    each of which equals D^t J D for D = diag(1, -t).

    Raises:
        NotSkewUnitaryError: S is not unitary or not skew-symmetric within ``tol``.
        NoConvergenceError: The congruence residual exceeds ``100 * tol``.
    """
    S = np.asarray(S, dtype=complex)
    size = S.shape[0]
    unit_res = unitarity_residual(S)
    skew_res = skew_residual(S)
    if unit_res > tol or skew_res > tol or size % 2 == 1:
        raise NotSkewUnitaryError(unit_res, skew_res)

    n = size // 2
    skew = 0.5 * (S - S.T)
    # pfapack hands back np.matrix objects.
    T, V = map(np.asarray, pfa.skew_tridiagonalize(skew, overwrite_a=False, calc_q=True))

    phases = np.array([T[2 * j, 2 * j + 1] for j in range(n)])
    # Only the unit-modulus part of each block is kept, the rest shows up in the residual.
    phases = phases / np.where(np.abs(phases) > 0, np.abs(phases), 1.0)
    D = np.diag(np.ravel(np.column_stack([np.ones(n), -phases])))

    U = _interleave_permutation(n) @ D @ V.T
    residual = op_norm(U.T @ standard_symplectic(n) @ U - S)
    if residual > 100 * tol:
        raise NoConvergenceError(residual)

    return np.asarray(U)
