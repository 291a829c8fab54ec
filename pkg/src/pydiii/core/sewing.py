"""Analysis of sewing matrix fields.

Residual checks of the sewing condition q(tau x) = -q(x)^t, determinant fields, phase
unwrapping, winding numbers and continuous square root branches on the circle and torus.
"""

import logging
from typing import NamedTuple, Optional, Union

import numpy as np

from .fields import (
    SewingField,
    PhaseField,
    Residuals,
    max_with_location,
    pointwise_norms,
)
from .grid import InvolutiveGrid1D, InvolutiveGrid2D
from .linalg import round_to_sign
from ..exceptions import (
    GridTooCoarseError,
    BadStartValueError,
    NonzeroWindingError,
    InconsistentUnwrapError,
    BranchFailureError,
    NotEquivariantError,
    CrossCheckFailureError,
    NotSignLikeError,
)

logger = logging.getLogger(__name__)

# Largest admissible phase increment between neighbouring grid points.
MAX_PHASE_STEP = np.pi

_SNAP_TARGETS = np.array([1.0, -1.0, 1.0j, -1.0j])


class DetField(NamedTuple):
    values: np.ndarray
    invariance_residual: float


def check_sewing(q: SewingField, tol: Optional[float] = None) -> Residuals:
    """Maximum unitarity, sewing and fixed point skewness residuals of a sewing field."""
    tol = q.tol if tol is None else tol
    samples = q.samples
    transposed = np.swapaxes(samples, -1, -2)
    eye = np.eye(q.rank)

    values, locations = {}, {}
    values["unitarity"], locations["unitarity"] = max_with_location(
        pointwise_norms(np.conj(transposed) @ samples - eye)
    )
    values["sewing"], locations["sewing"] = max_with_location(
        pointwise_norms(q.reflected() + transposed)
    )

    fixed = [q.samples[idx] for idx in q.grid.fixed_points]
    skew = [float(np.linalg.norm(S + S.T, ord=2)) for S in fixed]
    worst = int(np.argmax(skew))
    values["fixed_point_skew"] = skew[worst]
    locations["fixed_point_skew"] = q.grid.fixed_points[worst]

    return Residuals(values, tol, locations)


def det_field(q: SewingField) -> DetField:
    """Pointwise determinants of q and the residual max |det q(tau x) - det q(x)|."""
    dets = np.linalg.det(q.samples)
    residual = float(np.max(np.abs(q.grid.reflect(dets) - dets)))
    return DetField(dets, residual)


def _unit(u: np.ndarray) -> np.ndarray:
    return u / np.abs(u)


def _increments(u: np.ndarray, axis: int = 0) -> np.ndarray:
    """Wrapped phase increments from each point to the next one along ``axis``."""
    return np.angle(np.roll(u, -1, axis=axis) / u)


def _check_increments(increments: np.ndarray, max_step: float) -> None:
    too_large = np.abs(increments) >= max_step
    if np.any(too_large):
        flat_idx = int(np.argmax(np.abs(increments) * too_large))
        index = np.unravel_index(flat_idx, increments.shape)
        index = int(index[0]) if len(index) == 1 else tuple(int(i) for i in index)
        raise GridTooCoarseError(
            index, float(np.abs(increments).ravel()[flat_idx]), max_step
        )


def _winding_from_increments(increments: np.ndarray) -> int:
    total = float(np.sum(increments)) / (2 * np.pi)
    winding = int(np.rint(total))
    if abs(total - winding) > 1e-6:
        raise BranchFailureError(
            f"Phase increments sum to {total:.6f} turns.", abs(total - winding)
        )
    return winding


def unwrap_phase_1d(
    u: np.ndarray, max_step: float = MAX_PHASE_STEP
) -> tuple[PhaseField, int]:
    """Continuous phase of a unimodular field on the circle and its winding number.

    The phase starts in [0, 2 pi) at k = 0 and follows increasing k.

    Raises:
        GridTooCoarseError: A neighbouring phase increment reaches ``max_step``.
    """
    u = _unit(np.asarray(u, dtype=complex))
    increments = _increments(u)
    _check_increments(increments, max_step)

    theta0 = float(np.mod(np.angle(u[0]), 2 * np.pi))
    theta = theta0 + np.concatenate([[0.0], np.cumsum(increments[:-1])])
    winding = _winding_from_increments(increments)

    grid = InvolutiveGrid1D(len(u))
    return PhaseField(grid, theta, theta0), winding


def _snap(value: complex, tol: float) -> complex:
    distances = np.abs(_SNAP_TARGETS - value)
    nearest = int(np.argmin(distances))
    if distances[nearest] <= tol:
        return complex(_SNAP_TARGETS[nearest])
    return value


def _check_start(u0: complex, start_value: complex, tol: float) -> None:
    residual = abs(start_value**2 - u0)
    if residual > tol:
        raise BadStartValueError(residual)


def sqrt_branch_1d(
    u: np.ndarray,
    start_value: complex,
    tol: float = 1e-8,
    snap_tol: float = 1e-6,
) -> np.ndarray:
    """Continuous square root of a unimodular circle field starting at ``start_value``.

    The branch is continued along increasing k from k = 0, so it is single valued on the
    arc [0, pi] that the invariants use. Values at the fixed points are snapped to the
    nearest of +-1, +-i when within ``snap_tol``.

    Raises:
        BadStartValueError: ``start_value**2`` differs from u(0) by more than ``tol``.
        GridTooCoarseError: Unwrapping is not well posed on this grid.
    """
    u = np.asarray(u, dtype=complex)
    _check_start(u[0], start_value, tol)
    phase, _ = unwrap_phase_1d(u)

    s = start_value * np.exp(0.5j * (phase.theta - phase.theta[0]))
    s = snap_fixed_points(s, phase.grid, snap_tol)

    residual = float(np.max(np.abs(s**2 - u)))
    if residual > max(tol, 10 * snap_tol):
        raise BranchFailureError(
            "Square root branch does not square to the field.", residual
        )
    return s


def unwrap_phase_2d(
    u: np.ndarray, max_step: float = MAX_PHASE_STEP
) -> tuple[PhaseField, tuple[int, int]]:
    """Continuous phase of a unimodular torus field and its two winding numbers.

    The row k2 = 0 is unwrapped first, then every column starting from that row.

    Raises:
        GridTooCoarseError: A phase increment along a row or column is too large.
        InconsistentUnwrapError: A plaquette encloses a phase vortex.
    """
    u = _unit(np.asarray(u, dtype=complex))
    d1 = _increments(u, axis=0)
    d2 = _increments(u, axis=1)
    _check_increments(d1, max_step)
    _check_increments(d2, max_step)

    plaquettes = d1 + np.roll(d2, -1, axis=0) - np.roll(d1, -1, axis=1) - d2
    plaquette_residual = float(np.max(np.abs(plaquettes)))
    if plaquette_residual > np.pi:
        raise InconsistentUnwrapError(plaquette_residual)
    logger.debug("unwrap_phase_2d: plaquette residual %.3e", plaquette_residual)

    n1 = _winding_from_increments(d1[:, 0])
    n2 = _winding_from_increments(d2[0, :])

    row = np.concatenate([[0.0], np.cumsum(d1[:-1, 0])])
    columns = np.concatenate(
        [np.zeros((u.shape[0], 1)), np.cumsum(d2[:, :-1], axis=1)], axis=1
    )
    theta0 = float(np.mod(np.angle(u[0, 0]), 2 * np.pi))
    theta = theta0 + row[:, None] + columns
    return PhaseField(InvolutiveGrid2D(*u.shape), theta, theta0), (n1, n2)


def sqrt_branch_2d(
    u: np.ndarray,
    start_value: complex,
    tol: float = 1e-8,
    snap_tol: float = 1e-6,
    max_step: float = MAX_PHASE_STEP,
) -> tuple[np.ndarray, tuple[int, int]]:
    """Global continuous square root of an invariant unimodular torus field.

    The row k2 = 0 is unwrapped first, then every column starting from that row. Every
    plaquette phase sum must vanish and both torus windings must be zero.

    Returns:
        (s, (n1, n2)) with s of the same shape as ``u``.

    Raises:
        BadStartValueError: ``start_value**2`` differs from u(0, 0) by more than ``tol``.
        GridTooCoarseError: A phase increment along a row or column is too large.
        InconsistentUnwrapError: A plaquette encloses a phase vortex.
        NonzeroWindingError: The field winds around one of the torus cycles.
        BranchFailureError: The branch is not invariant under the involution.
    """
    u = np.asarray(u, dtype=complex)
    _check_start(u[0, 0], start_value, tol)

    phase, (n1, n2) = unwrap_phase_2d(u, max_step)
    if n1 != 0 or n2 != 0:
        raise NonzeroWindingError(n1, n2)

    s = start_value * np.exp(0.5j * (phase.theta - phase.base_value))
    grid = phase.grid
    s = snap_fixed_points(s, grid, snap_tol)

    invariance = float(np.max(np.abs(grid.reflect(s) - s)))
    if invariance > max(tol, 10 * snap_tol):
        raise BranchFailureError(
            "Square root branch is not involution invariant.", invariance
        )
    return s, (n1, n2)


def equivariant_degree_parity(
    r: np.ndarray, tol: float = 1e-8, sign_tol: float = 1e-6
) -> int:
    """Parity (-1)^deg(r) of an equivariant map r(-k) = conj(r(k)) read off as r(pi)/r(0).

    Raises:
        NotEquivariantError: r is not equivariant, or its fixed point values are not real
            signs.
        CrossCheckFailureError: The fixed point ratio disagrees with the unwrapped winding.
    """
    r = np.asarray(r, dtype=complex)
    grid = InvolutiveGrid1D(len(r))
    residual = float(np.max(np.abs(grid.reflect(r) - np.conj(r))))
    if residual > tol:
        raise NotEquivariantError(residual)

    try:
        r0, _ = round_to_sign(r[0], sign_tol)
        r_pi, _ = round_to_sign(r[grid.half], sign_tol)
    except NotSignLikeError as err:
        raise NotEquivariantError(err.deviation) from err

    parity = r_pi * r0
    _, winding = unwrap_phase_1d(r)
    if parity != (-1) ** (winding % 2):
        raise CrossCheckFailureError(parity, winding)
    return parity


def snap_fixed_points(
    values: np.ndarray, grid: Union[InvolutiveGrid1D, InvolutiveGrid2D], snap_tol: float
) -> np.ndarray:
    """Copy of ``values`` with the fixed point entries snapped to +-1, +-i."""
    out = np.array(values, dtype=complex)
    for idx in grid.fixed_points:
        out[idx] = _snap(out[idx], snap_tol)
    return out
