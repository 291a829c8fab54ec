"""Z2 invariants of class DIII sewing matrix fields.

All Z2 values are represented multiplicatively as the integers +1 and -1.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union
from warnings import warn

import numpy as np
import scipy.linalg as la

from .config import DEFAULT_TOLERANCES
from .core.fields import (
    SewingField,
    HamiltonianField,
    PhaseField,
    Residuals,
    check_same_grid,
)
from .core.grid import InvolutiveGrid1D, InvolutiveGrid2D, restrict_to_circle
from .core.linalg import (
    pfaffian,
    round_to_sign,
    skew_takagi,
    skew_residual,
    unitarity_residual,
    standard_symplectic,
    op_norm,
)
from .core.sewing import (
    check_sewing,
    det_field,
    unwrap_phase_1d,
    sqrt_branch_1d,
    sqrt_branch_2d,
    unwrap_phase_2d,
)
from .core.symmetry import (
    SymmetryTriple,
    standard_form,
    conjugate_field,
    extract_sewing,
)
from .exceptions import (
    SewingViolationError,
    ValidationFailure,
    BadStartValueError,
    BranchFailureError,
    NonzeroDetWindingError,
    NoConvergenceError,
    NotSkewUnitaryError,
    NotSignLikeError,
    RankMismatchError,
    DimensionMismatchError,
)

logger = logging.getLogger(__name__)

# Rounding deviations above this are reported with a warning.
SIGN_WARNING_THRESHOLD = 1e-8


class Homotopy:
    """Verdicts of :func:`classify_1d`."""

    HOMOTOPIC = "Homotopic"
    NOT_HOMOTOPIC = "NotHomotopic"


@dataclass
class TeoKaneResult:
    """Value of the one dimensional invariant with the quantities it was built from.

    Attributes:
        value (int): The invariant, +1 or -1.
        raw (complex): Value before rounding.
        deviation (float): Distance between ``raw`` and ``value``.
        pfaffians (tuple[complex, complex]): Pf q(0) and Pf q(pi).
        branch (np.ndarray): Square root of det q continued from Pf q(0).
        det_phase (PhaseField): Unwrapped phase of det q.
        residuals (Residuals): Sewing field residuals.
    """

    value: int
    raw: complex
    deviation: float
    pfaffians: tuple[complex, complex]
    branch: np.ndarray
    det_phase: PhaseField
    residuals: Residuals


@dataclass
class StrongResult:
    """Value of the strong torus invariant with the fixed point data.

    Attributes:
        value (int): The invariant, +1 or -1.
        raw (complex): Value before rounding.
        deviation (float): Distance between ``raw`` and ``value``.
        pfaffians (list[complex]): Pfaffians at (0,0), (pi,0), (0,pi), (pi,pi).
        branch (np.ndarray): Global square root of det q on the torus.
        det_phase (PhaseField): Unwrapped phase of det q.
        residuals (Residuals): Sewing field residuals.
    """

    value: int
    raw: complex
    deviation: float
    pfaffians: list[complex]
    branch: np.ndarray
    det_phase: PhaseField
    residuals: Residuals


def _tol(q: SewingField, tol: Optional[float]) -> float:
    return q.tol if tol is None else tol


def _require_grid(q: SewingField, grid_type: type) -> None:
    if not isinstance(q.grid, grid_type):
        raise TypeError(
            f"Expected a sewing field on a {grid_type.space}, received one on a "
            f"{q.grid.space}."
        )


def _require_valid(q: SewingField, tol: float) -> Residuals:
    checks = check_sewing(q, tol)
    if checks["unitarity"] > tol:
        raise ValidationFailure("Sewing field is not unitary.", checks.to_dict())
    if checks["sewing"] > tol:
        raise SewingViolationError(checks["sewing"], checks.locations["sewing"])
    if checks["fixed_point_skew"] > tol:
        raise SewingViolationError(
            checks["fixed_point_skew"], checks.locations["fixed_point_skew"]
        )
    return checks


def _require_unit_det(q: SewingField, tol: float) -> None:
    residual = float(np.max(np.abs(det_field(q).values - 1)))
    if residual > tol:
        raise ValidationFailure(
            "Sewing field must have det q = 1. Apply normalize_determinant first.",
            {"det_residual": residual},
        )


def _round(raw: complex, sign_tol: float, name: str) -> tuple[int, float]:
    sign, deviation = round_to_sign(raw, sign_tol)
    if deviation > SIGN_WARNING_THRESHOLD:
        warn(f"{name} rounded from {raw:.10g}, deviation {deviation:.3e}.")
    logger.debug("%s: raw=%s deviation=%.3e", name, raw, deviation)
    return sign, deviation


def _branch(det: np.ndarray, start: complex, tol: float, snap_tol: float) -> np.ndarray:
    try:
        return sqrt_branch_1d(det, start, tol, snap_tol)
    except BadStartValueError as err:
        raise BranchFailureError(
            "Pf q(0) does not square to det q(0).", err.residual
        ) from err


def evaluate_teo_kane(
    q: SewingField,
    tol: Optional[float] = None,
    sign_tol: float = DEFAULT_TOLERANCES["sign"],
    snap_tol: float = DEFAULT_TOLERANCES["snap"],
) -> TeoKaneResult:
    """Pfaffian ratio between the fixed points against a continuous root of det q.

    nu = Pf q(pi) / Pf q(0) * det q(0)^1/2 / det q(pi)^1/2, with the square root
    continued along [0, pi] from Pf q(0).

    Raises:
        TypeError: q is not on a circle grid.
        SewingViolationError: The sewing condition fails.
        BranchFailureError: No consistent square root branch exists on this grid.
        NotSignLikeError: The ratio is farther than ``sign_tol`` from +-1.
    """
    _require_grid(q, InvolutiveGrid1D)
    tol = _tol(q, tol)
    checks = _require_valid(q, tol)

    half = q.grid.half
    pf0 = pfaffian(q[0], tol)
    pf_pi = pfaffian(q[half], tol)
    det = det_field(q).values
    s = _branch(det, pf0, tol, snap_tol)
    phase, _ = unwrap_phase_1d(det)

    raw = (pf_pi / pf0) * (s[0] / s[half])
    value, deviation = _round(raw, sign_tol, "Teo-Kane invariant")
    return TeoKaneResult(value, raw, deviation, (pf0, pf_pi), s, phase, checks)


def teo_kane_1d(q: SewingField, tol: Optional[float] = None) -> int:
    """The Z2 invariant of a sewing field on the circle. See :func:`evaluate_teo_kane`."""
    return evaluate_teo_kane(q, tol).value


def construct_p_1d(
    q: SewingField, tol: Optional[float] = None
) -> tuple[np.ndarray, int]:
    """Build p with det q(x) = p(tau x) p(x) and p = Pf q at the fixed points.

    On [0, pi] p is the square root branch of det q started at Pf q(0), times a linear
    phase that lands on Pf q(pi). On (pi, 2 pi) it is fixed by p(k) = det q(k) / p(-k).

    Returns:
        (p, degree) where (-1)^degree is the invariant of q.

    Raises:
        BranchFailureError: The defining relations fail beyond ``tol``.
    """
    _require_grid(q, InvolutiveGrid1D)
    tol = _tol(q, tol)
    _require_valid(q, tol)

    N, half = q.grid.n_points, q.grid.half
    pf0 = pfaffian(q[0], tol)
    pf_pi = pfaffian(q[half], tol)
    det = det_field(q).values
    s = _branch(det, pf0, tol, DEFAULT_TOLERANCES["snap"])

    try:
        sign, _ = round_to_sign(pf_pi / s[half], DEFAULT_TOLERANCES["sign"])
    except NotSignLikeError as err:
        raise BranchFailureError(
            "Pf q(pi) is not a square root of det q(pi).", err.deviation
        ) from err

    alpha_pi = 0.0 if sign == 1 else np.pi
    p = np.empty(N, dtype=complex)
    j = np.arange(half + 1)
    p[: half + 1] = s[: half + 1] * np.exp(1j * alpha_pi * j / half)
    for idx in range(half + 1, N):
        p[idx] = det[idx] / p[N - idx]

    residual = float(np.max(np.abs(q.grid.reflect(p) * p - det)))
    residual = max(residual, abs(p[0] - pf0), abs(p[half] - pf_pi))
    if residual > max(tol, 10 * DEFAULT_TOLERANCES["snap"]):
        raise BranchFailureError("p does not satisfy its defining relations.", residual)

    _, degree = unwrap_phase_1d(p)
    return p, degree


def normalize_determinant(q: SewingField, tol: Optional[float] = None) -> SewingField:
    """Rescale q to det q = 1 by q'(k) = D(k) q(k) D(k), D = diag(g(k), 1, ..., 1).

    g is a continuous square root of 1 / det q on [0, pi], extended by g(-k) = g(k).

    Raises:
        NonzeroDetWindingError: det q winds around the circle.
        BranchFailureError: g fails to be continuous or to square to 1 / det q.
    """
    _require_grid(q, InvolutiveGrid1D)
    tol = _tol(q, tol)
    _require_valid(q, tol)

    N, half = q.grid.n_points, q.grid.half
    det = det_field(q).values
    _, winding = unwrap_phase_1d(det)
    if winding != 0:
        raise NonzeroDetWindingError(winding)

    inv_det = 1.0 / det
    start = complex(np.sqrt(inv_det[0]))
    branch = _branch(inv_det, start, tol, DEFAULT_TOLERANCES["snap"])
    g = np.empty(N, dtype=complex)
    g[: half + 1] = branch[: half + 1]
    g[half + 1 :] = g[1:half][::-1]

    residual = float(np.max(np.abs(g**2 * det - 1)))
    if residual > max(tol, 10 * DEFAULT_TOLERANCES["snap"]):
        raise BranchFailureError("g does not square to 1 / det q.", residual)
    unwrap_phase_1d(g)

    D = np.ones((N, q.rank), dtype=complex)
    D[:, 0] = g
    samples = D[:, :, None] * q.samples * D[:, None, :]
    return q.with_samples(q.grid, samples)


def normalize_basepoint(q: SewingField, tol: Optional[float] = None) -> SewingField:
    """Congruence q''(k) = u^t q(k) u with a constant unitary u so that q''(0) = Q.

    Raises:
        ValidationFailure: det q is not identically 1.
        NoConvergenceError: q''(0) misses Q by more than ``100 * tol``.
    """
    _require_grid(q, InvolutiveGrid1D)
    tol = _tol(q, tol)
    _require_valid(q, tol)
    _require_unit_det(q, tol)

    U = skew_takagi(q[0], tol)
    u = np.linalg.inv(U)
    samples = u.T @ q.samples @ u
    residual = op_norm(samples[0] - standard_symplectic(q.rank // 2))
    if residual > 100 * tol:
        raise NoConvergenceError(residual)
    return q.with_samples(q.grid, samples)


def basepoint_homotopy(
    q: SewingField, t: float, tol: Optional[float] = None
) -> SewingField:
    """Point t of the path from q (t = 0) to its base point normalization (t = 1).

    The path is q_t = u(t)^t q u(t) with u(t) = U^-t, U the skew Takagi factor of q(0),
    and the fractional power taken on the eigenvalue phases of the unitary U^-1.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"Homotopy parameter must lie in [0, 1], received {t}.")
    _require_grid(q, InvolutiveGrid1D)
    tol = _tol(q, tol)
    _require_valid(q, tol)

    U = skew_takagi(q[0], tol)
    schur, Z = la.schur(np.linalg.inv(U), output="complex")
    phases = np.angle(np.diag(schur))
    u_t = (Z * np.exp(1j * t * phases)) @ Z.conj().T
    return q.with_samples(q.grid, u_t.T @ q.samples @ u_t)


def classify_1d(q0: SewingField, q1: SewingField, tol: Optional[float] = None) -> str:
    """Homotopic iff the two sewing fields have the same invariant.

    Raises:
        RankMismatchError: The fields have different ranks.
    """
    if q0.rank != q1.rank:
        raise RankMismatchError(q0.rank, q1.rank)
    if teo_kane_1d(q0, tol) == teo_kane_1d(q1, tol):
        return Homotopy.HOMOTOPIC
    return Homotopy.NOT_HOMOTOPIC


def relative_invariant(
    H0: HamiltonianField,
    H1: HamiltonianField,
    symmetry: Optional[SymmetryTriple] = None,
    tol: float = DEFAULT_TOLERANCES["validation"],
) -> Union[int, tuple[int, int]]:
    """Relative invariant of two Hamiltonian fields with the same symmetries.

    Both fields are identified with the standard representation through the same unitary
    before their sewing fields are extracted. Returns the product of the circle
    invariants, or the componentwise product of the weak pairs on the torus.
    """
    check_same_grid(H0, H1)
    if H0.dim != H1.dim:
        raise DimensionMismatchError(
            f"Hamiltonian fields have dimensions {H0.dim} and {H1.dim}."
        )
    if symmetry is not None:
        W, _ = standard_form(symmetry, tol)
        H0 = conjugate_field(H0, W.conj().T)
        H1 = conjugate_field(H1, W.conj().T)

    q0 = extract_sewing(H0, tol)
    q1 = extract_sewing(H1, tol)
    if isinstance(q0.grid, InvolutiveGrid1D):
        return teo_kane_1d(q0) * teo_kane_1d(q1)
    w0, w1 = weak_invariants_2d(q0), weak_invariants_2d(q1)
    return (w0[0] * w1[0], w0[1] * w1[1])


def fixed_point_component(
    S: np.ndarray,
    tol: float = DEFAULT_TOLERANCES["validation"],
    sign_tol: float = DEFAULT_TOLERANCES["sign"],
) -> int:
    """Connected component Pf(S) / Pf(Q) of a skew-symmetric unitary with det S = 1.

    Raises:
        NotSkewUnitaryError: S is not skew-symmetric and unitary.
        NotSignLikeError: det S is not 1.
    """
    S = np.asarray(S, dtype=complex)
    unit_res, skew_res = unitarity_residual(S), skew_residual(S)
    if unit_res > tol or skew_res > tol:
        raise NotSkewUnitaryError(unit_res, skew_res)

    det = complex(np.linalg.det(S))
    if abs(det - 1) > sign_tol:
        raise NotSignLikeError(det, abs(det - 1))

    n = S.shape[0] // 2
    reference = (-1) ** (n * (n + 1) // 2)
    sign, _ = round_to_sign(pfaffian(S, tol) * reference, sign_tol)
    return sign


def gerbe_sign_1d(q: SewingField, tol: Optional[float] = None) -> int:
    """Whether q(0) and q(pi) lie in the same component of the det 1 skew unitaries.

    Equals Pf q(0) Pf q(pi) for a field with det q = 1.
    """
    _require_grid(q, InvolutiveGrid1D)
    tol = _tol(q, tol)
    _require_valid(q, tol)
    _require_unit_det(q, tol)
    return fixed_point_component(q[0], tol) * fixed_point_component(
        q[q.grid.half], tol
    )


def evaluate_strong_2d(
    q: SewingField,
    tol: Optional[float] = None,
    sign_tol: float = DEFAULT_TOLERANCES["sign"],
    snap_tol: float = DEFAULT_TOLERANCES["snap"],
) -> StrongResult:
    """Product over the four fixed points of Pf q(k) / det q(k)^1/2.

    The square root is the global branch on the torus, so the result does not depend
    on its overall sign.
    """
    _require_grid(q, InvolutiveGrid2D)
    tol = _tol(q, tol)
    checks = _require_valid(q, tol)

    pfs = [pfaffian(q[idx], tol) for idx in q.grid.fixed_points]
    det = det_field(q).values
    try:
        s, _ = sqrt_branch_2d(det, pfs[0], tol, snap_tol)
    except BadStartValueError as err:
        raise BranchFailureError(
            "Pf q(0, 0) does not square to det q(0, 0).", err.residual
        ) from err

    phase, _ = unwrap_phase_2d(det)

    raw = complex(np.prod([pf / s[idx] for pf, idx in zip(pfs, q.grid.fixed_points)]))
    value, deviation = _round(raw, sign_tol, "Strong invariant")
    return StrongResult(value, raw, deviation, pfs, s, phase, checks)


def strong_invariant_2d(q: SewingField, tol: Optional[float] = None) -> int:
    return evaluate_strong_2d(q, tol).value


def weak_invariants_2d(q: SewingField, tol: Optional[float] = None) -> tuple[int, int]:
    """Invariants of the restrictions to the circles (k, 0) and (0, k)."""
    _require_grid(q, InvolutiveGrid2D)
    return (
        teo_kane_1d(restrict_to_circle(q, 1), tol),
        teo_kane_1d(restrict_to_circle(q, 2), tol),
    )


def full_invariant_2d(
    q: SewingField, tol: Optional[float] = None
) -> tuple[int, int, int]:
    """The triple (nu_w1, nu_w2, nu_s) of a sewing field on the torus."""
    w1, w2 = weak_invariants_2d(q, tol)
    return (w1, w2, strong_invariant_2d(q, tol))


def direct_sum(q: SewingField, q_prime: SewingField) -> SewingField:
    """Blockwise direct sum diag(q(x), q'(x))."""
    check_same_grid(q, q_prime)
    r, r_prime = q.rank, q_prime.rank
    samples = np.zeros(q.grid.shape + (r + r_prime, r + r_prime), dtype=complex)
    samples[..., :r, :r] = q.samples
    samples[..., r:, r:] = q_prime.samples
    return SewingField(q.grid, samples, max(q.tol, q_prime.tol))


def apply_intertwiner(q: SewingField, h: np.ndarray) -> SewingField:
    """The congruent field q'(x) = h(tau x)^t q(x) h(x)."""
    h = np.asarray(h, dtype=complex)
    if h.shape != q.samples.shape:
        raise DimensionMismatchError(
            f"Intertwiner of shape {h.shape} does not match field of shape "
            f"{q.samples.shape}."
        )
    h_reflected = q.grid.reflect(h)
    return q.with_samples(q.grid, np.swapaxes(h_reflected, -1, -2) @ q.samples @ h)


def det_winding(h: np.ndarray) -> int:
    """Winding number of det h for a unitary field on the circle."""
    _, winding = unwrap_phase_1d(np.linalg.det(h))
    return winding
