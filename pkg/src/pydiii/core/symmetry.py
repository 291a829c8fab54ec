"""Antiunitary symmetry algebra of class DIII.

An antiunitary operator is stored as its unitary part U and acts as v -> U conj(v).
Composing two antiunitaries A, B gives the linear map U_A conj(U_B), and conjugating a
linear map M by A gives U conj(M) U^*.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as la

from .fields import (
    HamiltonianField,
    SewingField,
    Residuals,
    max_with_location,
    pointwise_norms,
    check_same_grid,
)
from .linalg import op_norm, polar_flatten, unitarity_residual
from ..exceptions import (
    DimensionMismatchError,
    OddTotalDimensionError,
    UnequalChiralEigenspacesError,
    NotInCommutantError,
    NotStandardFormError,
    SewingViolationError,
    ValidationFailure,
)

logger = logging.getLogger(__name__)


def _dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


@dataclass(frozen=True)
class AntiUnitaryOp:
    """Antiunitary operator v -> U conj(v)."""

    unitary_part: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "unitary_part", np.asarray(self.unitary_part, dtype=complex)
        )

    @property
    def dim(self) -> int:
        return self.unitary_part.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.unitary_part @ np.conj(v)

    def compose(self, other: "AntiUnitaryOp") -> np.ndarray:
        """The linear map self o other."""
        return self.unitary_part @ np.conj(other.unitary_part)

    def square(self) -> np.ndarray:
        return self.compose(self)

    def conjugate(self, M: np.ndarray) -> np.ndarray:
        """The linear map self o M o self^-1, for a single matrix or a stack."""
        U = self.unitary_part
        return U @ np.conj(M) @ U.conj().T

    def change_basis(self, W: np.ndarray) -> "AntiUnitaryOp":
        """Representation in the basis given by the columns of the unitary W."""
        return AntiUnitaryOp(W.conj().T @ self.unitary_part @ np.conj(W))


@dataclass(frozen=True)
class SymmetryTriple:
    """Time reversal T, particle-hole C and chiral operator chi = T o C.

    Attributes:
        T (AntiUnitaryOp): Time reversal with T^2 = -1.
        C (AntiUnitaryOp): Particle-hole conjugation with C^2 = +1.
        chi (np.ndarray): The linear chiral operator.
    """

    T: AntiUnitaryOp
    C: AntiUnitaryOp
    chi: np.ndarray

    @classmethod
    def from_operators(cls, U_T: np.ndarray, U_C: np.ndarray) -> "SymmetryTriple":
        T = AntiUnitaryOp(U_T)
        C = AntiUnitaryOp(U_C)
        if T.dim != C.dim:
            raise DimensionMismatchError(
                f"T and C act on spaces of dimension {T.dim} and {C.dim}."
            )
        if T.dim % 2 == 1:
            raise OddTotalDimensionError(T.dim)
        return cls(T, C, T.compose(C))

    @property
    def dim(self) -> int:
        return self.T.dim

    def residuals(self, tol: float = 1e-8) -> Residuals:
        """Residuals of the defining relations of the triple."""
        U_T = self.T.unitary_part
        U_C = self.C.unitary_part
        chi = self.chi
        eye = np.eye(self.dim)
        values = {
            "T_unitary": unitarity_residual(U_T),
            "C_unitary": unitarity_residual(U_C),
            "T_squared": op_norm(self.T.square() + eye),
            "C_squared": op_norm(self.C.square() - eye),
            "TC_anticommute": op_norm(self.T.compose(self.C) + self.C.compose(self.T)),
            "chi_squared": op_norm(chi @ chi - eye),
            "T_chi_anticommute": op_norm(U_T @ np.conj(chi) + chi @ U_T),
            "C_chi_anticommute": op_norm(U_C @ np.conj(chi) + chi @ U_C),
        }
        return Residuals(values, tol)

    def change_basis(self, W: np.ndarray) -> "SymmetryTriple":
        return SymmetryTriple(
            self.T.change_basis(W), self.C.change_basis(W), W.conj().T @ self.chi @ W
        )


def standard_triple(m: int) -> SymmetryTriple:
    """Standard representation on C^m + C^m.

    chi = diag(1, -1), U_T = [[0, -1], [1, 0]] and U_C = [[0, -1], [-1, 0]].
    """
    eye = np.eye(m, dtype=complex)
    zero = np.zeros((m, m), dtype=complex)
    U_T = np.block([[zero, -eye], [eye, zero]])
    U_C = np.block([[zero, -eye], [-eye, zero]])
    return SymmetryTriple.from_operators(U_T, U_C)


def verify_class_diii(
    H: HamiltonianField, sym: SymmetryTriple, tol: float = 1e-8
) -> Residuals:
    """Check the class DIII relations of a Hamiltonian field.

    Reports the maxima over the grid of ||T H(x) - H(tau x) T||, ||C H(x) + H(tau x) C||
    and ||chi H(x) + H(x) chi||, with the antiunitaries acting as matrix identities
    U conj(H(x)) = +-H(tau x) U.

    Raises:
        DimensionMismatchError: The symmetry operators and H have different sizes.
        OddTotalDimensionError: The total dimension is odd.
    """
    if sym.dim != H.dim:
        raise DimensionMismatchError(
            f"Symmetry acts on dimension {sym.dim}, Hamiltonian has dimension {H.dim}."
        )
    if H.dim % 2 == 1:
        raise OddTotalDimensionError(H.dim)

    samples = H.samples
    reflected = H.reflected()
    U_T = sym.T.unitary_part
    U_C = sym.C.unitary_part
    chi = sym.chi

    t_norms = pointwise_norms(U_T @ np.conj(samples) - reflected @ U_T)
    c_norms = pointwise_norms(U_C @ np.conj(samples) + reflected @ U_C)
    chi_norms = pointwise_norms(chi @ samples + samples @ chi)

    values, locations = {}, {}
    for name, norms in (
        ("time_reversal", t_norms),
        ("particle_hole", c_norms),
        ("chiral", chi_norms),
    ):
        values[name], locations[name] = max_with_location(norms)

    return Residuals(values, tol, locations)


def standard_form(
    sym: SymmetryTriple, tol: float = 1e-8
) -> tuple[np.ndarray, SymmetryTriple]:
    """Find a unitary W that brings a class DIII triple to the standard representation.

    The chiral operator is diagonalised with the +1 eigenvectors first. In that basis T
    is block off-diagonal [[0, A], [B, 0]] and post-composing with diag(1, B) fixes the
    lower-left block to the identity. C then follows from chi = T o C.

    Returns:
        (W, standardized) where ``standardized = sym.change_basis(W)``.

    Raises:
        ValidationFailure: The triple does not satisfy the class DIII relations.
        UnequalChiralEigenspacesError: The chiral eigenspaces differ in dimension.
        NotStandardFormError: The reduced triple misses the standard one by more than
            ``100 * tol``.
    """
    chi = 0.5 * (sym.chi + sym.chi.conj().T)
    eigvals, vecs = la.eigh(chi)
    n_plus = int(np.sum(eigvals > 0))
    n_minus = sym.dim - n_plus
    if n_plus != n_minus:
        raise UnequalChiralEigenspacesError(n_plus, n_minus)

    checks = sym.residuals(tol)
    if not checks.passed:
        raise ValidationFailure(
            "Symmetry operators do not satisfy the class DIII relations.",
            checks.to_dict(),
        )

    m = n_plus
    V = vecs[:, ::-1]
    V, R = la.qr(V)
    phases = np.diag(R) / np.abs(np.diag(R))
    V = V * phases

    U_T = V.conj().T @ sym.T.unitary_part @ np.conj(V)
    B = U_T[m:, :m]
    D = la.block_diag(np.eye(m), B)
    W = V @ D

    standardized = sym.change_basis(W)
    target = standard_triple(m)
    residuals = {
        "T": op_norm(standardized.T.unitary_part - target.T.unitary_part),
        "C": op_norm(standardized.C.unitary_part - target.C.unitary_part),
        "chi": op_norm(standardized.chi - target.chi),
    }
    if max(residuals.values()) > 100 * tol:
        raise NotStandardFormError(residuals)

    logger.debug("standard_form: m=%d residuals=%s", m, residuals)
    return W, standardized


def commutant_phase(V: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Return phi with V = diag(phi, conj(phi)) for V commuting with the standard chi and T.

    Raises:
        NotInCommutantError: V does not commute with chi or T, or is not of the block
            form within ``10 * tol``.
    """
    V = np.asarray(V, dtype=complex)
    m = V.shape[0] // 2
    sym = standard_triple(m)
    chiral_res = op_norm(V @ sym.chi - sym.chi @ V)
    t_res = op_norm(sym.T.unitary_part @ np.conj(V) - V @ sym.T.unitary_part)
    if chiral_res > tol or t_res > tol:
        raise NotInCommutantError(chiral_res, t_res)

    phi = V[:m, :m]
    block_res = op_norm(V - la.block_diag(phi, np.conj(phi)))
    if block_res > 10 * tol:
        raise NotInCommutantError(chiral_res, t_res)
    return phi


def hamiltonian_from_sewing(q: SewingField) -> HamiltonianField:
    """Flat Hamiltonian field H = [[0, q^*], [q, 0]]."""
    samples = q.samples
    zero = np.zeros_like(samples)
    top = np.concatenate([zero, _dagger(samples)], axis=-1)
    bottom = np.concatenate([samples, zero], axis=-1)
    return HamiltonianField(q.grid, np.concatenate([top, bottom], axis=-2))


def conjugate_field(H: HamiltonianField, V: np.ndarray) -> HamiltonianField:
    """Unitarily equivalent field x -> V H(x) V^*."""
    V = np.asarray(V, dtype=complex)
    if V.shape != (H.dim, H.dim):
        raise DimensionMismatchError(
            f"Unitary of shape {V.shape} does not act on dimension {H.dim}."
        )
    return H.with_samples(H.grid, V @ H.samples @ V.conj().T)


def to_standard_representation(
    H: HamiltonianField, sym: Optional[SymmetryTriple], tol: float = 1e-8
) -> HamiltonianField:
    """Express H in the standard basis of ``sym``. ``None`` means it already is."""
    if sym is None:
        return H
    W, _ = standard_form(sym, tol)
    return conjugate_field(H, W.conj().T)


def extract_sewing(
    H: HamiltonianField,
    tol: float = 1e-8,
    symmetry: Optional[SymmetryTriple] = None,
) -> SewingField:
    """Sewing matrix field of a Hamiltonian field in standard representation.

    Each sample is flattened with :func:`polar_flatten` and the lower-left block is
    returned. When ``symmetry`` is given the field is first reduced with
    :func:`standard_form`.

    Raises:
        NotStandardFormError: H does not satisfy the relations of the standard triple.
        OddSewingRankError: The sewing rank is odd.
        SewingViolationError: q(tau x) = -q(x)^t fails by more than ``10 * tol``.
    """
    H = to_standard_representation(H, symmetry, tol)
    m = H.dim // 2
    scale = max(1.0, float(np.max(np.abs(H.samples))))
    checks = verify_class_diii(H, standard_triple(m), tol * scale)
    if not checks.passed:
        raise NotStandardFormError(checks.to_dict())

    flat_shape = H.samples.shape
    flat = np.reshape(H.samples, (-1, H.dim, H.dim))
    q_samples = np.stack([polar_flatten(h, tol * scale)[m:, :m] for h in flat])
    q_samples = np.reshape(q_samples, flat_shape[:-2] + (m, m))

    q = SewingField(H.grid, q_samples, tol)
    sewing_norms = pointwise_norms(q.reflected() + np.swapaxes(q.samples, -1, -2))
    residual, index = max_with_location(sewing_norms)
    if residual > 10 * tol:
        raise SewingViolationError(residual, index)
    return q


def verify_intertwiner(
    q: SewingField,
    q_prime: SewingField,
    phi: np.ndarray,
    strong: bool = False,
    tol: float = 1e-8,
) -> Residuals:
    """Check q'(x) = phi(tau x)^t q(x) phi(x), and phi(tau x) = phi(x) when ``strong``.

    Raises:
        DimensionMismatchError: Ranks or sample shapes do not agree.
    """
    check_same_grid(q, q_prime)
    phi = np.asarray(phi, dtype=complex)
    if q.rank != q_prime.rank or phi.shape != q.samples.shape:
        raise DimensionMismatchError(
            f"Cannot intertwine fields of shapes {q.samples.shape}, "
            f"{q_prime.samples.shape} with phi of shape {phi.shape}."
        )

    phi_reflected = q.grid.reflect(phi)
    predicted = np.swapaxes(phi_reflected, -1, -2) @ q.samples @ phi
    values, locations = {}, {}
    values["intertwining"], locations["intertwining"] = max_with_location(
        pointwise_norms(q_prime.samples - predicted)
    )
    if strong:
        values["tau_invariance"], locations["tau_invariance"] = max_with_location(
            pointwise_norms(phi_reflected - phi)
        )
    return Residuals(values, tol, locations)
