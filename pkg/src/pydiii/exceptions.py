"""Error hierarchy for pydiii.

Every error carries an optional dictionary of numeric diagnostics (residuals, indices,
counts) that is rendered below the message. The four family classes fix the exit code
used by the command line interface.
"""

from typing import Optional

import numpy as np


def _format_diagnostic_line(name: str, val) -> str:
    return "{}: {}\n".format(name, val)


def diagnostics_summary(diagnostics: dict) -> str:
    summary = "---- Diagnostics ----\n"
    for name in sorted(diagnostics):
        summary += _format_diagnostic_line(name, diagnostics[name])
    return summary


def _restore_error(cls, state: dict):
    err = cls.__new__(cls)
    Exception.__init__(err, state.get("message", ""))
    err.__dict__.update(state)
    return err


class DIIIError(Exception):

    exit_code: int = 1

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.message = message
        self._diagnostics = dict(diagnostics) if diagnostics else {}
        super().__init__(message)

    def get_diagnostics(self) -> dict:
        return self._diagnostics

    def __reduce__(self):
        # Subclasses take their payload, not the message, as constructor arguments.
        return (_restore_error, (type(self), self.__dict__.copy()))

    def __str__(self):
        if not self._diagnostics:
            return self.message
        return f"{self.message} \n\n{diagnostics_summary(self._diagnostics)}"


class ValidationError(DIIIError):
    """Input violates a structural precondition (symmetry, shape, sewing condition)."""

    exit_code = 1


class InputError(DIIIError):
    """Unknown model, bad grid request or mismatched files at the user boundary."""

    exit_code = 2


class ParseError(DIIIError):
    """Sample file could not be read or does not match the schema."""

    exit_code = 3


class NumericalError(DIIIError):
    """A numerical procedure could not certify its result."""

    exit_code = 4


# ---- Validation errors ----


class NotHermitianError(ValidationError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Matrix is not Hermitian, residual {residual:.3e}."
        super().__init__(msg, {"hermiticity_residual": residual})


class NotSkewSymmetricError(ValidationError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Matrix is not skew-symmetric, residual |A + A^t| = {residual:.3e}."
        super().__init__(msg, {"skew_residual": residual})


class NotSkewUnitaryError(ValidationError):

    def __init__(self, unitarity_residual: float, skew_residual: float):
        self.unitarity_residual = unitarity_residual
        self.skew_residual = skew_residual
        msg = "Matrix is not a skew-symmetric unitary."
        super().__init__(
            msg,
            {"unitarity_residual": unitarity_residual, "skew_residual": skew_residual},
        )


class NotUnitaryError(ValidationError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Symbol is not unitary, residual {residual:.3e}."
        super().__init__(msg, {"unitarity_residual": residual})


class OddDimensionError(ValidationError):

    def __init__(self, size: int):
        self.size = size
        super().__init__(f"Pfaffian requires an even dimension, received {size}.")


class OddTotalDimensionError(ValidationError):

    def __init__(self, size: int):
        self.size = size
        msg = f"Class DIII requires an even total dimension, received {size}."
        super().__init__(msg)


class DimensionMismatchError(ValidationError):

    def __init__(self, message: str):
        super().__init__(message)


class UnequalChiralEigenspacesError(ValidationError):

    def __init__(self, n_plus: int, n_minus: int):
        self.n_plus = n_plus
        self.n_minus = n_minus
        msg = "The +1 and -1 eigenspaces of the chiral operator must have the same "
        msg += f"dimension. Received {n_plus} and {n_minus}."
        super().__init__(msg, {"n_plus": n_plus, "n_minus": n_minus})


class NotInCommutantError(ValidationError):

    def __init__(self, chiral_residual: float, time_reversal_residual: float):
        msg = "Unitary does not commute with the standard chiral and time-reversal "
        msg += "operators."
        super().__init__(
            msg,
            {
                "chiral_residual": chiral_residual,
                "time_reversal_residual": time_reversal_residual,
            },
        )


class NotStandardFormError(ValidationError):

    def __init__(self, residuals: dict):
        msg = "Hamiltonian field is not in the standard representation. "
        msg += "Reduce it with standard_form first."
        super().__init__(msg, residuals)


class SewingViolationError(ValidationError):

    def __init__(self, residual: float, index: Optional[int] = None):
        self.residual = residual
        self.index = index
        msg = f"Sewing condition q(tau x) = -q(x)^t violated, residual {residual:.3e}"
        msg += "." if index is None else f" at grid index {index}."
        diagnostics = {"sewing_residual": residual}
        if index is not None:
            diagnostics["index"] = index
        super().__init__(msg, diagnostics)


class OddSewingRankError(ValidationError):

    def __init__(self, rank: int):
        self.rank = rank
        super().__init__(f"Sewing matrices must have even rank, received {rank}.")


class NotEquivariantError(ValidationError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Map is not equivariant, residual |r(-k) - conj(r(k))| = {residual:.3e}."
        super().__init__(msg, {"equivariance_residual": residual})


class RankMismatchError(ValidationError):

    def __init__(self, rank_a: int, rank_b: int):
        msg = f"Sewing fields have different ranks: {rank_a} and {rank_b}."
        super().__init__(msg, {"rank_a": rank_a, "rank_b": rank_b})


class GridMismatchError(ValidationError):

    def __init__(self, shape_a: tuple, shape_b: tuple):
        msg = f"Fields live on different grids: {shape_a} and {shape_b}."
        super().__init__(msg)


class BadStartValueError(ValidationError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Start value does not square to the field at the base point, "
        msg += f"residual {residual:.3e}."
        super().__init__(msg, {"start_residual": residual})


class BandwidthTooLargeError(ValidationError):

    def __init__(self, bandwidth: int, n_points: int):
        msg = f"Bandwidth {bandwidth} must be smaller than half the grid size {n_points}."
        super().__init__(msg)


class ValidationFailure(ValidationError):
    """Raised by the command line when a sample file fails its residual checks."""

    def __init__(self, message: str, residuals: dict):
        super().__init__(message, residuals)


# ---- Input errors ----


class UnknownModelError(InputError):

    def __init__(self, name: str, known: list[str]):
        self.name = name
        super().__init__(f"Unknown model {name!r}. Known models: {known}.")


class BadGridError(InputError):

    def __init__(self, message: str):
        super().__init__(message)


class OddNError(BadGridError):

    def __init__(self, n_points: int):
        self.n_points = n_points
        super().__init__(f"Grid size must be even, received {n_points}.")


class TooSmallError(BadGridError):

    def __init__(self, n_points: int):
        self.n_points = n_points
        super().__init__(f"Grid size must be at least 4, received {n_points}.")


class MismatchError(InputError):

    def __init__(self, message: str):
        super().__init__(message)


# ---- Numerical errors ----


class SingularInputError(NumericalError):

    def __init__(self, min_singular_value: float):
        self.min_singular_value = min_singular_value
        msg = "Hamiltonian sample is not invertible (gapless), smallest singular value "
        msg += f"{min_singular_value:.3e}."
        super().__init__(msg, {"min_singular_value": min_singular_value})


class NoConvergenceError(NumericalError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Skew Takagi reduction did not reach block form, residual {residual:.3e}."
        super().__init__(msg, {"block_residual": residual})


class GridTooCoarseError(NumericalError):

    def __init__(self, index, increment: float, max_step: float = np.pi):
        self.index = index
        self.increment = increment
        msg = f"Phase increment {increment:.3f} at grid index {index} reaches the limit "
        msg += f"{max_step:.3f}. "
        msg += "Refine the grid."
        super().__init__(msg, {"index": index, "increment": increment})


class NonzeroWindingError(NumericalError):

    def __init__(self, n1: int, n2: int):
        self.windings = (n1, n2)
        msg = f"Determinant field has nonzero torus windings ({n1}, {n2})."
        super().__init__(msg, {"n1": n1, "n2": n2})


class InconsistentUnwrapError(NumericalError):

    def __init__(self, residual: float):
        self.residual = residual
        msg = f"Plaquette phase sums do not vanish, max residual {residual:.3e}."
        super().__init__(msg, {"plaquette_residual": residual})


class CrossCheckFailureError(NumericalError):

    def __init__(self, parity: int, winding: int):
        msg = f"Fixed point ratio {parity:+d} disagrees with winding {winding}."
        super().__init__(msg, {"parity": parity, "winding": winding})


class BranchFailureError(NumericalError):

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(message, {"branch_residual": residual})


class NotSignLikeError(NumericalError):

    def __init__(self, value: complex, deviation: float):
        self.value = value
        self.deviation = deviation
        msg = f"Value {value:.6g} is not within rounding distance of +1 or -1."
        super().__init__(msg, {"deviation": deviation})


class NonzeroDetWindingError(NumericalError):

    def __init__(self, winding: int):
        self.winding = winding
        msg = f"Determinant field winds {winding} times; input violates the sewing "
        msg += "invariance."
        super().__init__(msg, {"winding": winding})


class UnstableKernelError(NumericalError):

    def __init__(self, counts: dict):
        self.counts = counts
        msg = f"Kernel dimension did not stabilise across truncations: {counts}."
        super().__init__(msg, {f"N={n}": c for n, c in counts.items()})


class KernelMismatchError(NumericalError):

    def __init__(self, kernel_dim: int, cokernel_dim: int):
        msg = f"Kernel dimension {kernel_dim} and cokernel dimension {cokernel_dim} of a "
        msg += "skew-complex symmetric Toeplitz operator must agree."
        super().__init__(msg, {"kernel_dim": kernel_dim, "cokernel_dim": cokernel_dim})


class TruncationNotCertifiedError(NumericalError):

    def __init__(self, bandwidth: int, residual: float, fit_tol: float):
        self.bandwidth = bandwidth
        self.residual = residual
        msg = f"Band truncation residual {residual:.3e} at the largest bandwidth "
        msg += f"{bandwidth} exceeds {fit_tol:.1e}. Refine the grid."
        super().__init__(msg, {"bandwidth": bandwidth, "truncation_residual": residual})
