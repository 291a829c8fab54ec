"""Block Toeplitz operators with sewing matrix symbols.

The Hardy space is spanned by the Fourier modes m >= 0. A symbol q(k) = sum q_m e^{imk}
is stored through its coefficients for m in [-W, W]; the sewing condition reads
q_{-m} = -q_m^t.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional
from warnings import warn

import numpy as np
import scipy.linalg as la

from .config import DEFAULT_TOLERANCES, DEFAULT_BANDWIDTH
from .core.fields import SewingField
from .core.grid import InvolutiveGrid1D
from .core.linalg import kernel_dimension, unitarity_residual
from .core.sewing import unwrap_phase_1d
from .invariants import teo_kane_1d
from .exceptions import (
    BandwidthTooLargeError,
    NotUnitaryError,
    UnstableKernelError,
    KernelMismatchError,
    TruncationNotCertifiedError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BandedSymbol:
    """Trigonometric polynomial symbol of bandwidth W.

    Attributes:
        coefficients (np.ndarray): Array of shape (2W + 1, r, r), entry ``m + W`` holds
            the coefficient of e^{imk}.
        truncation_residual (float): Distance to the sampled field it was fitted to.
        sewing_adjustment (float): Size of the correction enforcing q_{-m} = -q_m^t.
    """

    coefficients: np.ndarray = field(repr=False)
    truncation_residual: float = 0.0
    sewing_adjustment: float = 0.0

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.ndim != 3 or coeffs.shape[0] % 2 == 0:
            raise ValueError(
                f"Coefficients must have shape (2W + 1, r, r), received {coeffs.shape}."
            )
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_modes(cls, modes: dict[int, np.ndarray]) -> "BandedSymbol":
        """Build a symbol from a mapping of mode index to coefficient matrix."""
        bandwidth = max(abs(m) for m in modes)
        rank = np.asarray(next(iter(modes.values()))).shape[0]
        coeffs = np.zeros((2 * bandwidth + 1, rank, rank), dtype=complex)
        for m, mat in modes.items():
            coeffs[m + bandwidth] = mat
        return cls(coeffs)

    @property
    def bandwidth(self) -> int:
        return (self.coefficients.shape[0] - 1) // 2

    @property
    def rank(self) -> int:
        return self.coefficients.shape[-1]

    def coefficient(self, m: int) -> np.ndarray:
        if abs(m) > self.bandwidth:
            return np.zeros((self.rank, self.rank), dtype=complex)
        return self.coefficients[m + self.bandwidth]

    def evaluate(self, k: np.ndarray) -> np.ndarray:
        """Samples q(k) for an array of momenta, shape ``k.shape + (r, r)``."""
        k = np.asarray(k, dtype=float)
        modes = np.arange(-self.bandwidth, self.bandwidth + 1)
        phases = np.exp(1j * np.multiply.outer(k, modes))
        return np.tensordot(phases, self.coefficients, axes=([-1], [0]))

    def adjoint(self) -> "BandedSymbol":
        """Symbol of q(k)^*, with coefficients q_{-m}^*."""
        coeffs = np.conj(np.swapaxes(self.coefficients[::-1], -1, -2))
        return BandedSymbol(coeffs, self.truncation_residual, self.sewing_adjustment)

    def sewing_residual(self) -> float:
        flipped = self.coefficients[::-1]
        return float(np.max(np.abs(flipped + np.swapaxes(self.coefficients, -1, -2))))


@dataclass(frozen=True)
class ToeplitzTruncation:
    """Square finite section of T_q on the modes 0 ... N - 1.

    Attributes:
        n_blocks (int): Number of Fourier modes N.
        matrix (np.ndarray): The (N r) x (N r) matrix with block (i, j) = q_{i - j}.
    """

    n_blocks: int
    matrix: np.ndarray = field(repr=False)


@dataclass
class KernelResult:
    """Kernel of a Toeplitz operator.

    Attributes:
        dim (int): Kernel dimension.
        witnesses (np.ndarray): Kernel vectors as coefficient arrays of shape
            (dim, W, r) over the modes 0 ... W - 1.
        gap_ratio (float): Singular value gap of the elimination map.
        singular_values (np.ndarray): Singular values of the elimination map.
    """

    dim: int
    witnesses: np.ndarray = field(repr=False)
    gap_ratio: float
    singular_values: np.ndarray = field(repr=False)


@dataclass
class IndexTheoremReport:
    """Both sides of the index theorem for a sewing field on the circle.

    Attributes:
        nu (int): Pfaffian invariant of the field.
        ind (int): Z2 index of the Toeplitz operator with the fitted symbol.
        agree (bool): ``nu == ind``.
        kernel (KernelResult): Kernel of the Toeplitz operator.
        bandwidth (int): Bandwidth of the fitted symbol.
        truncation_residual (float): Band truncation residual of the fit.
        noether (int): Fredholm index of the Toeplitz operator, zero for sewing symbols.
    """

    nu: int
    ind: int
    agree: bool
    kernel: KernelResult
    bandwidth: int
    truncation_residual: float
    noether: int = 0

    def to_dict(self, witnesses: bool = False) -> dict:
        out = {
            "nu": self.nu,
            "ind": self.ind,
            "agree": self.agree,
            "kernel_dim": self.kernel.dim,
            "bandwidth": self.bandwidth,
            "truncation_residual": self.truncation_residual,
            "noether_index": self.noether,
            "gap_ratio": _finite(self.kernel.gap_ratio),
        }
        if witnesses:
            out["witnesses"] = [
                [[[float(z.real), float(z.imag)] for z in mode] for mode in vec]
                for vec in self.kernel.witnesses
            ]
        return out


def _finite(value: float) -> Optional[float]:
    return None if not np.isfinite(value) else float(value)


def fourier_coefficients(
    q: SewingField,
    bandwidth: int,
    tol: float = DEFAULT_TOLERANCES["validation"],
) -> BandedSymbol:
    """Fit a banded symbol to a sampled sewing field by discrete Fourier transform.

    The sewing relation q_{-m} = -q_m^t is enforced by averaging the pair.

    Raises:
        BandwidthTooLargeError: ``bandwidth`` is not below N / 2.
    """
    N = q.grid.n_points
    if bandwidth >= N // 2:
        raise BandwidthTooLargeError(bandwidth, N)

    spectrum = np.fft.fft(q.samples, axis=0) / N
    modes = np.arange(-bandwidth, bandwidth + 1)
    raw = spectrum[modes % N]

    coeffs = 0.5 * (raw - np.swapaxes(raw[::-1], -1, -2))
    adjustment = float(np.max(np.abs(coeffs - raw)))
    if adjustment > tol:
        warn(f"Fourier sewing adjustment {adjustment:.3e} exceeds tolerance {tol:.1e}.")

    sym = BandedSymbol(coeffs)
    fitted = sym.evaluate(q.grid.points)
    residual = float(np.max(np.linalg.norm(q.samples - fitted, ord=2, axis=(-2, -1))))
    logger.debug(
        "fourier_coefficients: W=%d truncation=%.3e adjustment=%.3e",
        bandwidth,
        residual,
        adjustment,
    )
    return BandedSymbol(coeffs, residual, adjustment)


def build_truncation(sym: BandedSymbol, n_blocks: int) -> ToeplitzTruncation:
    """Square block Toeplitz section with block (i, j) = q_{i - j}, i, j in [0, N)."""
    if n_blocks <= sym.bandwidth:
        raise ValueError(
            f"Number of blocks {n_blocks} must exceed the bandwidth {sym.bandwidth}."
        )
    return ToeplitzTruncation(n_blocks, _block_toeplitz(sym, n_blocks, n_blocks))


def _block_toeplitz(sym: BandedSymbol, n_rows: int, n_cols: int) -> np.ndarray:
    r = sym.rank
    mat = np.zeros((n_rows * r, n_cols * r), dtype=complex)
    for i in range(n_rows):
        for j in range(max(0, i - sym.bandwidth), min(n_cols, i + sym.bandwidth + 1)):
            mat[i * r : (i + 1) * r, j * r : (j + 1) * r] = sym.coefficient(i - j)
    return mat


def _check_unitary(sym: BandedSymbol, unitarity_tol: float) -> None:
    n_points = max(64, 4 * sym.bandwidth + 4)
    samples = sym.evaluate(2 * np.pi * np.arange(n_points) / n_points)
    residual = unitarity_residual(samples)
    if residual > unitarity_tol:
        raise NotUnitaryError(residual)


def _elimination_map(sym: BandedSymbol) -> np.ndarray:
    """Map b on modes [-W, -1] to the modes [-2W, -1] of q^* b."""
    W, r = sym.bandwidth, sym.rank
    mat = np.zeros((2 * W * r, W * r), dtype=complex)
    for row, p in enumerate(range(-2 * W, 0)):
        for col, s in enumerate(range(-W, 0)):
            if abs(s - p) <= W:
                block = sym.coefficient(s - p).conj().T
                mat[row * r : (row + 1) * r, col * r : (col + 1) * r] = block
    return mat


def _normalise_witness(vec: np.ndarray) -> np.ndarray:
    flat = vec.ravel()
    pivot = flat[int(np.argmax(np.abs(flat)))]
    vec = vec * (np.abs(pivot) / pivot)
    return vec / np.linalg.norm(vec)


def exact_kernel_dim_banded(
    sym: BandedSymbol,
    tol: float = DEFAULT_TOLERANCES["kernel"],
    unitarity_tol: float = 1e-6,
) -> KernelResult:
    """Exact kernel of the semi-infinite Toeplitz operator T_q of a unitary banded symbol.

    a lies in the kernel iff q a only has negative modes. Writing a = q^* b, b lives on
    the modes [-W, -1] and the kernel is the null space of the map sending b to the
    negative modes of q^* b. Kernel vectors are polynomials on the modes 0 ... W - 1.

    Raises:
        NotUnitaryError: The symbol is not unitary within ``unitarity_tol``.
    """
    _check_unitary(sym, unitarity_tol)
    W, r = sym.bandwidth, sym.rank
    if W == 0:
        return KernelResult(0, np.zeros((0, 0, r), dtype=complex), np.inf, np.zeros(0))

    L = _elimination_map(sym)
    info = kernel_dimension(L, tol)
    _, _, Vh = la.svd(L)
    null_vectors = np.conj(Vh[Vh.shape[0] - info.dim :])

    witnesses = np.zeros((info.dim, W, r), dtype=complex)
    for n, b_flat in enumerate(null_vectors):
        b = b_flat.reshape(W, r)
        for p in range(W):
            for col, s in enumerate(range(-W, 0)):
                if abs(s - p) <= W:
                    witnesses[n, p] += sym.coefficient(s - p).conj().T @ b[col]
        witnesses[n] = _normalise_witness(witnesses[n])

    logger.debug("exact_kernel_dim_banded: dim=%d gap=%.3e", info.dim, info.gap_ratio)
    return KernelResult(info.dim, witnesses, info.gap_ratio, info.singular_values)


def cokernel_dim_banded(
    sym: BandedSymbol,
    tol: float = DEFAULT_TOLERANCES["kernel"],
    unitarity_tol: float = 1e-6,
) -> int:
    """dim Ker(T_q^*), computed as the kernel of the Toeplitz operator of q^*."""
    return exact_kernel_dim_banded(sym.adjoint(), tol, unitarity_tol).dim


def square_truncation_kernel_dim(
    sym: BandedSymbol, n_blocks: int, tol: float = DEFAULT_TOLERANCES["kernel"]
) -> int:
    """Kernel dimension of a square section. Always even for a sewing symbol."""
    return kernel_dimension(build_truncation(sym, n_blocks).matrix, tol).dim


def svd_kernel_dim(
    sym: BandedSymbol,
    n_list: list[int],
    tol: float = DEFAULT_TOLERANCES["kernel"],
) -> tuple[int, dict]:
    """Kernel dimension from rectangular sections, cross-checking the exact count.

    Each section has domain modes [0, N - 1] and codomain modes [0, N - 1 + W], so every
    constraint touching the domain is kept. Square sections are not used: a square
    skew-symmetric matrix has even rank, which hides the Z2 index.

    Returns:
        (count, report) where report maps each N to its count and gap ratio.

    Raises:
        UnstableKernelError: The counts for the two largest N differ.
    """
    W = sym.bandwidth
    report = {}
    for n_blocks in sorted(n_list):
        if n_blocks <= 4 * W:
            raise ValueError(f"Truncation size {n_blocks} must exceed 4W = {4 * W}.")
        info = kernel_dimension(_block_toeplitz(sym, n_blocks + W, n_blocks), tol)
        report[n_blocks] = {"dim": info.dim, "gap_ratio": _finite(info.gap_ratio)}

    sizes = sorted(report)
    counts = {n: report[n]["dim"] for n in sizes}
    if len(sizes) >= 2 and counts[sizes[-1]] != counts[sizes[-2]]:
        raise UnstableKernelError(counts)
    return counts[sizes[-1]], report


def z2_index(
    sym: BandedSymbol,
    tol: float = DEFAULT_TOLERANCES["kernel"],
    unitarity_tol: float = 1e-6,
) -> int:
    """(-1)^dim Ker(T_q), after checking dim Ker(T_q^*) = dim Ker(T_q).

    Raises:
        KernelMismatchError: Kernel and cokernel dimensions differ.
    """
    dim = exact_kernel_dim_banded(sym, tol, unitarity_tol).dim
    co_dim = cokernel_dim_banded(sym, tol, unitarity_tol)
    if dim != co_dim:
        raise KernelMismatchError(dim, co_dim)
    return (-1) ** dim


def noether_index(sym: BandedSymbol, n_points: Optional[int] = None) -> int:
    """Fredholm index -winding(det q); zero for every sewing symbol."""
    if n_points is None:
        n_points = max(256, 16 * sym.bandwidth * sym.rank)
    n_points += n_points % 2
    samples = sym.evaluate(InvolutiveGrid1D(n_points).points)
    _, winding = unwrap_phase_1d(np.linalg.det(samples))
    return -winding


def fit_symbol(
    q: SewingField,
    bandwidth: int = DEFAULT_BANDWIDTH,
    fit_tol: float = DEFAULT_TOLERANCES["fit"],
) -> BandedSymbol:
    """Fit a banded symbol, doubling the bandwidth until it reproduces q within ``fit_tol``.

    The starting bandwidth is clipped to [1, N / 2 - 1] and grows up to N / 2 - 1.

    Raises:
        TruncationNotCertifiedError: No admissible bandwidth reaches ``fit_tol``.
    """
    max_bandwidth = q.grid.n_points // 2 - 1
    bandwidth = min(max(1, bandwidth), max_bandwidth)
    sym = fourier_coefficients(q, bandwidth, q.tol)
    while sym.truncation_residual > fit_tol and bandwidth < max_bandwidth:
        bandwidth = min(2 * bandwidth, max_bandwidth)
        sym = fourier_coefficients(q, bandwidth, q.tol)

    if sym.truncation_residual > fit_tol:
        raise TruncationNotCertifiedError(bandwidth, sym.truncation_residual, fit_tol)
    logger.info("fit_symbol: W=%d truncation=%.3e", bandwidth, sym.truncation_residual)
    return sym


def index_theorem_check(
    q: SewingField,
    bandwidth: int = DEFAULT_BANDWIDTH,
    tol: float = DEFAULT_TOLERANCES["kernel"],
    fit_tol: float = DEFAULT_TOLERANCES["fit"],
) -> IndexTheoremReport:
    """Compare the Pfaffian invariant of q with the Z2 index of its Toeplitz operator.

    ``bandwidth`` is the starting bandwidth of :func:`fit_symbol`. The kernels are
    computed on the fitted symbol with the strict unitarity check.
    """
    nu = teo_kane_1d(q)
    sym = fit_symbol(q, bandwidth, fit_tol)

    kernel = exact_kernel_dim_banded(sym, tol)
    ind = z2_index(sym, tol)
    return IndexTheoremReport(
        nu=nu,
        ind=ind,
        agree=nu == ind,
        kernel=kernel,
        bandwidth=sym.bandwidth,
        truncation_residual=sym.truncation_residual,
        noether=noether_index(sym),
    )
