"""Grid-sampled matrix fields.

Fields are immutable containers of a grid and a stack of samples. Structural shape
checks happen on construction; the symmetry conditions are checked by the functions in
:mod:`pydiii.core.sewing` and :mod:`pydiii.core.symmetry`.
"""

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, InvolutiveGrid1D, InvolutiveGrid2D
from ..exceptions import (
    DimensionMismatchError,
    GridMismatchError,
    OddSewingRankError,
    OddTotalDimensionError,
)


def _check_samples(grid: Grid, samples: np.ndarray) -> int:
    expected = grid.shape
    if samples.ndim != len(expected) + 2 or samples.shape[: len(expected)] != expected:
        raise DimensionMismatchError(
            f"Samples of shape {samples.shape} do not match grid of shape {expected}."
        )
    if samples.shape[-1] != samples.shape[-2]:
        raise DimensionMismatchError(
            f"Samples must be square matrices, received {samples.shape[-2:]}."
        )
    return samples.shape[-1]


@dataclass(frozen=True)
class SewingField:
    """Unitary sewing matrices q(x) on an involutive grid.

    Attributes:
        grid (Grid): Circle or torus grid.
        samples (np.ndarray): Array of shape ``grid.shape + (rank, rank)``.
        tol (float): Tolerance used by the residual checks.
    """

    grid: Grid
    samples: np.ndarray = field(repr=False)
    tol: float = 1e-8

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        object.__setattr__(self, "samples", samples)
        rank = _check_samples(self.grid, samples)
        if rank % 2 == 1:
            raise OddSewingRankError(rank)

    @property
    def rank(self) -> int:
        return self.samples.shape[-1]

    @property
    def space(self) -> str:
        return self.grid.space

    def __getitem__(self, index) -> np.ndarray:
        return self.samples[index]

    def reflected(self) -> np.ndarray:
        """Samples evaluated at the involution partner of every grid point."""
        return self.grid.reflect(self.samples)

    def fixed_point_samples(self) -> list[np.ndarray]:
        return [self.samples[idx] for idx in self.grid.fixed_points]

    def with_samples(self, grid: Grid, samples: np.ndarray) -> "SewingField":
        return SewingField(grid, samples, self.tol)


@dataclass(frozen=True)
class HamiltonianField:
    """Hermitian invertible Hamiltonians H(x) on an involutive grid.

    Attributes:
        grid (Grid): Circle or torus grid.
        samples (np.ndarray): Array of shape ``grid.shape + (2m, 2m)``.
    """

    grid: Grid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        object.__setattr__(self, "samples", samples)
        dim = _check_samples(self.grid, samples)
        if dim % 2 == 1:
            raise OddTotalDimensionError(dim)

    @property
    def dim(self) -> int:
        return self.samples.shape[-1]

    @property
    def space(self) -> str:
        return self.grid.space

    @property
    def gap(self) -> float:
        """Smallest absolute eigenvalue over all samples."""
        herm = 0.5 * (self.samples + np.conj(np.swapaxes(self.samples, -1, -2)))
        return float(np.min(np.abs(np.linalg.eigvalsh(herm))))

    def reflected(self) -> np.ndarray:
        return self.grid.reflect(self.samples)

    def with_samples(self, grid: Grid, samples: np.ndarray) -> "HamiltonianField":
        return HamiltonianField(grid, samples)


@dataclass(frozen=True)
class PhaseField:
    """Continuous phase theta(x) of a unimodular scalar field.

    Attributes:
        grid (Grid): Grid the phase is sampled on.
        theta (np.ndarray): Phase per grid point.
        base_value (float): Phase at the base point, in [0, 2 pi).
    """

    grid: Grid
    theta: np.ndarray = field(repr=False)
    base_value: float = 0.0

    def values(self) -> np.ndarray:
        """The unimodular field exp(i theta)."""
        return np.exp(1j * self.theta)


def check_same_grid(a, b) -> None:
    """Raise if two fields live on different grids."""
    if a.grid != b.grid:
        raise GridMismatchError(a.grid.shape, b.grid.shape)


def grid_for_samples(samples: np.ndarray, space: str) -> Grid:
    """Build the grid matching the leading axes of a sample stack."""
    if space == "circle":
        return InvolutiveGrid1D(samples.shape[0])
    return InvolutiveGrid2D(samples.shape[0], samples.shape[1])


@dataclass
class Residuals:
    """Named maximum residuals with a pass/fail verdict.

    Attributes:
        values (dict[str, float]): Residual name to maximum over the grid.
        tol (float): Pass threshold applied to every residual.
        locations (dict[str, object]): Grid index of the worst sample per residual.
    """

    values: dict[str, float]
    tol: float
    locations: dict[str, object] = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    @property
    def passed(self) -> bool:
        return all(val <= self.tol for val in self.values.values())

    def failed(self) -> list[str]:
        return [name for name, val in self.values.items() if val > self.tol]

    def to_dict(self) -> dict:
        return {name: float(val) for name, val in self.values.items()}


def max_with_location(norms: np.ndarray) -> tuple[float, object]:
    """Maximum of a per grid point array of norms and its grid index."""
    if norms.size == 0:
        return 0.0, None
    flat_idx = int(np.argmax(norms))
    index = np.unravel_index(flat_idx, norms.shape)
    index = int(index[0]) if len(index) == 1 else tuple(int(i) for i in index)
    return float(norms.ravel()[flat_idx]), index


def pointwise_norms(A: np.ndarray) -> np.ndarray:
    """Spectral norm of every matrix in a stack."""
    return np.linalg.norm(A, ord=2, axis=(-2, -1))
