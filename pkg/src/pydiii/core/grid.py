"""Uniform grids on the involutive circle and torus.

The involution is k -> -k (componentwise on the torus). Grid sizes are even so that the
fixed points 0 and pi are grid points exactly. Field samples are stored with the grid
axes first, e.g. shape (N, r, r) on the circle and (N1, N2, r, r) on the torus.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..exceptions import OddNError, TooSmallError, BadGridError


def _check_size(n_points: int) -> None:
    if n_points % 2 == 1:
        raise OddNError(n_points)
    if n_points < 4:
        raise TooSmallError(n_points)


@dataclass(frozen=True)
class InvolutiveGrid1D:
    """Uniform grid k_j = 2 pi j / N on the circle with k -> -k.

    Attributes:
        n_points (int): Number of grid points, even and at least 4.
    """

    n_points: int

    space = "circle"

    def __post_init__(self):
        _check_size(self.n_points)

    @property
    def shape(self) -> tuple[int]:
        return (self.n_points,)

    @property
    def size(self) -> int:
        return self.n_points

    @property
    def points(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_points) / self.n_points

    @property
    def pairing(self) -> np.ndarray:
        """Index of the involution partner of every grid index."""
        return (-np.arange(self.n_points)) % self.n_points

    @property
    def fixed_points(self) -> list[int]:
        return [0, self.n_points // 2]

    @property
    def half(self) -> int:
        """Index of k = pi."""
        return self.n_points // 2

    def reflect(self, values: np.ndarray) -> np.ndarray:
        """Values at the involution partner, ``out[j] = values[tau j]``."""
        return values[self.pairing]

    def index_pairs(self) -> list[tuple[int, int]]:
        """Each unordered involution pair (j, tau j) once, fixed points included."""
        return [(j, int(p)) for j, p in enumerate(self.pairing) if j <= p]


@dataclass(frozen=True)
class InvolutiveGrid2D:
    """Product grid on the torus with (k1, k2) -> (-k1, -k2).

    Attributes:
        n1 (int): Number of points along the first circle.
        n2 (int): Number of points along the second circle.
    """

    n1: int
    n2: int

    space = "torus"

    def __post_init__(self):
        _check_size(self.n1)
        _check_size(self.n2)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    @property
    def points(self) -> np.ndarray:
        """Array of shape (n1, n2, 2) holding (k1, k2)."""
        k1 = 2 * np.pi * np.arange(self.n1) / self.n1
        k2 = 2 * np.pi * np.arange(self.n2) / self.n2
        return np.stack(np.meshgrid(k1, k2, indexing="ij"), axis=-1)

    def axis_grid(self, axis: int) -> InvolutiveGrid1D:
        """The circle grid along coordinate ``axis`` (1 or 2)."""
        if axis == 1:
            return InvolutiveGrid1D(self.n1)
        if axis == 2:
            return InvolutiveGrid1D(self.n2)
        raise BadGridError(f"Axis must be 1 or 2, received {axis}.")

    def pair(self, index: tuple[int, int]) -> tuple[int, int]:
        j1, j2 = index
        return ((-j1) % self.n1, (-j2) % self.n2)

    @property
    def pairing(self) -> tuple[np.ndarray, np.ndarray]:
        """Per axis partner indices; the torus involution acts componentwise."""
        return self.axis_grid(1).pairing, self.axis_grid(2).pairing

    @property
    def fixed_points(self) -> list[tuple[int, int]]:
        """Indices of (0, 0), (pi, 0), (0, pi), (pi, pi) in that order."""
        h1, h2 = self.n1 // 2, self.n2 // 2
        return [(0, 0), (h1, 0), (0, h2), (h1, h2)]

    def reflect(self, values: np.ndarray) -> np.ndarray:
        p1, p2 = self.pairing
        return values[p1][:, p2]

    def circle_indices(self, axis: int) -> list[tuple[int, int]]:
        """Grid indices of the coordinate circle through (0, 0) along ``axis``."""
        if axis == 1:
            return [(j, 0) for j in range(self.n1)]
        if axis == 2:
            return [(0, j) for j in range(self.n2)]
        raise BadGridError(f"Axis must be 1 or 2, received {axis}.")

    def restrict(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Samples of ``values`` along the coordinate circle through (0, 0)."""
        if axis == 1:
            return values[:, 0]
        if axis == 2:
            return values[0, :]
        raise BadGridError(f"Axis must be 1 or 2, received {axis}.")


Grid = Union[InvolutiveGrid1D, InvolutiveGrid2D]


def circle_grid(n_points: int) -> InvolutiveGrid1D:
    """Create a circle grid.

    Raises:
        OddNError: ``n_points`` is odd.
        TooSmallError: ``n_points`` is smaller than 4.
    """
    return InvolutiveGrid1D(int(n_points))


def torus_grid(n1: int, n2: int) -> InvolutiveGrid2D:
    """Create a torus grid with ``n1 x n2`` points."""
    return InvolutiveGrid2D(int(n1), int(n2))


def restrict_to_circle(field, axis: int):
    """Restrict a torus field to the coordinate circle through (0, 0).

    Args:
        field: Any field object with ``grid``, ``samples`` and ``with_samples``, e.g. a
            SewingField or HamiltonianField on a torus grid.
        axis (int): 1 for the circle (k, 0), 2 for the circle (0, k).

    Returns:
        A field of the same type on the matching circle grid.
    """
    grid = field.grid
    if not isinstance(grid, InvolutiveGrid2D):
        raise BadGridError("restrict_to_circle expects a field on a torus grid.")
    return field.with_samples(grid.axis_grid(axis), grid.restrict(field.samples, axis))
