"""Analytic sewing matrix models and random generators.

Every model is sampled exactly from its closed form on a circle or torus grid. Grids may
be given as grid objects, as a size (circle) or as a pair of sizes (torus); ``None``
selects the defaults of :mod:`pydiii.config`.
"""

import logging
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import unitary_group

from .config import DEFAULT_GRID, DEFAULT_TOLERANCES
from .core.fields import SewingField, HamiltonianField
from .core.grid import (
    Grid,
    InvolutiveGrid1D,
    InvolutiveGrid2D,
    circle_grid,
    torus_grid,
)
from .core.linalg import standard_symplectic
from .core.sewing import check_sewing
from .exceptions import UnknownModelError, InputError, BadGridError
from .results.config import MODEL_CONFIG

logger = logging.getLogger(__name__)

GridSpec = Union[Grid, int, Sequence[int], None]


def resolve_grid(grid: GridSpec, space: str) -> Grid:
    """Turn a grid specification into a grid on ``space``."""
    if isinstance(grid, (InvolutiveGrid1D, InvolutiveGrid2D)):
        if grid.space != space:
            raise BadGridError(f"Expected a {space} grid, received a {grid.space} grid.")
        return grid

    if grid is None:
        grid = DEFAULT_GRID[space]
    sizes = [int(grid)] if np.isscalar(grid) else [int(n) for n in grid]

    if space == "circle":
        if len(sizes) != 1:
            raise BadGridError(f"A circle grid takes one size, received {sizes}.")
        return circle_grid(sizes[0])
    if len(sizes) == 1:
        sizes = sizes * 2
    if len(sizes) != 2:
        raise BadGridError(f"A torus grid takes two sizes, received {sizes}.")
    return torus_grid(*sizes)


def _constant_field(grid: Grid, matrix: np.ndarray) -> np.ndarray:
    return np.broadcast_to(matrix, grid.shape + matrix.shape).copy()


def _verified(q: SewingField) -> SewingField:
    checks = check_sewing(q, DEFAULT_TOLERANCES["field"])
    if not checks.passed:
        logger.warning("Model field fails its sewing checks: %s", checks.to_dict())
    return q


def q_minus_matrix(k: np.ndarray, n: int = 1) -> np.ndarray:
    """q_minus(k) = [[0, e^ik], [-e^-ik, 0]] + Q_{2n-2}, shape ``k.shape + (2n, 2n)``."""
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape + (2 * n, 2 * n), dtype=complex)
    out[..., 0, 1] = np.exp(1j * k)
    out[..., 1, 0] = -np.exp(-1j * k)
    if n > 1:
        out[..., 2:, 2:] = standard_symplectic(n - 1)
    return out


def q_const(n: int = 1, grid: GridSpec = None, space: str = "circle") -> SewingField:
    """Constant field Q of size 2n."""
    if n < 1:
        raise InputError(f"Half rank must be at least 1, received {n}.")
    grid = resolve_grid(grid, space)
    return _verified(SewingField(grid, _constant_field(grid, standard_symplectic(n))))


def q_minus(n: int = 1, grid: GridSpec = None) -> SewingField:
    """The nontrivial circle model with Pf q(0) = -Pf q(pi) and det q = 1."""
    if n < 1:
        raise InputError(f"Half rank must be at least 1, received {n}.")
    grid = resolve_grid(grid, "circle")
    return _verified(SewingField(grid, q_minus_matrix(grid.points, n)))


def q_weak(axis: int, n: int = 1, grid: GridSpec = None) -> SewingField:
    """q_minus pulled back along the projection of the torus onto coordinate ``axis``."""
    if axis not in (1, 2):
        raise BadGridError(f"Axis must be 1 or 2, received {axis}.")
    grid = resolve_grid(grid, "torus")
    k = grid.points[..., axis - 1]
    return _verified(SewingField(grid, q_minus_matrix(k, n)))


def q_rot_matrix(k: np.ndarray) -> np.ndarray:
    """[[sin k, -cos k], [cos k, sin k]]."""
    k = np.asarray(k, dtype=float)
    out = np.empty(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.sin(k)
    out[..., 0, 1] = -np.cos(k)
    out[..., 1, 0] = np.cos(k)
    out[..., 1, 1] = np.sin(k)
    return out


def q_rot(n: int = 1, grid: GridSpec = None) -> SewingField:
    """Rotated rank 2 sewing matrix, weakly isomorphic to Q but with nu = -1."""
    if n != 1:
        raise InputError("q1_rot is only defined with rank 2.")
    grid = resolve_grid(grid, "circle")
    return _verified(SewingField(grid, q_rot_matrix(grid.points)))


def q_sphere_basic(points: np.ndarray) -> np.ndarray:
    """Sewing matrix on the sphere with involution (x0, x1, x2) -> (x0, -x1, -x2).

    q1(x) = [[i x1, -x0 + i x2], [x0 + i x2, -i x1]]. It is unitary with det 1 on the
    unit sphere and takes the values Q at (1, 0, 0) and -Q at (-1, 0, 0).

    Args:
        points (np.ndarray): Points on the unit sphere, shape (..., 3).

    Returns:
        np.ndarray: Samples of shape (..., 2, 2).
    """
    points = np.asarray(points, dtype=float)
    x0, x1, x2 = points[..., 0], points[..., 1], points[..., 2]
    out = np.empty(points.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = 1j * x1
    out[..., 0, 1] = -x0 + 1j * x2
    out[..., 1, 0] = x0 + 1j * x2
    out[..., 1, 1] = -1j * x1
    return out


def pi0_map(k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    """Equivariant map from the torus to the sphere.

    (0, 0), (pi, 0) and (0, pi) go to (1, 0, 0) and (pi, pi) goes to (-1, 0, 0). With
    s = (1 - cos k1)(1 - cos k2) / 4, x0 = 1 - 2s and (x1, x2) is proportional to
    (sin k1 (1 - cos k2), sin k2 (1 - cos k1)), scaled onto the unit sphere.

    Returns:
        np.ndarray: Points of shape ``k1.shape + (3,)``.
    """
    k1, k2 = np.broadcast_arrays(np.asarray(k1, float), np.asarray(k2, float))
    s = (1 - np.cos(k1)) * (1 - np.cos(k2)) / 4
    x0 = 1 - 2 * s
    t1 = np.sin(k1) * (1 - np.cos(k2))
    t2 = np.sin(k2) * (1 - np.cos(k1))
    t_norm = np.hypot(t1, t2)
    radial = np.sqrt(np.clip(4 * s * (1 - s), 0.0, None))
    scale = np.divide(radial, t_norm, out=np.zeros_like(t_norm), where=t_norm > 0)
    return np.stack([x0, scale * t1, scale * t2], axis=-1)


def q_strong_2d(n: int = 1, grid: GridSpec = None) -> SewingField:
    """The sphere model pulled back to the torus, q_s = q1 o pi0."""
    if n != 1:
        raise InputError("q_s is only defined with rank 2.")
    grid = resolve_grid(grid, "torus")
    k = grid.points
    return _verified(SewingField(grid, q_sphere_basic(pi0_map(k[..., 0], k[..., 1]))))


def appendix_b_fixtures(grid: GridSpec = None) -> dict[str, np.ndarray]:
    """Sewing matrices and intertwiners of the strong versus weak isomorphism example.

    Returns:
        dict: ``q0`` = Q, ``q0_prime`` = -Q, ``phi0`` = diag(1, -1) with
        q0' = phi0^t q0 phi0 strongly, and ``q1_rot`` with the intertwiner ``phi1``
        satisfying q1_rot(k) = phi1(-k)^t Q phi1(k) but phi1(-k) != phi1(k). The sewing
        fields are SewingField objects, the intertwiners sample arrays.
    """
    grid = resolve_grid(grid, "circle")
    k = grid.points
    Q = standard_symplectic(1)

    half = k / 2
    phi1 = np.empty(k.shape + (2, 2), dtype=complex)
    phi1[..., 0, 0] = np.sin(half)
    phi1[..., 0, 1] = -np.cos(half)
    phi1[..., 1, 0] = np.cos(half)
    phi1[..., 1, 1] = np.sin(half)
    phi1 *= np.exp(1j * half)[..., None, None]

    return {
        "q0": SewingField(grid, _constant_field(grid, Q)),
        "q0_prime": SewingField(grid, _constant_field(grid, -Q)),
        "phi0": _constant_field(grid, np.diag([1.0, -1.0]).astype(complex)),
        "q1_rot": SewingField(grid, q_rot_matrix(k)),
        "phi1": phi1,
    }


def build_model(name: str, grid: GridSpec = None, n: int = 1) -> SewingField:
    """Build a registered model by name.

    Raises:
        UnknownModelError: ``name`` is not in ``MODEL_CONFIG``.
    """
    if name not in MODEL_CONFIG:
        raise UnknownModelError(name, list(MODEL_CONFIG))
    conf = MODEL_CONFIG[name]
    if n != 1 and not conf["variable_rank"]:
        raise InputError(f"Model {name} is only defined with rank {conf['rank']}.")

    builder = globals()[conf["builder"]]
    return builder(n=n, grid=resolve_grid(grid, conf["space"]), **conf["builder_args"])


# ---- Random generators ----


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _random_hermitian(rng: np.random.Generator, rank: int) -> np.ndarray:
    A = rng.normal(size=(rank, rank)) + 1j * rng.normal(size=(rank, rank))
    return 0.5 * (A + A.conj().T)


def hermitian_trig_field(
    grid: Grid, rank: int, seed=None, bandwidth: int = 1, even: bool = False
) -> np.ndarray:
    """Random Hermitian trigonometric polynomial field A(k) on a grid.

    With ``even`` the field satisfies A(-k) = A(k).
    """
    rng = _rng(seed)
    k = grid.points
    k = k[..., None] if k.ndim == 1 else k
    A = np.broadcast_to(_random_hermitian(rng, rank), grid.shape + (rank, rank)).copy()
    for axis in range(k.shape[-1]):
        for m in range(1, bandwidth + 1):
            if even:
                coeff = _random_hermitian(rng, rank)
                A += np.multiply.outer(2 * np.cos(m * k[..., axis]), coeff)
            else:
                re, im = rng.normal(size=(2, rank, rank))
                coeff = re + 1j * im
                term = np.multiply.outer(np.exp(1j * m * k[..., axis]), coeff)
                A += term + np.conj(np.swapaxes(term, -1, -2))
    return A / np.sqrt(rank * (2 * bandwidth + 1))


def _hermitian_exp(A: np.ndarray, factor: complex) -> np.ndarray:
    """exp(factor * A) for a stack of Hermitian matrices."""
    w, v = np.linalg.eigh(A)
    return (v * np.exp(factor * w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def random_intertwiner(
    grid: GridSpec,
    rank: int,
    seed=None,
    bandwidth: int = 1,
    tau_invariant: bool = False,
    space: str = "circle",
) -> np.ndarray:
    """Random unitary field h for congruences q -> h(tau x)^t q h(x).

    The default is a trigonometric polynomial h = V1 D(k) V2 with constant unitaries
    V1, V2 and D = diag(e^{i m_j k}), m_j in [-bandwidth, bandwidth]; its det winds
    sum(m_j) times. With ``tau_invariant`` the field is V1 exp(i A(k)) with A even, so
    h(-k) = h(k).
    """
    rng = _rng(seed)
    grid = resolve_grid(grid, space)
    V1 = unitary_group.rvs(rank, random_state=rng)
    if tau_invariant:
        A = hermitian_trig_field(grid, rank, rng, bandwidth, even=True)
        return V1 @ _hermitian_exp(A, 1j)

    V2 = unitary_group.rvs(rank, random_state=rng)
    k = grid.points
    k = k[..., None] if k.ndim == 1 else k
    degrees = rng.integers(-bandwidth, bandwidth + 1, size=(k.shape[-1], rank))
    phases = np.exp(1j * np.tensordot(k, degrees, axes=([-1], [0])))
    D = phases[..., :, None] * np.eye(rank)
    return V1 @ D @ V2


def random_sewing_deformation(
    q: SewingField, epsilon: float = 0.1, seed=None, bandwidth: int = 2
) -> SewingField:
    """Small sewing preserving deformation h(tau x)^t q h(x), h = exp(i eps A(x))."""
    A = hermitian_trig_field(q.grid, q.rank, seed, bandwidth)
    h = _hermitian_exp(A, 1j * epsilon)
    h_reflected = q.grid.reflect(h)
    return q.with_samples(q.grid, np.swapaxes(h_reflected, -1, -2) @ q.samples @ h)


def nonflat_hamiltonian(
    q: SewingField, strength: float = 0.3, seed=None, bandwidth: int = 1
) -> HamiltonianField:
    """Gapped non-flat class DIII field H = [[0, b^*], [b, 0]].

    b(x) = M(tau x)^t q(x) M(x) with the positive definite M = exp(strength A(x)). Its
    flattening gives back a sewing field with the invariants of q.
    """
    A = hermitian_trig_field(q.grid, q.rank, seed, bandwidth)
    M = _hermitian_exp(A, strength)
    b = np.swapaxes(q.grid.reflect(M), -1, -2) @ q.samples @ M
    zero = np.zeros_like(b)
    top = np.concatenate([zero, np.conj(np.swapaxes(b, -1, -2))], axis=-1)
    bottom = np.concatenate([b, zero], axis=-1)
    return HamiltonianField(q.grid, np.concatenate([top, bottom], axis=-2))


def random_equivariant_map(
    grid: GridSpec, seed=None, max_degree: int = 3, n_terms: int = 3
) -> tuple[np.ndarray, int]:
    """Random r with r(-k) = conj(r(k)) and its degree.

    r(k) = +-exp(i f(k)) e^{imk} with f an odd sine series, so r(0) = +-1 and
    r(pi) = +-(-1)^m.
    """
    rng = _rng(seed)
    grid = resolve_grid(grid, "circle")
    k = grid.points
    degree = int(rng.integers(-max_degree, max_degree + 1))
    amplitudes = rng.uniform(-0.5, 0.5, size=n_terms)
    f = sum(a * np.sin((j + 1) * k) for j, a in enumerate(amplitudes))
    sign = rng.choice([-1.0, 1.0])
    return sign * np.exp(1j * (f + degree * k)), degree
