import pytest
import numpy as np

from pydiii.core.grid import circle_grid, torus_grid
from pydiii.core.sewing import (
    check_sewing,
    det_field,
    unwrap_phase_1d,
    unwrap_phase_2d,
    sqrt_branch_1d,
    sqrt_branch_2d,
    equivariant_degree_parity,
    snap_fixed_points,
)
from pydiii.exceptions import (
    GridTooCoarseError,
    BadStartValueError,
    NonzeroWindingError,
    InconsistentUnwrapError,
    NotEquivariantError,
)
from pydiii.models import random_equivariant_map

from test.utils import assert_arrays_close


class TestCheckSewing:
    def test_models_pass(self, q_plus, q_minus_1, q_minus_3, torus_models):
        for q in [q_plus, q_minus_1, q_minus_3, *torus_models.values()]:
            checks = check_sewing(q, 1e-12)
            assert checks.passed, checks.to_dict()

    def test_corrupted_sample_is_located(self, q_minus_1):
        samples = q_minus_1.samples.copy()
        samples[5] = samples[5] @ np.diag([1.0, np.exp(0.3j)])
        corrupted = q_minus_1.with_samples(q_minus_1.grid, samples)

        checks = check_sewing(corrupted)
        assert checks.failed() == ["sewing"]
        assert checks.locations["sewing"] in (5, 251)

    def test_fixed_point_skew(self, q_plus):
        samples = q_plus.samples.copy()
        samples[0] = np.eye(2)
        checks = check_sewing(q_plus.with_samples(q_plus.grid, samples))
        assert "fixed_point_skew" in checks.failed()
        assert checks.locations["fixed_point_skew"] == 0


class TestDetField:
    def test_unit_determinant(self, q_minus_3, torus_models):
        for q in [q_minus_3, torus_models["q_s"]]:
            det = det_field(q)
            assert_arrays_close(np.ones(q.grid.shape), det.values, atol=1e-12)
            assert det.invariance_residual < 1e-12


class TestUnwrap:
    @pytest.mark.parametrize("degree", [-2, 0, 1, 3])
    def test_winding_1d(self, degree):
        k = circle_grid(64).points
        phase, winding = unwrap_phase_1d(np.exp(1j * degree * k))
        assert winding == degree
        assert_arrays_close(np.exp(1j * degree * k), phase.values(), atol=1e-12)

    def test_too_coarse(self):
        u = (-1.0) ** np.arange(32) + 0j
        with pytest.raises(GridTooCoarseError) as excinfo:
            unwrap_phase_1d(u)
        assert excinfo.value.index == 0

    def test_large_increments_below_pi(self):
        k = circle_grid(256).points
        phase, winding = unwrap_phase_1d(np.exp(100j * k))
        assert winding == 100
        assert_arrays_close(np.exp(100j * k), phase.values(), atol=1e-9)

    def test_custom_step_limit(self):
        k = circle_grid(32).points
        with pytest.raises(GridTooCoarseError):
            unwrap_phase_1d(np.exp(10j * k), max_step=np.pi / 2)

    def test_winding_2d(self):
        k = torus_grid(32, 16).points
        u = np.exp(1j * (k[..., 0] - 2 * k[..., 1]))
        phase, windings = unwrap_phase_2d(u)
        assert windings == (1, -2)
        assert_arrays_close(u, phase.values(), atol=1e-12)

    def test_vortex_detected(self):
        j1, j2 = np.meshgrid(np.arange(4), np.arange(4), indexing="ij")
        u = np.exp(1j * np.arctan2(j2 - 1.5, j1 - 1.5))
        with pytest.raises(InconsistentUnwrapError):
            unwrap_phase_2d(u, max_step=np.pi)


class TestSqrtBranch:
    def test_circle_branch(self):
        k = circle_grid(128).points
        s = sqrt_branch_1d(np.exp(2j * k), 1.0)
        assert_arrays_close(np.exp(1j * k), s, atol=1e-12)

    def test_fixed_points_snapped(self):
        k = circle_grid(128).points
        s = sqrt_branch_1d(np.exp(2j * k), -1.0)
        assert s[0] == -1
        assert s[64] == 1

    def test_bad_start(self):
        with pytest.raises(BadStartValueError):
            sqrt_branch_1d(np.ones(16), 1j)

    def test_torus_branch(self):
        k = torus_grid(16, 16).points
        u = np.exp(2j * (np.sin(k[..., 0]) * np.sin(k[..., 1])))
        s, windings = sqrt_branch_2d(u, 1.0)
        assert windings == (0, 0)
        assert_arrays_close(u, s**2, atol=1e-12)

    def test_torus_winding_rejected(self):
        k = torus_grid(16, 16).points
        with pytest.raises(NonzeroWindingError):
            sqrt_branch_2d(np.exp(1j * k[..., 0]), 1.0)

    def test_snap(self):
        grid = circle_grid(8)
        values = np.full(8, 0.5 + 0j)
        values[0] = 1j + 1e-9
        values[4] = -1 - 1e-3
        snapped = snap_fixed_points(values, grid, 1e-6)
        assert snapped[0] == 1j
        assert snapped[4] == pytest.approx(-1 - 1e-3)
        assert snapped[1] == 0.5


class TestEquivariantDegree:
    def test_random_maps(self):
        rng = np.random.default_rng(9)
        for trial in range(100):
            r, degree = random_equivariant_map(256, seed=rng)
            parity = equivariant_degree_parity(r)
            assert parity == (-1) ** (degree % 2), f"trial {trial}"
            _, winding = unwrap_phase_1d(r)
            assert winding == degree

    def test_not_equivariant(self):
        k = circle_grid(64).points
        with pytest.raises(NotEquivariantError):
            equivariant_degree_parity(np.exp(1j * (k + 0.3)))
