import pytest
import numpy as np

from pydiii.core.grid import InvolutiveGrid1D, InvolutiveGrid2D, circle_grid
from pydiii.core.linalg import standard_symplectic, unitarity_residual
from pydiii.core.sewing import check_sewing
from pydiii.exceptions import BadGridError, InputError, UnknownModelError
from pydiii.models import (
    resolve_grid,
    build_model,
    q_const,
    q_minus,
    q_rot,
    q_sphere_basic,
    pi0_map,
    random_intertwiner,
    random_sewing_deformation,
    nonflat_hamiltonian,
)
from pydiii.results.config import MODEL_CONFIG

from test.utils import assert_arrays_close


class TestResolveGrid:
    def test_defaults(self):
        assert resolve_grid(None, "circle") == InvolutiveGrid1D(256)
        assert resolve_grid(None, "torus") == InvolutiveGrid2D(64, 64)

    def test_sizes(self):
        assert resolve_grid(32, "circle") == InvolutiveGrid1D(32)
        assert resolve_grid(16, "torus") == InvolutiveGrid2D(16, 16)
        assert resolve_grid([16, 8], "torus") == InvolutiveGrid2D(16, 8)

    def test_space_mismatch(self):
        with pytest.raises(BadGridError):
            resolve_grid(circle_grid(16), "torus")
        with pytest.raises(BadGridError):
            resolve_grid([16, 16], "circle")


class TestModelZoo:
    @pytest.mark.parametrize("name", list(MODEL_CONFIG))
    def test_models_are_sewing_fields(self, name):
        conf = MODEL_CONFIG[name]
        q = build_model(name, grid=16)
        assert q.space == conf["space"]
        assert q.rank == conf["rank"]
        checks = check_sewing(q, 1e-12)
        assert checks.passed, checks.to_dict()

    @pytest.mark.parametrize("name", ["q_plus", "q_minus", "q_w1"])
    def test_variable_rank(self, name):
        assert build_model(name, grid=16, n=3).rank == 6

    def test_fixed_rank(self):
        with pytest.raises(InputError):
            build_model("q_s", n=2)
        with pytest.raises(InputError):
            q_rot(n=2)

    def test_unknown_model(self):
        with pytest.raises(UnknownModelError) as excinfo:
            build_model("q_nonsense")
        assert excinfo.value.exit_code == 2

    def test_bad_half_rank(self):
        with pytest.raises(InputError):
            q_const(n=0)

    def test_q_minus_values(self):
        q = q_minus(n=2, grid=8)
        expected = np.zeros((4, 4))
        expected[0, 1], expected[1, 0] = 1, -1
        expected[2:, 2:] = standard_symplectic(1)
        assert_arrays_close(expected, q[0])
        expected[0, 1], expected[1, 0] = -1, 1
        assert_arrays_close(expected, q[4], atol=1e-12)


class TestSphereModel:
    def test_poles(self):
        Q = standard_symplectic(1)
        assert_arrays_close(Q, q_sphere_basic(np.array([1.0, 0.0, 0.0])))
        assert_arrays_close(-Q, q_sphere_basic(np.array([-1.0, 0.0, 0.0])))

    def test_unitary_with_unit_det(self):
        rng = np.random.default_rng(91)
        x = rng.normal(size=(200, 3))
        x /= np.linalg.norm(x, axis=-1, keepdims=True)
        q = q_sphere_basic(x)
        assert unitarity_residual(q) < 1e-12
        assert_arrays_close(np.ones(200), np.linalg.det(q), atol=1e-12)

    def test_pi0_fixed_points(self):
        k1 = np.array([0.0, np.pi, 0.0, np.pi])
        k2 = np.array([0.0, 0.0, np.pi, np.pi])
        expected = [[1, 0, 0], [1, 0, 0], [1, 0, 0], [-1, 0, 0]]
        assert_arrays_close(expected, pi0_map(k1, k2), atol=1e-12)

    def test_pi0_equivariant_and_on_sphere(self):
        rng = np.random.default_rng(92)
        k1, k2 = rng.uniform(0, 2 * np.pi, size=(2, 500))
        x = pi0_map(k1, k2)
        x_reflected = pi0_map(-k1, -k2)
        assert_arrays_close(np.ones(500), np.linalg.norm(x, axis=-1), atol=1e-12)
        assert_arrays_close(x * np.array([1, -1, -1]), x_reflected, atol=1e-12)


class TestRandomGenerators:
    def test_intertwiner_is_unitary(self):
        h = random_intertwiner(64, 4, seed=1, bandwidth=2)
        assert h.shape == (64, 4, 4)
        assert unitarity_residual(h) < 1e-12

    def test_tau_invariant_intertwiner(self):
        h = random_intertwiner(64, 2, seed=2, tau_invariant=True)
        assert_arrays_close(h, circle_grid(64).reflect(h), atol=1e-12)

    def test_torus_intertwiner(self):
        h = random_intertwiner(16, 2, seed=3, space="torus")
        assert h.shape == (16, 16, 2, 2)

    def test_deformation_keeps_sewing(self, q_minus_1):
        q = random_sewing_deformation(q_minus_1, 0.5, seed=4)
        assert check_sewing(q, 1e-10).passed

    def test_seeded_generators_are_reproducible(self, q_plus):
        a = random_sewing_deformation(q_plus, seed=5).samples
        b = random_sewing_deformation(q_plus, seed=5).samples
        assert_arrays_close(a, b, rtol=0, atol=0)

    def test_nonflat_shape(self, q_plus):
        H = nonflat_hamiltonian(q_plus, seed=6)
        assert H.samples.shape == (256, 4, 4)
