import pytest
import numpy as np

from pydiii.core.linalg import (
    pfaffian,
    pfaffian_with_residual,
    kernel_dimension,
    polar_flatten,
    round_to_sign,
    skew_takagi,
    standard_symplectic,
    unitarity_residual,
)
from pydiii.exceptions import (
    OddDimensionError,
    NotSkewSymmetricError,
    NotSkewUnitaryError,
    NotHermitianError,
    SingularInputError,
    NotSignLikeError,
)

from test.utils import (
    assert_arrays_close,
    random_complex,
    random_skew,
    random_skew_unitary,
)


class TestPfaffian:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_standard_symplectic(self, n):
        expected = (-1) ** (n * (n + 1) // 2)
        assert pfaffian(standard_symplectic(n)) == pytest.approx(expected)

    def test_two_by_two_convention(self):
        a = 0.3 - 1.7j
        assert pfaffian(np.array([[0, a], [-a, 0]])) == pytest.approx(a)

    def test_empty_matrix(self):
        assert pfaffian(np.zeros((0, 0))) == 1

    def test_square_is_determinant(self):
        rng = np.random.default_rng(11)
        for trial in range(100):
            size = 2 * rng.integers(1, 7)
            A = random_skew(rng, size)
            pf = pfaffian(A)
            det = np.linalg.det(A)
            assert np.isclose(pf**2, det, rtol=1e-9, atol=0), f"trial {trial}"

    def test_congruence(self):
        rng = np.random.default_rng(12)
        for trial in range(100):
            size = 2 * rng.integers(1, 7)
            A = random_skew(rng, size)
            B = random_complex(rng, (size, size))
            lhs = pfaffian(B @ A @ B.T)
            rhs = np.linalg.det(B) * pfaffian(A)
            assert np.isclose(lhs, rhs, rtol=1e-9, atol=0), f"trial {trial}"

    def test_odd_dimension(self):
        with pytest.raises(OddDimensionError):
            pfaffian(np.zeros((3, 3)))

    def test_not_skew(self):
        with pytest.raises(NotSkewSymmetricError):
            pfaffian(np.eye(2))

    def test_residual_reported(self):
        A = standard_symplectic(1)
        A[0, 0] = 1e-10
        pf, residual = pfaffian_with_residual(A)
        assert pf == pytest.approx(-1)
        assert residual == pytest.approx(2e-10)


class TestKernelDimension:
    def test_small_singular_values(self):
        info = kernel_dimension(np.diag([1.0, 1e-12, 0.0]))
        assert info.dim == 2
        assert info.gap_ratio > 1e10

    def test_full_rank(self):
        info = kernel_dimension(np.eye(3))
        assert info.dim == 0
        assert np.isinf(info.gap_ratio)

    def test_wide_matrix_structural_kernel(self):
        rng = np.random.default_rng(3)
        info = kernel_dimension(random_complex(rng, (2, 5)))
        assert info.dim == 3


class TestPolarFlatten:
    def test_diagonal(self):
        assert_arrays_close(np.diag([1.0, -1.0]), polar_flatten(np.diag([2.0, -3.0])))

    def test_involution(self):
        rng = np.random.default_rng(4)
        A = random_complex(rng, (4, 4))
        H = A + A.conj().T
        F = polar_flatten(H)
        assert_arrays_close(np.eye(4), F @ F, atol=1e-12)
        assert_arrays_close(F, F.conj().T, atol=1e-12)

    def test_singular(self):
        with pytest.raises(SingularInputError):
            polar_flatten(np.diag([1.0, 0.0]))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitianError):
            polar_flatten(np.array([[1.0, 1.0], [0.0, -1.0]]))


class TestRoundToSign:
    @pytest.mark.parametrize(
        "value, expected", [(1.0, 1), (-1.0, -1), (1 - 1e-9j, 1), (-0.9999999, -1)]
    )
    def test_rounding(self, value, expected):
        sign, deviation = round_to_sign(value)
        assert sign == expected
        assert deviation < 1e-6

    def test_not_sign_like(self):
        with pytest.raises(NotSignLikeError):
            round_to_sign(1j)


class TestSkewTakagi:
    def test_random_skew_unitaries(self):
        rng = np.random.default_rng(5)
        for trial in range(50):
            size = 2 * rng.integers(1, 7)
            S = random_skew_unitary(rng, size)
            U = skew_takagi(S)
            Q = standard_symplectic(size // 2)
            assert np.linalg.norm(U.T @ Q @ U - S, ord=2) <= 1e-9, f"trial {trial}"
            assert unitarity_residual(U) <= 1e-9

    def test_standard_symplectic_input(self):
        Q = standard_symplectic(2)
        U = skew_takagi(Q)
        assert_arrays_close(Q, U.T @ Q @ U, atol=1e-12)

    def test_plain_ndarray_result(self):
        U = skew_takagi(standard_symplectic(1))
        assert type(U) is np.ndarray
        stack = np.stack([standard_symplectic(1)] * 3)
        assert (U.T @ stack @ U).shape == (3, 2, 2)

    def test_not_unitary(self):
        with pytest.raises(NotSkewUnitaryError):
            skew_takagi(2 * standard_symplectic(1))

    def test_not_skew(self):
        with pytest.raises(NotSkewUnitaryError):
            skew_takagi(np.eye(2))
