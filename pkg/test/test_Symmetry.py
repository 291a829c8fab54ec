import pytest
import numpy as np
import scipy.linalg as la

from pydiii.core.symmetry import (
    AntiUnitaryOp,
    SymmetryTriple,
    standard_triple,
    standard_form,
    commutant_phase,
    hamiltonian_from_sewing,
    extract_sewing,
    verify_class_diii,
    verify_intertwiner,
    conjugate_field,
)
from pydiii.exceptions import (
    UnequalChiralEigenspacesError,
    NotInCommutantError,
    NotStandardFormError,
    ValidationFailure,
)
from pydiii.core.sewing import unwrap_phase_1d
from pydiii.invariants import teo_kane_1d, full_invariant_2d
from pydiii.models import nonflat_hamiltonian

from test.utils import assert_arrays_close, random_unitary


class TestSymmetryTriple:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_standard_relations(self, m):
        sym = standard_triple(m)
        assert sym.residuals(1e-12).passed
        assert_arrays_close(-np.eye(2 * m), sym.T.square())
        assert_arrays_close(np.eye(2 * m), sym.C.square())
        assert_arrays_close(np.diag([1.0] * m + [-1.0] * m), sym.chi)

    def test_antiunitary_apply(self):
        T = AntiUnitaryOp(np.array([[0, -1], [1, 0]]))
        v = np.array([1j, 2.0])
        assert_arrays_close(np.array([-2.0, -1j]), T.apply(v))

    def test_change_basis_keeps_relations(self):
        rng = np.random.default_rng(0)
        W = random_unitary(rng, 4)
        assert standard_triple(2).change_basis(W).residuals(1e-10).passed


class TestStandardForm:
    def test_recovers_standard_triple(self):
        rng = np.random.default_rng(21)
        for trial in range(20):
            m = int(rng.integers(1, 5))
            target = standard_triple(m)
            sym = target.change_basis(random_unitary(rng, 2 * m))
            W, standardized = standard_form(sym)
            pairs = [
                (target.T.unitary_part, standardized.T.unitary_part),
                (target.C.unitary_part, standardized.C.unitary_part),
                (target.chi, standardized.chi),
                (np.eye(2 * m), W.conj().T @ W),
            ]
            for expected, produced in pairs:
                assert_arrays_close(
                    expected, produced, atol=1e-10, context=f"trial {trial}"
                )

    def test_unequal_eigenspaces(self):
        sym = standard_triple(2)
        lopsided = SymmetryTriple(sym.T, sym.C, np.diag([1.0, 1.0, 1.0, -1.0]))
        with pytest.raises(UnequalChiralEigenspacesError):
            standard_form(lopsided)

    def test_wrong_time_reversal_square(self):
        # T^2 = +1
        U = np.array([[0, 1], [1, 0]], dtype=complex)
        sym = SymmetryTriple.from_operators(U, U @ np.diag([1.0, -1.0]))
        with pytest.raises((ValidationFailure, UnequalChiralEigenspacesError)):
            standard_form(sym)


class TestCommutant:
    def test_block_form(self):
        rng = np.random.default_rng(1)
        phi = random_unitary(rng, 2)
        V = la.block_diag(phi, np.conj(phi))
        assert_arrays_close(phi, commutant_phase(V), atol=1e-12)

    def test_not_in_commutant(self):
        rng = np.random.default_rng(2)
        with pytest.raises(NotInCommutantError):
            commutant_phase(random_unitary(rng, 4))


class TestExtractSewing:
    @pytest.mark.parametrize("fixture", ["q_minus_1", "q_minus_3", "q_plus"])
    def test_round_trip_circle(self, fixture, request):
        q = request.getfixturevalue(fixture)
        H = hamiltonian_from_sewing(q)
        assert verify_class_diii(H, standard_triple(q.rank), 1e-12).passed
        assert_arrays_close(q.samples, extract_sewing(H).samples, rtol=0, atol=1e-12)

    def test_round_trip_torus(self, torus_models):
        q = torus_models["q_s"]
        recovered = extract_sewing(hamiltonian_from_sewing(q))
        assert_arrays_close(q.samples, recovered.samples, rtol=0, atol=1e-12)

    def test_nonflat_hamiltonian_keeps_invariant(self, q_minus_1):
        H = nonflat_hamiltonian(q_minus_1, strength=0.4, seed=3)
        assert H.gap > 1e-3
        assert verify_class_diii(H, standard_triple(2), 1e-10).passed
        assert teo_kane_1d(extract_sewing(H)) == -1

    def test_nonflat_torus(self, torus_models):
        H = nonflat_hamiltonian(torus_models["q_w2"], strength=0.3, seed=4)
        assert full_invariant_2d(extract_sewing(H)) == (1, -1, 1)

    def test_with_symmetry_in_other_basis(self, q_minus_1):
        rng = np.random.default_rng(6)
        W = random_unitary(rng, 4)
        sym = standard_triple(2).change_basis(W)
        H = conjugate_field(hamiltonian_from_sewing(q_minus_1), W.conj().T)
        q = extract_sewing(H, symmetry=sym)
        assert teo_kane_1d(q) == -1

    def test_not_standard_form(self, q_minus_1):
        rng = np.random.default_rng(7)
        W = random_unitary(rng, 4)
        H = conjugate_field(hamiltonian_from_sewing(q_minus_1), W)
        with pytest.raises(NotStandardFormError):
            extract_sewing(H)


class TestIntertwiner:
    def test_strong_constant(self, fixtures_b):
        checks = verify_intertwiner(
            fixtures_b["q0"], fixtures_b["q0_prime"], fixtures_b["phi0"], strong=True
        )
        assert checks.passed

    def test_rotated_weak_not_strong(self, fixtures_b):
        weak = verify_intertwiner(
            fixtures_b["q0"], fixtures_b["q1_rot"], fixtures_b["phi1"], strong=False
        )
        assert weak.passed

        strong = verify_intertwiner(
            fixtures_b["q0"], fixtures_b["q1_rot"], fixtures_b["phi1"], strong=True
        )
        assert not strong.passed
        assert strong.failed() == ["tau_invariance"]
        assert strong["tau_invariance"] >= 1.0

    def test_rotated_model_not_homotopic_to_constant(self, fixtures_b):
        assert teo_kane_1d(fixtures_b["q0"]) == 1
        assert teo_kane_1d(fixtures_b["q1_rot"]) == -1

    def test_rotated_intertwiner_det_winds_once(self, fixtures_b):
        _, winding = unwrap_phase_1d(np.linalg.det(fixtures_b["phi1"]))
        assert winding == 1
