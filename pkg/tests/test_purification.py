import numpy as np
import pytest
from numpy.testing import assert_allclose

from purecorr import (AncillaTooSmallError, ContractViolation, DensityMatrix, Dims,
                      Partition, PureState, UnitaryParams, bell_state,
                      mutual_information, objective_entropy, params_to_unitary,
                      random_density_matrix, standard_purification, tensor)
from purecorr.purification import objective_value_and_gradient

from conftest import random_pure


def bell_diagonal(weights):
    kinds = ("phi+", "phi-", "psi+", "psi-")
    rho = sum(w * bell_state(k).to_density_matrix().entries
              for w, k in zip(weights, kinds))
    return DensityMatrix(rho, Dims((2, 2)))


class TestStandardPurification:
    def test_pure_input_appends_ancilla_vacuum(self):
        psi = random_pure((2, 2), seed=1)
        frame = standard_purification(psi.to_density_matrix(), 2, 2)
        assert frame.rank == 1
        expected = np.kron(psi.amplitudes, np.eye(4)[0])
        # eigenvector phase is free: compare projectors
        got = frame.psi_s.amplitudes
        assert abs(abs(np.vdot(expected, got)) - 1.0) < 1e-10

    def test_bell_diagonal_rank4_reduction(self):
        rho = bell_diagonal([0.4, 0.3, 0.2, 0.1])
        frame = standard_purification(rho, 2, 2)
        mat = frame.psi_s.amplitudes.reshape(4, 4)
        assert np.max(np.abs(mat @ mat.conj().T - rho.entries)) < 1e-10

    def test_one_sided_ancilla(self):
        rho = DensityMatrix(np.eye(4) / 4, Dims((2, 2)))
        frame = standard_purification(rho, 1, 4)
        assert frame.rank == 4
        assert (frame.d_aprime, frame.d_bprime) == (1, 4)

    def test_too_small_ancilla_names_minimum(self):
        rho = DensityMatrix(np.eye(4) / 4, Dims((2, 2)))
        with pytest.raises(AncillaTooSmallError, match="at least 4"):
            standard_purification(rho, 1, 3)


class TestParamsToUnitary:
    def test_zero_gives_identity(self):
        u = params_to_unitary(UnitaryParams.zeros(3), 3)
        assert_allclose(u, np.eye(3), atol=1e-12)

    def test_pauli_x_rotation(self):
        theta = np.zeros(4)
        theta[2] = np.pi / 2  # H = (pi/2) sigma_x
        u = params_to_unitary(UnitaryParams(theta), 2)
        assert_allclose(np.abs(u), np.abs(1j * np.array([[0, 1], [1, 0]])), atol=1e-10)

    def test_unit_modulus_determinant(self):
        rng = np.random.default_rng(7)
        u = params_to_unitary(UnitaryParams(rng.normal(size=16)), 4)
        assert abs(abs(np.linalg.det(u)) - 1.0) < 1e-10

    def test_unitarity(self):
        rng = np.random.default_rng(8)
        u = params_to_unitary(UnitaryParams(rng.normal(size=25)), 5)
        assert np.max(np.abs(u.conj().T @ u - np.eye(5))) < 1e-10

    def test_length_mismatch(self):
        with pytest.raises(ContractViolation):
            params_to_unitary(UnitaryParams(np.zeros(5)), 2)


class TestObjective:
    def test_pure_base_any_theta_gives_marginal_entropy(self):
        psi = random_pure((2, 2), seed=2)
        rho = psi.to_density_matrix()
        frame = standard_purification(rho, 1, 1)
        s_a = mutual_information(rho, Partition(((0,), (1,)))) / 2.0
        for theta_val in (0.0, 0.7):
            val = objective_entropy(frame, UnitaryParams(np.array([theta_val])))
            assert abs(val - s_a) < 1e-9

    def test_bell_base_is_flat_at_one(self):
        rho = bell_state().to_density_matrix()
        frame = standard_purification(rho, 1, 1)
        assert abs(objective_entropy(frame, UnitaryParams(np.zeros(1))) - 1.0) < 1e-9

    def test_identity_start_evaluates_to_first_marginal_entropy(self):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=3)
        frame = standard_purification(rho, 4, 4)
        from purecorr import marginal_entropy
        val = objective_entropy(frame, UnitaryParams.zeros(16))
        assert abs(val - marginal_entropy(rho, (0,))) < 1e-10

    def test_sides_agree_and_equal_half_mutual_information(self):
        rho = random_density_matrix(Dims((2, 2)), 3, seed=4)
        frame = standard_purification(rho, 3, 3)
        rng = np.random.default_rng(5)
        theta = rng.normal(size=81) * 0.6
        u = params_to_unitary(UnitaryParams(theta), 9)
        from purecorr.purification import _entropy_of_rotated
        s_aa = _entropy_of_rotated(frame, u, "AA'", 1e-12)
        s_bb = _entropy_of_rotated(frame, u, "BB'", 1e-12)
        assert abs(s_aa - s_bb) < 1e-9
        # half the AA':BB' mutual information of the pure rotated state is S(AA')
        phi = frame.rotated_matrix(u).reshape(2, 2, 3, 3)
        full = PureState(np.einsum("abcd->acbd", phi).reshape(-1), Dims((2, 3, 2, 3)))
        mi = mutual_information(full.to_density_matrix(), Partition(((0, 1), (2, 3))))
        assert abs(s_aa - mi / 2.0) < 1e-9

    def test_objective_never_beats_half_mutual_information(self):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=6)
        frame = standard_purification(rho, 4, 4)
        half_mi = mutual_information(rho, Partition(((0,), (1,)))) / 2.0
        rng = np.random.default_rng(9)
        for _ in range(10):
            val = objective_entropy(frame, UnitaryParams(rng.normal(size=256)))
            assert val >= half_mi - 1e-9
            assert val <= np.log2(2 * 4) + 1e-9

    def test_rotation_preserves_base_state(self):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=7)
        frame = standard_purification(rho, 4, 4)
        rng = np.random.default_rng(10)
        u = params_to_unitary(UnitaryParams(rng.normal(size=256)), 16)
        mat = frame.rotated_matrix(u)
        assert np.max(np.abs(mat @ mat.conj().T - rho.entries)) < 1e-10


class TestGradient:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_central_differences(self, seed):
        rho = random_density_matrix(Dims((2, 2)), 3, seed=seed)
        frame = standard_purification(rho, 3, 3)
        rng = np.random.default_rng(seed + 100)
        theta = rng.normal(size=81) * 0.5
        u0 = params_to_unitary(UnitaryParams(rng.normal(size=81) * 0.3), 9)
        val, grad = objective_value_and_gradient(frame, theta, u0)
        step = 1e-5
        for k in rng.choice(81, size=12, replace=False):
            tp, tm = theta.copy(), theta.copy()
            tp[k] += step
            tm[k] -= step
            fp = objective_value_and_gradient(frame, tp, u0)[0]
            fm = objective_value_and_gradient(frame, tm, u0)[0]
            numeric = (fp - fm) / (2 * step)
            assert abs(grad[k] - numeric) < 5e-6
