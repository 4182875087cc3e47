import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from purecorr import (ContractViolation, DensityMatrix, Dims, Partition,
                      bell_state, binary_entropy, coherent_information,
                      concurrence_2qubit, conditional_entropy, e_cq, entropy,
                      eof_2qubit, ghz_generalized, haar_random_unitary,
                      interaction_information, marginal_entropy, mutual_information,
                      partial_trace, random_density_matrix, tensor, w_state,
                      werner_2qubit)

from conftest import dm, random_pure


class TestEntropy:
    def test_pure_projector(self):
        assert entropy(bell_state().to_density_matrix()) < 1e-12

    def test_maximally_mixed_qubit(self):
        assert abs(entropy(DensityMatrix(np.eye(2) / 2, Dims((2,)))) - 1.0) < 1e-12

    def test_binary_spectrum(self):
        rho = DensityMatrix(np.diag([2 / 3, 1 / 3]), Dims((2,)))
        assert abs(entropy(rho) - 0.918296) < 1e-6
        assert abs(entropy(rho) - binary_entropy(1 / 3)) < 1e-12

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=15, deadline=None)
    def test_unitary_invariance(self, seed):
        rho = random_density_matrix(Dims((4,)), 3, seed=seed)
        u = haar_random_unitary(4, seed + 1).entries
        rotated = DensityMatrix(u @ rho.entries @ u.conj().T, Dims((4,)))
        assert abs(entropy(rotated) - entropy(rho)) < 1e-10

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=15, deadline=None)
    def test_additive_on_products(self, seed):
        rho = random_density_matrix(Dims((2,)), 2, seed=seed)
        sig = random_density_matrix(Dims((3,)), 2, seed=seed + 1)
        assert abs(entropy(tensor(rho, sig)) - entropy(rho) - entropy(sig)) < 1e-10


class TestMutualInformation:
    def test_bell_is_maximal(self):
        assert abs(mutual_information(bell_state().to_density_matrix(),
                                      Partition(((0,), (1,)))) - 2.0) < 1e-12

    def test_product_vanishes(self):
        rho = tensor(random_density_matrix(Dims((2,)), 2, seed=1),
                     random_density_matrix(Dims((2,)), 2, seed=2))
        assert abs(mutual_information(rho, Partition(((0,), (1,))))) < 1e-10

    def test_ghz_node_versus_rest(self):
        rho = ghz_generalized(3, 0.5).to_density_matrix()
        assert abs(mutual_information(rho, Partition(((0,), (1, 2)))) - 2.0) < 1e-12

    def test_additive_across_combined_cuts(self):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=3)
        sig = random_density_matrix(Dims((2, 2)), 4, seed=4)
        joint = tensor(rho, sig)  # parties A,B,C,D
        lhs = mutual_information(joint, Partition(((0, 2), (1, 3))))
        rhs = (mutual_information(rho, Partition(((0,), (1,))))
               + mutual_information(sig, Partition(((0,), (1,)))))
        assert abs(lhs - rhs) < 1e-9

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=15, deadline=None)
    def test_monotone_under_discarding(self, seed):
        rho = random_density_matrix(Dims((2, 2, 2)), 5, seed=seed)
        assert (mutual_information(rho, Partition(((0,), (1, 2))))
                >= mutual_information(rho, Partition(((0,), (1,)))) - 1e-9)

    def test_nonnegative(self):
        rho = random_density_matrix(Dims((2, 3)), 4, seed=6)
        assert mutual_information(rho, Partition(((0,), (1,)))) >= -1e-9


class TestConditionalEntropy:
    def test_bell_is_minus_one(self):
        assert abs(conditional_entropy(bell_state().to_density_matrix(),
                                       (0,), (1,)) + 1.0) < 1e-12

    def test_maximally_mixed_two_qubits(self):
        rho = DensityMatrix(np.eye(4) / 4, Dims((2, 2)))
        assert abs(conditional_entropy(rho, (0,), (1,)) - 1.0) < 1e-12

    def test_w3_node_given_rest(self):
        rho = w_state(3).to_density_matrix()
        assert abs(conditional_entropy(rho, (0,), (1, 2)) + 0.918296) < 1e-6

    def test_rejects_overlapping_groups(self):
        rho = DensityMatrix(np.eye(4) / 4, Dims((2, 2)))
        with pytest.raises(ContractViolation):
            conditional_entropy(rho, (0,), (0, 1))


class TestInteractionInformation:
    def test_ghz_vanishes(self):
        rho = ghz_generalized(3, 0.5).to_density_matrix()
        assert abs(interaction_information(rho)) < 1e-10

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=15, deadline=None)
    def test_pair_sum_identity(self, seed):
        rho = random_density_matrix(Dims((2, 2, 2)), 4, seed=seed)
        i_ab = mutual_information(rho, Partition(((0,), (1,))))
        i_ac = mutual_information(rho, Partition(((0,), (2,))))
        i_abc = mutual_information(rho, Partition(((0,), (1, 2))))
        assert abs((i_ab + i_ac - i_abc) + interaction_information(rho)) < 1e-10

    def test_triple_product_vanishes(self):
        rho = tensor(tensor(random_density_matrix(Dims((2,)), 2, seed=1),
                            random_density_matrix(Dims((2,)), 2, seed=2)),
                     random_density_matrix(Dims((2,)), 2, seed=3))
        assert abs(interaction_information(rho)) < 1e-10

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=15, deadline=None)
    def test_strong_subadditivity(self, seed):
        rho = random_density_matrix(Dims((2, 2, 2)), 6, seed=seed)
        s = lambda g: marginal_entropy(rho, g)
        assert s((0, 1)) + s((1, 2)) >= s((1,)) + entropy(rho) - 1e-9


class TestCoherentInformation:
    def test_bell(self):
        assert abs(coherent_information(bell_state().to_density_matrix(),
                                        (0,), (1,)) - 1.0) < 1e-12

    def test_maximally_mixed(self):
        rho = DensityMatrix(np.eye(4) / 4, Dims((2, 2)))
        assert abs(coherent_information(rho, (0,), (1,)) + 1.0) < 1e-12

    def test_separable_state_sign_recorded(self):
        # separable states have nonpositive coherent information
        rho = tensor(random_density_matrix(Dims((2,)), 2, seed=4),
                     random_density_matrix(Dims((2,)), 2, seed=5))
        assert coherent_information(rho, (0,), (1,)) <= 1e-9


class TestFormation:
    def test_bell_one_ebit(self):
        assert abs(eof_2qubit(bell_state().to_density_matrix()) - 1.0) < 1e-12

    def test_werner_threshold(self):
        assert eof_2qubit(werner_2qubit(1 / 3)) < 1e-9

    def test_werner_concurrence_closed_form(self):
        # dual route: Wootters spectrum vs the (3p-1)/2 closed form
        for p in (0.5, 0.8, 0.95):
            expected_c = max(0.0, (3 * p - 1) / 2)
            assert abs(concurrence_2qubit(werner_2qubit(p)) - expected_c) < 1e-10
        c = 0.7
        expected_ef = binary_entropy((1 + np.sqrt(1 - c * c)) / 2)
        assert abs(eof_2qubit(werner_2qubit(0.8)) - expected_ef) < 1e-12

    def test_w3_pair_concurrence(self):
        red = partial_trace(w_state(3).to_density_matrix(), {0, 1})
        assert abs(concurrence_2qubit(red) - 2 / 3) < 1e-10

    def test_rejects_wrong_dims(self):
        with pytest.raises(ContractViolation):
            eof_2qubit(DensityMatrix(np.eye(8) / 8, Dims((2, 2, 2))))


class TestEcq:
    def test_equal_inputs_vanish(self):
        assert e_cq(0.7, 0.7) == 0.0

    def test_arithmetic(self):
        assert abs(e_cq(1.0, 0.4) - 0.6) < 1e-15

    def test_rejects_non_finite(self):
        with pytest.raises(ContractViolation):
            e_cq(float("nan"), 0.0)


class TestPureTripartiteIdentities:
    @pytest.mark.parametrize("seed", range(8))
    def test_mi_monogamy_equality(self, seed):
        rho = random_pure((2, 2, 2), seed).to_density_matrix()
        i_ab = mutual_information(rho, Partition(((0,), (1,))))
        i_ac = mutual_information(rho, Partition(((0,), (2,))))
        i_abc = mutual_information(rho, Partition(((0,), (1, 2))))
        assert abs(i_ab + i_ac - i_abc) < 1e-9
