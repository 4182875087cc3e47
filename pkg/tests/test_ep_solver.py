import numpy as np
import pytest

from purecorr import (Bracket, ContractViolation, DensityMatrix,
                      DimensionCapExceededError, Dims, EpConfig, Partition,
                      araki_lieb_state, bell_state, detect_exact_structure,
                      ep_lower_bounds, ep_optimize, ep_subadditivity_certified,
                      ep_upper_bound_trivial, eof_2qubit, binary_entropy,
                      ghz_mixture, fig1_family, marginal_entropy, mutual_information,
                      partial_trace, random_density_matrix, ssa_equality_state, tensor,
                      w_state, werner_2qubit)

from conftest import dm, random_pure

CUT = Partition(((0,), (1,)))
CUT_A_BC = Partition(((0,), (1, 2)))
FAST = EpConfig(restarts=4, seed=0)


def cc_pair():
    """Classically correlated two-qubit state; its total correlation is exactly 1."""
    rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    return DensityMatrix(rho, Dims((2, 2)))


class TestBounds:
    def test_bell_lower_bound(self):
        value, source = ep_lower_bounds(bell_state().to_density_matrix(), CUT)
        assert abs(value - 1.0) < 1e-12
        assert source == "half-mutual-information"

    def test_ghz_mixture_pair_sum_reaches_marginal_entropy(self):
        rho = ghz_mixture(0.6, 0.3, 0.8)
        value, source = ep_lower_bounds(rho, CUT_A_BC, Partition(((1,), (2,))))
        assert abs(value - marginal_entropy(rho, (0,))) < 1e-10
        assert source == "pair-sum"

    def test_fig1_pair_sum_beats_half_mutual_information(self):
        # the pair-sum bound wins only where the mutual information is
        # polygamous; (0.3, 0.5) is such a point, (0.5, 0.5) is not
        rho = fig1_family(0.3, 0.5)
        plain, _ = ep_lower_bounds(rho, CUT_A_BC)
        split, source = ep_lower_bounds(rho, CUT_A_BC, Partition(((1,), (2,))))
        assert source == "pair-sum"
        assert split > plain + 1e-6

    def test_lower_bound_never_drops_below_half_mutual_information(self):
        # where the interaction information is positive the split does not help,
        # and the returned bound falls back to I/2
        rho = fig1_family(0.5, 0.5)
        plain, _ = ep_lower_bounds(rho, CUT_A_BC)
        split, source = ep_lower_bounds(rho, CUT_A_BC, Partition(((1,), (2,))))
        assert source == "half-mutual-information"
        assert abs(split - plain) < 1e-12

    def test_formation_bound_can_win(self):
        value, source = ep_lower_bounds(werner_2qubit(0.8), CUT)
        assert source == "formation-2q"
        assert abs(value - eof_2qubit(werner_2qubit(0.8))) < 1e-12

    def test_trivial_upper_bell(self):
        assert abs(ep_upper_bound_trivial(bell_state().to_density_matrix(), CUT) - 1.0) < 1e-12

    def test_trivial_upper_product(self):
        rho = tensor(random_density_matrix(Dims((2,)), 2, seed=1),
                     random_density_matrix(Dims((2,)), 2, seed=2))
        expected = min(marginal_entropy(rho, (0,)), marginal_entropy(rho, (1,)))
        assert abs(ep_upper_bound_trivial(rho, CUT) - expected) < 1e-12

    def test_trivial_upper_w3(self):
        rho = w_state(3).to_density_matrix()
        assert abs(ep_upper_bound_trivial(rho, CUT_A_BC) - 0.918296) < 1e-6

    def test_split_must_partition_a_side(self):
        rho = fig1_family(0.5, 0.5)
        with pytest.raises(ContractViolation):
            ep_lower_bounds(rho, CUT_A_BC, Partition(((0,), (1,))))


class TestOptimizePureAndProduct:
    @pytest.mark.parametrize("dims,seed", [((2, 2), 0), ((2, 2), 1), ((2, 4), 2)])
    def test_pure_state_recovers_entanglement_entropy(self, dims, seed):
        psi = random_pure(dims, seed)
        rho = psi.to_density_matrix()
        expected = marginal_entropy(rho, (0,))
        res = ep_optimize(rho, CUT, FAST)
        assert abs(res.estimate - expected) < 1e-6
        assert res.exactness_certificate.kind == "pure-state"

    def test_product_mixed_state_goes_to_zero(self):
        rho = tensor(random_density_matrix(Dims((2,)), 2, seed=3),
                     random_density_matrix(Dims((2,)), 2, seed=4))
        res = ep_optimize(rho, CUT, EpConfig(restarts=6, seed=1))
        assert res.estimate <= 1e-6

    def test_classically_correlated_pair_is_one(self):
        res = ep_optimize(cc_pair(), CUT, EpConfig(restarts=6, seed=2))
        assert abs(res.estimate - 1.0) < 1e-9


class TestOptimizeWerner:
    def test_bracket_and_stability(self):
        rho = werner_2qubit(0.8)
        res = ep_optimize(rho, CUT, EpConfig(restarts=8, seed=5))
        lower, _ = ep_lower_bounds(rho, CUT)
        upper = ep_upper_bound_trivial(rho, CUT)
        assert lower - 1e-9 <= res.estimate <= upper + 1e-9
        doubled = ep_optimize(rho, CUT, EpConfig(restarts=16, seed=5))
        assert abs(doubled.estimate - res.estimate) < 1e-4

    def test_more_restarts_never_increase(self):
        rho = werner_2qubit(0.6)
        few = ep_optimize(rho, CUT, EpConfig(restarts=3, seed=7))
        many = ep_optimize(rho, CUT, EpConfig(restarts=6, seed=7))
        assert many.estimate <= few.estimate + 1e-12

    def test_determinism(self):
        cfg = EpConfig(restarts=5, seed=11)
        a = ep_optimize(werner_2qubit(0.7), CUT, cfg)
        b = ep_optimize(werner_2qubit(0.7), CUT, cfg)
        assert a.to_json_dict() == b.to_json_dict()

    def test_descent_is_monotone_per_restart(self):
        res = ep_optimize(werner_2qubit(0.75), CUT, EpConfig(restarts=3, seed=13))
        for outcome in res.diagnostics.outcomes:
            traj = np.array(outcome.trajectory)
            assert np.all(np.diff(traj) <= 1e-10)


class TestBracketSandwich:
    @pytest.mark.parametrize("seed", range(6))
    def test_random_two_qubit_states(self, seed):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=seed)
        res = ep_optimize(rho, CUT, EpConfig(restarts=4, seed=seed))
        half_mi = mutual_information(rho, CUT) / 2.0
        trivial = ep_upper_bound_trivial(rho, CUT)
        assert half_mi - 1e-9 <= res.estimate <= trivial + 1e-9
        assert res.bracket.lower - 1e-9 <= res.estimate <= res.bracket.upper + 1e-9

    def test_certificate_lies_inside_bracket(self):
        rho = ghz_mixture(0.5, 0.5, 0.5)
        res = ep_optimize(rho, CUT_A_BC, FAST)
        cert = res.exactness_certificate
        assert cert is not None
        assert res.bracket.lower - 1e-9 <= cert.value <= res.bracket.upper + 1e-9


class TestGhzMixtureExactValue:
    @pytest.mark.parametrize("p,a,b", [(0.5, 0.5, 0.5), (0.25, 0.75, 0.1), (1.0, 0.3, 0.5)])
    def test_estimate_meets_marginal_entropy(self, p, a, b):
        rho = ghz_mixture(p, a, b)
        s_a = marginal_entropy(rho, (0,))
        res = ep_optimize(rho, CUT_A_BC, FAST)
        assert res.estimate <= s_a + 1e-4
        assert res.bracket.gap <= 1e-9
        cert = res.exactness_certificate
        assert cert is not None and abs(cert.value - s_a) < 1e-9

    def test_interior_point_emits_bound_coincidence(self):
        res = ep_optimize(ghz_mixture(0.5, 0.5, 0.5), CUT_A_BC, FAST)
        assert res.exactness_certificate.kind == "bound-coincidence"


class TestDetectExactStructure:
    def test_araki_lieb_product_form(self):
        rho = araki_lieb_state(DensityMatrix(np.eye(2) / 2, Dims((2,))), bell_state())
        cert = detect_exact_structure(rho, Partition(((0, 1), (2,))))
        assert cert.kind == "araki-lieb"
        # value is the smaller marginal entropy: S(B) = 1 here (S(A) = 2)
        assert abs(cert.value - 1.0) < 1e-9

    def test_ssa_equality_two_blocks(self):
        # pure blocks with orthogonal A- and C-supports make the conditional
        # entropies at the node cancel, which is what the certificate needs
        def embedded_pure(d_big, slot, seed, left):
            rng = np.random.default_rng(seed)
            v = rng.normal(size=4) + 1j * rng.normal(size=4)
            v /= np.linalg.norm(v)
            amp = np.zeros((d_big, 2), dtype=complex) if left else np.zeros((2, d_big), dtype=complex)
            if left:
                amp[2 * slot:2 * slot + 2, :] = v.reshape(2, 2)
                dims = Dims((d_big, 2))
            else:
                amp[:, 2 * slot:2 * slot + 2] = v.reshape(2, 2)
                dims = Dims((2, d_big))
            vec = amp.reshape(-1)
            return DensityMatrix(np.outer(vec, vec.conj()), dims)

        lbs = [embedded_pure(4, 0, 1, True), embedded_pure(4, 1, 2, True)]
        rbs = [embedded_pure(4, 0, 3, False), embedded_pure(4, 1, 4, False)]
        rho = ssa_equality_state([0.5, 0.5], lbs, rbs)
        cert = detect_exact_structure(rho, tripartition=Partition(((0,), (1,), (2,))))
        assert cert is not None
        assert cert.kind == "ssa-equality"
        assert abs(cert.value - marginal_entropy(rho, (0,))) < 1e-9

    def test_ssa_certificate_value_confirmed_by_optimizer(self):
        # same construction at smaller size: the optimizer reaches the pinned value
        rng = np.random.default_rng(9)

        def pure_dm(dims, seed):
            r = np.random.default_rng(seed)
            v = r.normal(size=int(np.prod(dims))) + 1j * r.normal(size=int(np.prod(dims)))
            v /= np.linalg.norm(v)
            return DensityMatrix(np.outer(v, v.conj()), Dims(dims))

        rho = ssa_equality_state([1.0], [pure_dm((2, 2), 31)], [pure_dm((2, 2), 32)])
        cert = detect_exact_structure(rho, tripartition=Partition(((0,), (1,), (2,))))
        assert cert is not None and cert.kind == "ssa-equality"
        res = ep_optimize(rho, CUT_A_BC, EpConfig(restarts=3, seed=5))
        assert abs(res.estimate - cert.value) < 1e-5

    def test_singlet_certificate_value_one(self):
        rho = bell_state("psi-").to_density_matrix()
        cert = detect_exact_structure(rho, CUT)
        assert cert is not None
        assert abs(cert.value - 1.0) < 1e-9

    def test_symmetric_support_detected_on_mixed_state(self):
        red = partial_trace(w_state(3).to_density_matrix(), {0, 1})
        cert = detect_exact_structure(red, CUT)
        assert cert.kind == "symmetric-support"
        assert abs(cert.value - binary_entropy(1 / 3)) < 1e-9

    def test_symmetric_support_value_confirmed_by_optimizer(self):
        red = partial_trace(w_state(3).to_density_matrix(), {0, 1})
        res = ep_optimize(red, CUT, EpConfig(restarts=6, seed=3))
        assert abs(res.estimate - binary_entropy(1 / 3)) < 1e-6

    def test_generic_state_has_no_certificate(self):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=21)
        assert detect_exact_structure(rho, CUT) is None


class TestSubadditivity:
    def test_bell_pair_equality(self):
        b = bell_state().to_density_matrix()
        record = ep_subadditivity_certified(b, b, FAST)
        assert record.holds
        assert abs(record.lhs - 2.0) < 1e-6
        assert abs(record.rhs - 2.0) < 1e-6

    def test_werner_pair(self):
        w = werner_2qubit(0.8)
        record = ep_subadditivity_certified(w, w, EpConfig(restarts=2, seed=1))
        assert record.lhs <= record.rhs + 1e-6
        assert record.holds

    def test_pure_times_mixed(self):
        psi = random_pure((2, 2), seed=8).to_density_matrix()
        mixed = random_density_matrix(Dims((2, 2)), 3, seed=9)
        record = ep_subadditivity_certified(psi, mixed, EpConfig(restarts=2, seed=2))
        s_a = marginal_entropy(psi, (0,))
        single_mixed = record.extras["single_estimates"][1]
        assert record.lhs <= s_a + single_mixed + 1e-6

    def test_warm_start_value_equals_sum(self):
        w = werner_2qubit(0.7)
        record = ep_subadditivity_certified(w, w, EpConfig(restarts=1, seed=3))
        assert abs(record.extras["warm_start_value"] - record.rhs) < 1e-8


class TestConfigAndCaps:
    def test_dimension_cap_exceeded(self):
        rho = random_density_matrix(Dims((2, 2)), 4, seed=2)
        with pytest.raises(DimensionCapExceededError):
            ep_optimize(rho, CUT, EpConfig(restarts=1, dim_cap=32))

    def test_env_var_cap(self, monkeypatch):
        monkeypatch.setenv("PURECORR_MAX_DIM", "32")
        rho = random_density_matrix(Dims((2, 2)), 4, seed=2)
        with pytest.raises(DimensionCapExceededError):
            ep_optimize(rho, CUT, EpConfig(restarts=1))

    def test_terhal_mode_dims(self):
        rho = werner_2qubit(0.9)
        res = ep_optimize(rho, CUT, EpConfig(restarts=1, seed=4,
                                             ancilla_mode="terhal-full", dim_cap=2 ** 16))
        assert res.ancilla_split == (4, 16)
        assert res.bracket.lower - 1e-9 <= res.estimate

    def test_explicit_mode(self):
        rho = werner_2qubit(0.9)
        res = ep_optimize(rho, CUT, EpConfig(restarts=2, seed=4, ancilla_mode="explicit",
                                             ancilla_dims=(4, 4)))
        assert res.ancilla_split == (4, 4)

    def test_invalid_config(self):
        with pytest.raises(ContractViolation):
            EpConfig(restarts=0)
        with pytest.raises(ContractViolation):
            EpConfig(ancilla_mode="explicit")

    def test_bracket_validation(self):
        with pytest.raises(ContractViolation):
            Bracket(1.0, "x", 0.5, "y")
