import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

import oracles
from pauli_lab import bounds_lab as bl


class TestPackingNet:
    def test_single_candidate(self):
        net = bl.greedy_packing_net([[0.1, 0.2]], "uniform", 0.01)
        assert len(net) == 1 and net.indices == (0,)

    def test_boundary_is_rejected(self):
        # distance exactly 4 eps, all values dyadic: 0.5**2 = 0.25 = 4 * 0.0625
        net = bl.greedy_packing_net([[0.0], [0.5]], "uniform", 0.0625)
        assert len(net) == 1
        net = bl.greedy_packing_net([[0.0], [0.5 + 2**-20]], "uniform", 0.0625)
        assert len(net) == 2

    def test_noisy_parity_class_is_its_own_net(self):
        n, eps = 4, 0.02
        table = bl.AppendixDClass(n, eps).table()
        net = bl.greedy_packing_net(table, "uniform", eps)
        assert len(net) == 1 << n and net.is_valid()
        d = net.distances()
        off = ~np.eye(len(net), dtype=bool)
        assert np.allclose(d[off], 6 * eps)

    @given(st.integers(1, 12), st.integers(1, 6), st.floats(0.001, 0.3), st.integers(0, 2**32 - 1))
    @settings(max_examples=60)
    def test_packing_and_covering(self, count, size, eps, seed):
        rng = np.random.default_rng(seed)
        cand = rng.uniform(-1, 1, size=(count, size))
        w = rng.dirichlet(np.ones(size))
        net = bl.greedy_packing_net(cand, w, eps)
        assert net.is_valid()
        for j in range(count):
            if j in net.indices:
                continue
            d = ((net.members - cand[j]) ** 2 * w).sum(axis=1)
            assert d.min() <= 4 * eps

    def test_bad_distribution(self):
        with pytest.raises(ValueError):
            bl.greedy_packing_net([[0.0, 1.0]], [0.3, 0.3], 0.1)
        with pytest.raises(ValueError):
            bl.greedy_packing_net(np.zeros((0, 2)), "uniform", 0.1)


class TestErm:
    def test_noiseless_data(self):
        n, eps = 3, 0.05
        net = bl.greedy_packing_net(bl.AppendixDClass(n, eps).table(), "uniform", eps)
        xs = np.arange(8)
        for j in range(len(net)):
            assert bl.erm_learner(net, xs, net.members[j][xs]) == j

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40)
    def test_argmin_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        members = rng.uniform(-1, 1, size=(5, 4))
        net = bl.PackingNet(members, np.full(4, 0.25), 0.0, tuple(range(5)))
        xs = rng.integers(0, 4, size=7)
        os = rng.choice([-1.0, 1.0], size=7)
        errs = [np.mean((members[j][xs] - os) ** 2) for j in range(5)]
        chosen = bl.erm_learner(net, xs, os)
        assert errs[chosen] <= min(errs) + 1e-12
        assert chosen == int(np.argmin(np.round(errs, 12)))

    def test_ties_pick_lowest(self):
        net = bl.PackingNet(np.array([[0.5], [0.5]]), np.ones(1), 0.0, (0, 1))
        assert bl.erm_learner(net, [0], [1.0]) == 0

    def test_empty(self):
        net = bl.PackingNet(np.zeros((0, 2)), np.full(2, 0.5), 0.1, ())
        with pytest.raises(ValueError):
            bl.erm_learner(net, [0], [1.0])
        net = bl.PackingNet(np.zeros((1, 2)), np.full(2, 0.5), 0.1, (0,))
        with pytest.raises(ValueError):
            bl.erm_learner(net, [], [])


class TestNoisyParity:
    def test_closed_form(self):
        cls = bl.AppendixDClass(3, 0.03, a=0b101)
        xs = np.arange(8)
        want = [math.sqrt(0.09) * (1 - 2 * (bin(x & 0b101).count("1") % 2)) for x in xs]
        assert np.allclose(cls.f(xs), want)
        assert np.allclose(cls.table()[0b101], want)

    def test_invalid(self):
        with pytest.raises(ValueError):
            bl.AppendixDClass(2, 0.4)
        with pytest.raises(ValueError):
            bl.AppendixDClass(2, 0.1, a=4)

    @pytest.mark.parametrize("n,eps,a", [(1, 0.1, 1), (2, 0.03, 2), (3, 0.2, 5)])
    def test_kraus_channel(self, n, eps, a):
        cls = bl.AppendixDClass(n, eps, a)
        ops = bl.appendix_d_kraus(cls)
        assert len(ops) == 2 * (1 << n)
        dim = 1 << n
        assert np.allclose(sum(k.T @ k for k in ops), np.eye(dim))
        z_flag = np.kron(oracles.PAULI["Z"], np.eye(dim)).real
        for x in range(dim):
            rho = np.zeros((dim, dim))
            rho[x, x] = 1
            out = sum(k @ rho @ k.T for k in ops)
            p_plus = np.trace((np.eye(2 * dim) + z_flag) / 2 @ out)
            assert p_plus == pytest.approx((1 + cls.f(x)) / 2)

    @pytest.mark.parametrize("n", [1, 3, 5, 16, 32])
    @pytest.mark.parametrize("eps", [0.0, 0.03, 0.33])
    def test_quantum_trial(self, n, eps):
        rng = np.random.default_rng(n)
        for _ in range(5):
            a = int(rng.integers(0, 1 << n))
            label, queries = bl.appendix_d_quantum_trial(bl.AppendixDClass(n, eps, a), rng)
            assert (label, queries) == (a, 1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_dense_and_closed_form_agree(self, n):
        rng = np.random.default_rng(20 + n)
        for eps in (0.01, 0.2):
            cls = bl.AppendixDClass(n, eps, int(rng.integers(0, 1 << n)))
            dense = {bl.appendix_d_quantum_trial(cls, rng, dense=True) for _ in range(20)}
            assert dense == {bl.appendix_d_quantum_trial(cls, dense=False)} == {(cls.a, 1)}

    def test_fwht_matches_direct_sum(self):
        rng = np.random.default_rng(1)
        n = 5
        xs = rng.integers(0, 1 << n, size=40)
        os = rng.choice([-1, 1], size=40)
        scores = [sum(o * (-1) ** bin(b & x).count("1") for x, o in zip(xs, os)) for b in range(1 << n)]
        best = int(np.argmax(scores))
        assert bl.appendix_d_ml_decode(n, 0.03, xs, os) == best

    def test_ml_decode_cap(self):
        with pytest.raises(ValueError):
            bl.appendix_d_ml_decode(bl.ML_DECODE_MAX_BITS + 1, 0.03, [0], [1])

    def test_noiseless_budget_near_n(self):
        rng = np.random.default_rng(2)
        budget = bl.appendix_d_classical_budget(8, 1 / 3 - 1e-12, rng, trials=300)
        assert 8 <= budget <= 12

    def test_budget_grows_with_n(self):
        rng = np.random.default_rng(3)
        assert bl.appendix_d_classical_budget(4, 0.03, rng) < bl.appendix_d_classical_budget(8, 0.03, rng)


class TestMutualInformation:
    def test_values(self):
        assert bl.per_query_mutual_info(0.0) == 0.0
        assert bl.per_query_mutual_info(0.12) == pytest.approx(1 - oracles.binary_entropy_bits(0.8), abs=1e-12)
        assert bl.per_query_mutual_info(0.12) == pytest.approx(0.2781, abs=1e-4)

    def test_grid_monotone_and_bounded(self):
        grid = np.linspace(0, 0.333, 200)
        vals = [bl.per_query_mutual_info(e) for e in grid]
        assert all(v <= 3 * e + 1e-12 for v, e in zip(vals, grid))
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            bl.per_query_mutual_info(1 / 3)


class TestHolevo:
    def test_identical_states(self):
        rho = np.diag([0.3, 0.7])
        assert bl.holevo_chi(bl.DiscreteEnsemble.uniform([rho, rho, rho])) == pytest.approx(0, abs=1e-12)

    def test_single_qubit_codebook(self):
        chi = bl.holevo_chi(bl.pauli_codebook_ensemble(1, 1))
        assert chi == pytest.approx(math.log(2), abs=1e-12)

    @pytest.mark.parametrize("n,copies", [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3)])
    def test_bound(self, n, copies):
        assert bl.holevo_chi(bl.pauli_codebook_ensemble(n, copies)) <= copies * math.log(2) + 1e-9

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20)
    def test_invariances(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.choice([2, 4, 8, 16]))
        states = []
        for _ in range(4):
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            m = g @ g.conj().T
            states.append(m / np.trace(m).real)
        probs = rng.dirichlet(np.ones(4))
        chi = bl.holevo_chi(bl.DiscreteEnsemble(tuple(states), probs))
        perm = rng.permutation(4)
        chi_perm = bl.holevo_chi(bl.DiscreteEnsemble(tuple(states[i] for i in perm), probs[perm]))
        u = unitary_group.rvs(dim, random_state=rng)
        chi_rot = bl.holevo_chi(bl.DiscreteEnsemble(tuple(u @ s @ u.conj().T for s in states), probs))
        assert chi_perm == pytest.approx(chi, abs=1e-9)
        assert chi_rot == pytest.approx(chi, abs=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            bl.DiscreteEnsemble((np.eye(2) / 2,), np.array([0.5]))
        with pytest.raises(ValueError):
            bl.pauli_codebook_ensemble(3, 5)


class TestTotalVariation:
    def test_worked_example(self):
        # p2(00) = average over 15 Paulis of (1 + <00|P|00>)/4; three of them
        # (ZI, IZ, ZZ) have <00|P|00> = 1
        tv = bl.tv_distance_adaptive(bl.computational_basis_strategy(2, 1), 2, 1)
        p2_00 = (15 + 3) / 15 / 4
        assert p2_00 == pytest.approx(0.3)
        p2_other = (1 - p2_00) / 3
        assert p2_other == pytest.approx(14 / 60)
        assert tv == pytest.approx(0.5 * (abs(0.25 - p2_00) + 3 * abs(0.25 - p2_other)))
        assert tv == pytest.approx(0.05)

    def test_zero_copies(self):
        assert bl.tv_distance_adaptive({}, 2, 0) == 0.0

    @given(st.integers(0, 2**32 - 1), st.integers(1, 3))
    @settings(max_examples=25)
    def test_random_adaptive_strategies(self, seed, copies):
        rng = np.random.default_rng(seed)
        strat = bl.random_adaptive_strategy(2, copies, rng)
        tv = bl.tv_distance_adaptive(strat, 2, copies)
        assert 0 <= tv <= bl.tv_bound(2, copies)

    def test_invalid_povm(self):
        bad = {(): (np.full(4, 0.25), np.eye(4)[[0, 0, 1, 2]].astype(complex))}
        with pytest.raises(ValueError):
            bl.tv_distance_adaptive(bad, 2, 1)


class TestMoments:
    @pytest.mark.parametrize("n,psi", [
        (1, np.array([1, 0])),
        (3, np.array([1, 0, 0, 0, 0, 0, 0, 1]) / math.sqrt(2)),
    ])
    def test_named_states(self, n, psi):
        f, s = bl.pauli_moment_check(n, psi)
        assert f == pytest.approx(1 / 2**n, abs=1e-12)
        assert s == pytest.approx((1 + 1 / (2**n + 1)) / 4**n, abs=1e-12)

    @given(st.integers(1, 3), st.integers(0, 2**32 - 1))
    @settings(max_examples=20)
    def test_random_states(self, n, seed):
        rng = np.random.default_rng(seed)
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        bl.pauli_moment_check(n, psi / np.linalg.norm(psi))

    def test_not_normalised(self):
        with pytest.raises(ValueError):
            bl.pauli_moment_check(1, np.array([1.0, 1.0]))


class TestPointFunctions:
    def test_closed_form(self):
        assert bl.point_function_success(4, 0) == pytest.approx(1 / 16)
        assert bl.point_function_success(4, 15) == 1.0
        assert bl.point_function_success(8, 64) == pytest.approx(0.25 + 0.75 / 192)

    def test_edges(self):
        rng = np.random.default_rng(0)
        assert bl.point_function_experiment(3, 7, 200, rng) == 1.0
        with pytest.raises(ValueError):
            bl.point_function_experiment(3, 8, 10, rng)

    @pytest.mark.parametrize("m,k", [(4, 0), (4, 4), (6, 16), (8, 64)])
    def test_empirical_rate(self, m, k):
        rng = np.random.default_rng(m + k)
        trials = 3000
        rate = bl.point_function_experiment(m, k, trials, rng)
        exact = bl.point_function_success(m, k)
        assert rate == pytest.approx(exact, abs=4 * math.sqrt(exact * (1 - exact) / trials))


class TestUnionBound:
    def test_identity_projectors(self):
        rho = np.diag([0.5, 0.5]).astype(complex)
        success, bound, eps = bl.quantum_union_bound_check([np.eye(2)] * 3, rho)
        assert success == pytest.approx(1.0) and bound == pytest.approx(1.0) and eps == pytest.approx(0.0)

    def test_single_projector(self):
        rho = np.diag([0.9, 0.1]).astype(complex)
        success, bound, eps = bl.quantum_union_bound_check([np.diag([1.0, 0.0])], rho)
        assert success == pytest.approx(0.9) and eps == pytest.approx(0.1)
        assert bound == pytest.approx(1 - math.sqrt(0.1))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40)
    def test_random_instances(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.choice([2, 4, 8, 16]))
        proj, rho = bl.random_union_bound_instance(rng, dim, 5, 0.01)
        for k in proj:
            assert np.allclose(k @ k, k)
            assert np.real(np.trace(k @ rho)) >= 1 - 0.01 - 1e-12
        success, bound, _ = bl.quantum_union_bound_check(proj, rho)
        assert success >= bound

    def test_majority_projector(self):
        for letter in "XYZ":
            plus = bl.majority_projector(letter, 3, 1)
            minus = bl.majority_projector(letter, 3, -1)
            assert np.allclose(plus + minus, np.eye(8))
            assert np.allclose(plus @ plus, plus)
            assert np.trace(plus).real == pytest.approx(4)

    def test_sequential_signs(self):
        rho = (np.eye(2) + 0.6 * oracles.PAULI["Z"] + 0.3 * oracles.PAULI["X"]) / 2
        success, bound, eps, independent = bl.sequential_sign_success(rho, ["Z"], 9)
        assert success == pytest.approx(independent)
        assert success >= bound
