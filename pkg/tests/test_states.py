"""State generators: determinism, distributions, families, serialization."""
import json

import numpy as np
import pytest

from polycoa import linalg, states
from polycoa.qtypes import DensityMatrix, Ket


class TestBasisKet:
    def test_index_layout_first_subsystem_most_significant(self):
        k = states.basis_ket([2, 3], (1, 2))
        assert k.amplitudes[1 * 3 + 2] == 1.0 and k.norm_squared == 1.0

    def test_bad_indices(self):
        with pytest.raises(ValueError):
            states.basis_ket([2, 2], (0, 2))
        with pytest.raises(ValueError):
            states.basis_ket([2, 2], (0,))


class TestHaarRandom:
    def test_normalized_and_deterministic(self):
        a = states.haar_random_pure([2, 2], 7)
        b = states.haar_random_pure([2, 2], 7)
        assert abs(a.norm_squared - 1) < 1e-12
        assert np.array_equal(a.amplitudes, b.amplitudes)
        c = states.haar_random_pure([2, 2], 8)
        assert not np.array_equal(a.amplitudes, c.amplitudes)

    def test_uniform_moment(self):
        # Mean of |a_0|^2 over the sphere in C^4 is 1/4.
        rng = np.random.default_rng(100)
        vals = [
            abs(states.haar_random_pure([4], rng).amplitudes[0]) ** 2
            for _ in range(10_000)
        ]
        assert abs(np.mean(vals) - 0.25) < 0.02

    def test_empty_dims_rejected(self):
        with pytest.raises(ValueError):
            states.haar_random_pure([], 0)


class TestRandomMixed:
    def test_rank_one_is_pure(self):
        rho = states.random_mixed_state([2, 2], 1, 5)
        purity = np.trace(rho.entries @ rho.entries).real
        assert abs(purity - 1) < 1e-9

    def test_numerical_rank_bounded(self):
        for rank in (1, 2, 3):
            rho = states.random_mixed_state([2, 3], rank, 40 + rank)
            ev = np.linalg.eigvalsh(rho.entries)
            assert (ev > 1e-9).sum() <= rank
            assert abs(rho.trace - 1) < 1e-12
            assert ev.min() > -1e-12

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            states.random_mixed_state([2, 2], 0, 1)
        with pytest.raises(ValueError):
            states.random_mixed_state([2, 2], 5, 1)

    def test_deterministic(self):
        a = states.random_mixed_state([3, 3], 2, 9)
        b = states.random_mixed_state([3, 3], 2, 9)
        assert np.array_equal(a.entries, b.entries)


class TestWClass:
    def test_single_excitation_layout(self):
        w = states.w_class_state([1 / np.sqrt(3)] * 3)
        nz = list(np.nonzero(w.amplitudes)[0])
        assert nz == [1, 2, 4]

    def test_product_edge_case(self):
        w = states.w_class_state([1.0, 0.0])
        assert w.amplitudes[2] == 1.0  # |10>

    def test_exactly_n_nonzero_amplitudes(self):
        rng = np.random.default_rng(50)
        a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a /= np.linalg.norm(a)
        w = states.w_class_state(a)
        assert (w.amplitudes != 0).sum() == 4

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            states.w_class_state([1.0, 1.0])

    def test_single_qubit_reductions(self):
        # Reduced onto any single qubit: eigenvalues {|a_k|^2, 1 - |a_k|^2}.
        rng = np.random.default_rng(51)
        a = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        a /= np.linalg.norm(a)
        w = states.w_class_state(a)
        dm = w.density_matrix()
        for k in range(5):
            red = linalg.partial_trace(dm, [k])
            ev = np.sort(np.linalg.eigvalsh(red.entries))
            p = abs(a[k]) ** 2
            assert np.allclose(ev, sorted([p, 1 - p]), atol=1e-12)


class TestGHZ:
    def test_bell(self):
        g = states.ghz_state(2)
        assert np.allclose(g.amplitudes, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])

    def test_three_qubits(self):
        g = states.ghz_state(3)
        assert list(np.nonzero(g.amplitudes)[0]) == [0, 7]

    def test_qudit_norm(self):
        g = states.ghz_state(4, 3)
        assert abs(g.norm_squared - 1) < 1e-12
        assert list(np.nonzero(g.amplitudes)[0]) == [0, 40, 80]

    def test_bad_args(self):
        with pytest.raises(ValueError):
            states.ghz_state(1)
        with pytest.raises(ValueError):
            states.ghz_state(2, 1)


class TestEnsembleFromIsometry:
    def test_identity_recovers_eigendecomposition(self):
        rho = states.random_mixed_state([2, 2], 3, 11)
        ens = states.ensemble_from_isometry(rho, np.eye(3))
        es = linalg.hermitian_eigensystem(rho)
        for i in range(3):
            assert abs(ens.members[i].norm_squared - es.eigenvalues[i]) < 1e-12

    def test_random_isometry_reconstructs(self):
        rng = np.random.default_rng(60)
        rho = states.random_mixed_state([2, 3], 3, 61)
        g = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        w, _ = np.linalg.qr(g)
        ens = states.ensemble_from_isometry(rho, w)
        assert len(ens.members) == 6
        assert np.abs(ens.density() - rho.entries).max() < 1e-10

    def test_bell_mixture_of_identity(self):
        i4 = DensityMatrix((2, 2), np.eye(4) / 4)
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        w = np.kron(h, h)  # real orthogonal 4x4
        ens = states.ensemble_from_isometry(i4, w)
        assert np.allclose(ens.weights, [0.25] * 4, atol=1e-12)
        assert np.abs(ens.density() - np.eye(4) / 4).max() < 1e-12

    def test_non_isometry_rejected(self):
        rho = states.random_mixed_state([2, 2], 2, 62)
        with pytest.raises(ValueError):
            states.ensemble_from_isometry(rho, np.ones((3, 2)))

    def test_too_few_members_rejected(self):
        rho = states.random_mixed_state([2, 2], 3, 63)
        with pytest.raises(ValueError):
            states.ensemble_from_isometry(rho, np.eye(3)[:, :2])

    def test_default_ensemble_size(self):
        assert states.default_ensemble_size(1) == 1
        assert states.default_ensemble_size(2) == 4
        assert states.default_ensemble_size(4) == 6


class TestBipartition:
    def test_ket_regrouping(self):
        psi = states.haar_random_pure([2, 3, 4], 70)
        b = states.bipartition_ket(psi, [1])
        assert b.dims == (3, 8)
        ref = psi.amplitudes.reshape(2, 3, 4).transpose(1, 0, 2).reshape(24)
        assert np.array_equal(b.amplitudes, ref)

    def test_ket_multi_index_cut(self):
        psi = states.haar_random_pure([2, 2, 2], 71)
        b = states.bipartition_ket(psi, [2, 0])
        assert b.dims == (4, 2)
        ref = psi.amplitudes.reshape(2, 2, 2).transpose(2, 0, 1).reshape(8)
        assert np.array_equal(b.amplitudes, ref)

    def test_dm_regrouping_consistent_with_ket(self):
        psi = states.haar_random_pure([2, 2, 3], 72)
        cut = [1, 2]
        bk = states.bipartition_ket(psi, cut).density_matrix()
        bd = states.bipartition_dm(psi.density_matrix(), cut)
        assert bd.dims == bk.dims
        assert np.abs(bd.entries - bk.entries).max() < 1e-14

    def test_invalid_cut(self):
        psi = states.haar_random_pure([2, 2], 73)
        for cut in ([], [0, 0], [3], [0, 1]):
            with pytest.raises(ValueError):
                states.bipartition_ket(psi, cut)


class TestSerialization:
    def test_ket_round_trip(self, tmp_path):
        psi = states.haar_random_pure([2, 3], 80)
        p = tmp_path / "ket.json"
        states.save_state(p, psi)
        back = states.load_state(p)
        assert isinstance(back, Ket)
        assert back.dims == psi.dims and back.normalized
        assert np.abs(back.amplitudes - psi.amplitudes).max() == 0

    def test_dm_round_trip(self, tmp_path):
        rho = states.random_mixed_state([2, 2], 2, 81)
        p = tmp_path / "dm.json"
        states.save_state(p, rho)
        back = states.load_state(p)
        assert isinstance(back, DensityMatrix)
        assert back.normalized
        assert np.abs(back.entries - rho.entries).max() == 0

    def test_subnormalized_flag_inferred(self):
        sub = Ket((2,), np.array([0.5, 0.0]), normalized=False)
        back = states.ket_from_json(states.ket_to_json(sub))
        assert not back.normalized

    def test_missing_field_rejected(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"dims": [2], "re": [1.0, 0.0]}))
        with pytest.raises(ValueError):
            states.load_state(p)

    def test_unserializable_type_rejected(self, tmp_path):
        with pytest.raises(TypeError):
            states.save_state(tmp_path / "x.json", np.eye(2))
