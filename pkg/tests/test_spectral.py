import numpy as np
import pytest
from numpy.testing import assert_allclose

from tprod import spectral, tcore
from tprod.errors import DomainError, NumericError, PreconditionError, ShapeError
from tprod.spectral import BlockSpectrum, FnSpec, Loewner, from_spectrum, \
    loewner_cmp, sym_factorize, t_eigenvalues, t_singular_values, tensor_fn, \
    to_spectrum
from tprod.tcore import TTensor, identity, tprod, transpose

from conftest import dft_blocks, naive_bcirc, random_symmetric_tensor, random_tensor


class TestSpectrumRoundtrip:
    def test_identity_blocks(self):
        s = to_spectrum(identity(3, 4))
        assert_allclose(s.blocks, np.broadcast_to(np.eye(3), (4, 3, 3)))

    def test_single_slice_gives_constant_blocks(self, rng):
        m = rng.standard_normal((3, 3))
        data = np.zeros((3, 3, 4))
        data[:, :, 0] = m
        s = to_spectrum(TTensor(data))
        for block in s.blocks:
            assert_allclose(block, m, atol=1e-14)

    def test_roundtrip(self, rng):
        t = random_tensor(rng, 3, 3, 5)
        back = from_spectrum(to_spectrum(t))
        assert_allclose(back.data, t.data, rtol=1e-12, atol=1e-14)

    def test_blocks_match_dft_similarity_oracle(self, rng):
        t = random_tensor(rng, 2, 2, 5)
        assert_allclose(to_spectrum(t).blocks, dft_blocks(t), atol=1e-12)

    def test_tprod_is_blockwise_product(self, rng):
        a = random_tensor(rng, 3, 3, 4)
        b = random_tensor(rng, 3, 3, 4)
        sa, sb = to_spectrum(a), to_spectrum(b)
        sab = to_spectrum(tprod(a, b))
        assert_allclose(sab.blocks, sa.blocks @ sb.blocks, rtol=1e-10, atol=1e-10)

    def test_nonsquare_rejected(self, rng):
        with pytest.raises(ShapeError):
            to_spectrum(random_tensor(rng, 2, 3, 2))

    def test_forced_real_rejects_asymmetric_spectrum(self):
        blocks = np.zeros((2, 1, 1), dtype=complex)
        blocks[0, 0, 0] = 1.0 + 1.0j
        with pytest.raises(NumericError):
            from_spectrum(BlockSpectrum(blocks), field="real")

    def test_ttj_roundtrip_with_domain_header(self, rng):
        s = to_spectrum(random_tensor(rng, 2, 2, 3))
        obj = s.to_ttj_dict()
        assert obj["domain"] == "frequency" and obj["field"] == "complex"
        back = BlockSpectrum.from_ttj_dict(obj)
        assert_allclose(back.blocks, s.blocks)
        with pytest.raises(ValueError):
            BlockSpectrum.from_ttj_dict({k: v for k, v in obj.items() if k != "domain"})


class TestEigenSystems:
    def test_identity_eigenvalues(self):
        ev = t_eigenvalues(identity(2, 3))
        assert_allclose(ev.values, np.ones(6))

    def test_scalar_tube_flip(self):
        t = TTensor(np.array([[[0.0, 1.0]]]))  # bcirc = [[0,1],[1,0]]
        ev = t_eigenvalues(t)
        assert_allclose(ev.values, [1.0, -1.0], atol=1e-14)

    def test_first_slice_diagonal(self):
        data = np.zeros((2, 2, 2))
        data[:, :, 0] = np.diag([4.0, -1.0])
        ev = t_eigenvalues(TTensor(data))
        assert_allclose(ev.values, [4.0, 4.0, -1.0, -1.0], atol=1e-14)

    def test_multiset_matches_bcirc_eig(self, rng):
        for _ in range(10):
            m, p = rng.integers(2, 5, size=2)
            t = random_symmetric_tensor(rng, m, p)
            ev = t_eigenvalues(t).values
            oracle = np.sort(np.linalg.eigvalsh(naive_bcirc(t)))[::-1]
            assert_allclose(ev, oracle, atol=1e-10)

    def test_singular_values_match_bcirc_svd(self, rng):
        t = random_tensor(rng, 3, 3, 4)
        sv = t_singular_values(t).values
        oracle = np.linalg.svd(naive_bcirc(t), compute_uv=False)
        assert_allclose(sv, oracle, atol=1e-10)

    def test_provenance_is_consistent(self, rng):
        t = random_symmetric_tensor(rng, 3, 4)
        ev = t_eigenvalues(t)
        blocks = spectral.hermitian_blocks(t)
        for val, blk, rank in zip(ev.values, ev.blocks, ev.ranks):
            w = np.sort(np.linalg.eigvalsh(blocks[blk]))[::-1]
            assert val == pytest.approx(w[rank], abs=1e-12)
        # within each block the ranks appear in descending value order
        for b in range(4):
            sel = ev.values[ev.blocks == b][np.argsort(ev.ranks[ev.blocks == b])]
            assert np.all(np.diff(sel) <= 1e-12)

    def test_symmetry_precondition(self, rng):
        with pytest.raises(PreconditionError):
            t_eigenvalues(random_tensor(rng, 3, 3, 2))

    def test_courant_fischer_order_statistics(self, rng):
        # the per-block counts of eigenvalues >= the global k-th largest
        # reproduce that value as min_i lambda_{i, k_i}
        t = random_symmetric_tensor(rng, 3, 3)
        blocks = spectral.hermitian_blocks(t)
        per_block = np.sort(np.linalg.eigvalsh(blocks), axis=1)[:, ::-1]
        ev = t_eigenvalues(t).values
        for k in range(1, len(ev) + 1):
            lam_k = ev[k - 1]
            counts = np.sum(per_block >= lam_k - 1e-12, axis=1)
            if counts.min() < 1:
                continue
            val = min(per_block[i, counts[i] - 1] for i in range(3))
            assert val == pytest.approx(lam_k, abs=1e-12)


class TestTensorFn:
    def test_exp_of_zero(self):
        out = tensor_fn(tcore.zeros(2, 2, 3), FnSpec.exp())
        assert_allclose(out.data, identity(2, 3).data, atol=1e-14)

    def test_power_one_is_identity_map(self, rng):
        t = random_symmetric_tensor(rng, 3, 2)
        assert_allclose(tensor_fn(t, FnSpec.power(1)).data, t.data, atol=1e-12)

    def test_spectral_mapping_exp(self, rng):
        t = random_symmetric_tensor(rng, 3, 2)
        lam = t_eigenvalues(t).values
        out = tensor_fn(t, FnSpec.exp())
        assert out.is_real
        assert_allclose(t_eigenvalues(out).values, np.sort(np.exp(lam))[::-1],
                        rtol=1e-12, atol=1e-12)

    def test_power_composition_on_tpd(self, rng):
        from tprod.ineq import random_tpd
        t = random_tpd(rng, 3, 2)
        ab = tensor_fn(tensor_fn(t, FnSpec.power(0.5)), FnSpec.power(3.0))
        direct = tensor_fn(t, FnSpec.power(1.5))
        assert np.max(np.abs(ab.data - direct.data)) <= 1e-9 * max(1, direct.max_abs())

    def test_log_domain_error_names_block(self, rng):
        t = random_symmetric_tensor(rng, 2, 2)  # indefinite almost surely
        with pytest.raises(DomainError, match="block"):
            tensor_fn(t, FnSpec.log())

    def test_complex_power_returns_spectrum(self, rng):
        from tprod.ineq import random_tpd
        t = random_tpd(rng, 2, 2)
        out = tensor_fn(t, FnSpec.complex_power(1 + 0.5j))
        assert isinstance(out, BlockSpectrum)
        # |C^{1+it}| has the same singular values as C for commuting blocks
        assert_allclose(t_singular_values(out).values,
                        t_singular_values(t).values, rtol=1e-10)

    def test_polynomial_and_relu(self):
        f = FnSpec.polynomial([1.0, 0.0, 2.0], s=2.0)
        assert f.apply_scalar(np.array([2.0]))[0] == pytest.approx((1 + 8) ** 2)
        assert f.degree == 2
        r = FnSpec.shifted_relu(1.5)
        assert_allclose(r.apply_scalar(np.array([-2.0, 1.0])), [0.0, 2.5])


class TestTraceDet:
    def test_trace_identity(self):
        assert spectral.trace(identity(3, 4)) == pytest.approx(3.0)

    def test_spectral_trace_identity(self):
        assert spectral.spectral_trace(identity(3, 4)) == pytest.approx(12.0)

    def test_trace_linear_and_cyclic(self, rng):
        a = random_tensor(rng, 3, 3, 2)
        b = random_tensor(rng, 3, 3, 2)
        assert spectral.trace(a + b * 2.0) == pytest.approx(
            spectral.trace(a) + 2.0 * spectral.trace(b))
        assert spectral.trace(tprod(a, b)) == pytest.approx(
            spectral.trace(tprod(b, a)), rel=1e-10)
        assert spectral.trace(transpose(a)) == pytest.approx(spectral.trace(a))

    def test_spectral_trace_is_block_trace_sum(self, rng):
        t = random_symmetric_tensor(rng, 3, 4)
        oracle = sum(np.trace(b).real for b in dft_blocks(t))
        assert spectral.spectral_trace(t) == pytest.approx(oracle)
        assert spectral.spectral_trace(t) == pytest.approx(
            4 * np.trace(t.slice(0)))

    def test_det_identity(self):
        assert spectral.det(identity(3, 2)) == pytest.approx(1.0)

    def test_det_scaled_identity(self):
        assert spectral.det(identity(2, 2) * 2.0) == pytest.approx(16.0)

    def test_det_matches_bcirc(self, rng):
        t = random_symmetric_tensor(rng, 3, 2)
        assert spectral.det(t) == pytest.approx(
            np.linalg.det(naive_bcirc(t)), rel=1e-8)

    def test_det_multiplicative(self, rng):
        a = random_symmetric_tensor(rng, 2, 3)
        b = random_symmetric_tensor(rng, 2, 3)
        ab = tprod(a, b)
        det_ab = np.prod(t_singular_values(ab).values) * np.sign(
            np.linalg.det(naive_bcirc(ab)))
        assert det_ab == pytest.approx(spectral.det(a) * spectral.det(b), rel=1e-7)


class TestLoewner:
    def test_identity_dominates_zero(self):
        assert loewner_cmp(identity(2, 2), tcore.zeros(2, 2, 2)) is Loewner.GE

    def test_reflexive(self, rng):
        a = random_symmetric_tensor(rng, 3, 2)
        assert loewner_cmp(a, a) is Loewner.GE

    def test_exp_dominates_linearization(self, rng):
        for t in (0.25, 0.5, 0.9):
            x = random_symmetric_tensor(rng, 3, 2) * 0.3
            lhs = tensor_fn(x * t, FnSpec.exp())
            rhs = identity(3, 2) + x * t
            assert loewner_cmp(lhs, rhs) is Loewner.GE

    def test_incomparable(self):
        data = np.zeros((2, 2, 1))
        data[:, :, 0] = np.diag([1.0, -1.0])
        assert loewner_cmp(TTensor(data), tcore.zeros(2, 2, 1)) is Loewner.INCOMPARABLE

    def test_tpd_tpsd_predicates(self, rng):
        from tprod.ineq import random_tpd
        assert spectral.is_tpd(random_tpd(rng, 2, 3))
        assert spectral.is_tpsd(identity(2, 2))
        assert not spectral.is_tpd(tcore.zeros(2, 2, 2))
        assert spectral.is_tpsd(tcore.zeros(2, 2, 2))


class TestSymFactorize:
    def _check(self, t, tol=1e-9):
        u, d = sym_factorize(t)
        assert u.is_real and d.is_real
        rec = tprod(transpose(u), tprod(d, u))
        scale = max(1.0, t.max_abs())
        assert np.max(np.abs(rec.data - t.data)) <= tol * scale
        utu = tprod(transpose(u), u)
        assert np.max(np.abs(utu.data - identity(t.m, t.p).data)) <= 1e-9
        for k in range(t.p):
            sl = d.slice(k)
            assert np.max(np.abs(sl - np.diag(np.diag(sl)))) <= 1e-12 * max(
                1.0, np.abs(sl).max())

    def test_identity(self):
        self._check(identity(3, 2))

    def test_diagonal_slices(self, rng):
        data = np.zeros((3, 3, 2))
        data[:, :, 0] = np.diag(rng.standard_normal(3))
        data[:, :, 1] = np.diag(rng.standard_normal(3))
        self._check(TTensor(data))

    def test_random_symmetric(self, rng):
        self._check(random_symmetric_tensor(rng, 4, 3))

    def test_eigenvalues_live_in_d(self, rng):
        t = random_symmetric_tensor(rng, 3, 4)
        _, d = sym_factorize(t)
        assert_allclose(t_eigenvalues(d).values, t_eigenvalues(t).values,
                        atol=1e-10)

    def test_rejects_asymmetric(self, rng):
        with pytest.raises(PreconditionError):
            sym_factorize(random_tensor(rng, 3, 3, 2))
