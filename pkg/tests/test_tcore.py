import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from tprod import tcore
from tprod.errors import ResourceError, ShapeError
from tprod.tcore import TTensor, bcirc, bcirc_inverse, fold, htranspose, identity, \
    inner, tprod, transpose, unfold

from conftest import naive_bcirc, naive_tprod, naive_unfold, random_tensor, \
    random_symmetric_tensor


class TestBcirc:
    def test_scalar_tube_pair(self):
        t = TTensor(np.array([[[3.0, 5.0]]]))
        assert_allclose(bcirc(t), [[3.0, 5.0], [5.0, 3.0]])

    def test_identity_is_eye(self):
        assert_allclose(bcirc(identity(2, 2)), np.eye(4))

    def test_matches_index_shuffle_oracle(self, rng):
        t = random_tensor(rng, 2, 3, 4)
        mat = bcirc(t)
        assert_allclose(mat, naive_bcirc(t))
        # block column 0 stacks the slices in order
        for i in range(4):
            assert_allclose(mat[2 * i:2 * (i + 1), :3], t.data[:, :, i])

    def test_inverse_roundtrip_exact(self, rng):
        t = random_tensor(rng, 3, 2, 5)
        back = bcirc_inverse(bcirc(t), 3, 2, 5)
        assert np.array_equal(back.data, t.data)

    def test_element_budget(self, rng):
        t = random_tensor(rng, 4, 4, 4)
        with pytest.raises(ResourceError):
            bcirc(t, budget=100)

    def test_inverse_shape_check(self):
        with pytest.raises(ShapeError):
            bcirc_inverse(np.zeros((4, 4)), 3, 2, 5)


class TestUnfoldFold:
    def test_tube_stack(self):
        t = TTensor(np.array([[[1.0, 2.0, 3.0]]]))
        assert_allclose(unfold(t), [[1.0], [2.0], [3.0]])

    def test_zero(self):
        assert not unfold(tcore.zeros(2, 3, 2)).any()

    def test_roundtrip_bit_exact(self, rng):
        for _ in range(100):
            m, n, p = rng.integers(1, 5, size=3)
            t = random_tensor(rng, m, n, p, complex_entries=bool(rng.integers(2)))
            assert np.array_equal(fold(unfold(t), int(m)).data, t.data)

    def test_fold_rejects_bad_rows(self):
        with pytest.raises(ShapeError):
            fold(np.zeros((7, 2)), 3)


class TestTprod:
    def test_scalar_tube_closed_form(self):
        c = TTensor(np.array([[[1.0, 2.0]]]))
        d = TTensor(np.array([[[5.0, -3.0]]]))
        out = tprod(c, d)
        # fold(bcirc(c) @ unfold(d)) for 1x1x2: (c1 d1 + c2 d2, c2 d1 + c1 d2)
        assert_allclose(out.data[0, 0], [1 * 5 + 2 * -3, 2 * 5 + 1 * -3], atol=1e-14)

    def test_identity_law(self, rng):
        d = random_tensor(rng, 3, 2, 4)
        out = tprod(identity(3, 4), d)
        assert_allclose(out.data, d.data, atol=1e-13)

    def test_zero_annihilates(self, rng):
        d = random_tensor(rng, 2, 2, 3)
        assert not tprod(tcore.zeros(2, 2, 3), d).data.any()

    def test_matches_bcirc_unfold_oracle(self, rng):
        for _ in range(25):
            m, n, l, p = rng.integers(1, 5, size=4)
            c = random_tensor(rng, m, n, p)
            d = random_tensor(rng, n, l, p)
            assert_allclose(tprod(c, d).data, naive_tprod(c, d),
                            rtol=1e-12, atol=1e-12)

    def test_complex_operands(self, rng):
        c = random_tensor(rng, 2, 2, 3, complex_entries=True)
        d = random_tensor(rng, 2, 2, 3, complex_entries=True)
        out = tprod(c, d)
        assert out.field == "complex"
        assert_allclose(out.data, naive_tprod(c, d), rtol=1e-12, atol=1e-12)

    def test_real_pair_stays_real(self, rng):
        out = tprod(random_tensor(rng, 2, 2, 3), random_tensor(rng, 2, 2, 3))
        assert out.field == "real"

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeError):
            tprod(random_tensor(rng, 2, 3, 2), random_tensor(rng, 2, 2, 2))

    def test_associative(self, rng):
        for _ in range(10):
            dims = rng.integers(1, 5, size=4)
            a = random_tensor(rng, dims[0], dims[1], 3)
            b = random_tensor(rng, dims[1], dims[2], 3)
            c = random_tensor(rng, dims[2], dims[3], 3)
            left = tprod(tprod(a, b), c)
            right = tprod(a, tprod(b, c))
            scale = max(1.0, left.max_abs())
            assert np.max(np.abs(left.data - right.data)) <= 1e-12 * scale

    def test_distributes_over_addition(self, rng):
        a = random_tensor(rng, 3, 2, 4)
        b = random_tensor(rng, 2, 3, 4)
        c = random_tensor(rng, 2, 3, 4)
        lhs = tprod(a, b + c)
        rhs = tprod(a, b) + tprod(a, c)
        assert np.max(np.abs(lhs.data - rhs.data)) <= 1e-12 * max(1.0, lhs.max_abs())

    def test_ring_homomorphism(self, rng):
        for _ in range(10):
            a = random_tensor(rng, 3, 2, 4)
            b = random_tensor(rng, 2, 2, 4)
            lhs = bcirc(tprod(a, b))
            rhs = bcirc(a) @ bcirc(b)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.abs(rhs).max())


class TestTransposes:
    def test_symmetric_fixed_point(self, rng):
        s = random_symmetric_tensor(rng, 3, 4)
        assert_allclose(transpose(s).data, s.data)

    def test_involution(self, rng):
        t = random_tensor(rng, 2, 4, 3)
        assert np.array_equal(transpose(transpose(t)).data, t.data)
        tc = random_tensor(rng, 2, 4, 3, complex_entries=True)
        assert np.array_equal(htranspose(htranspose(tc)).data, tc.data)

    def test_bcirc_transpose_identity(self, rng):
        for _ in range(50):
            m, n, p = rng.integers(1, 5, size=3)
            t = random_tensor(rng, m, n, p)
            assert_allclose(naive_bcirc(transpose(t)), naive_bcirc(t).T)

    def test_bcirc_htranspose_identity(self, rng):
        t = random_tensor(rng, 3, 2, 4, complex_entries=True)
        assert_allclose(naive_bcirc(htranspose(t)), naive_bcirc(t).conj().T)

    def test_anti_homomorphism(self, rng):
        a = random_tensor(rng, 3, 2, 4)
        b = random_tensor(rng, 2, 3, 4)
        lhs = transpose(tprod(a, b))
        rhs = tprod(transpose(b), transpose(a))
        assert np.max(np.abs(lhs.data - rhs.data)) <= 1e-12 * max(1.0, lhs.max_abs())


class TestIdentityAndInner:
    def test_identity_scalar(self):
        assert identity(1, 1).data[0, 0, 0] == 1.0

    def test_identity_slices(self):
        t = identity(2, 3)
        assert_allclose(t.slice(0), np.eye(2))
        assert not t.data[:, :, 1:].any()

    def test_inner_zero(self, rng):
        d = random_tensor(rng, 2, 3, 2)
        assert inner(tcore.zeros(2, 3, 2), d) == 0.0

    def test_inner_self_is_frobenius_squared(self, rng):
        c = random_tensor(rng, 3, 2, 4, complex_entries=True)
        val = inner(c, c)
        assert_allclose(val, np.sum(np.abs(c.data) ** 2))
        assert val.imag == pytest.approx(0.0, abs=1e-12)

    def test_inner_matches_bcirc_scaling(self, rng):
        for _ in range(10):
            c = random_tensor(rng, 2, 3, 4, complex_entries=True)
            d = random_tensor(rng, 2, 3, 4, complex_entries=True)
            lhs = inner(c, d)
            rhs = np.vdot(naive_bcirc(c), naive_bcirc(d)) / 4
            assert_allclose(lhs, rhs, rtol=1e-12)

    def test_inner_shape_mismatch(self, rng):
        with pytest.raises(ShapeError):
            inner(random_tensor(rng, 2, 2, 2), random_tensor(rng, 2, 2, 3))


class TestFieldHandling:
    def test_truncation_of_roundoff_imag(self):
        freq = np.fft.fft(np.random.default_rng(0).standard_normal((2, 2, 3)), axis=2)
        out = tcore._ifft_with_field(freq, want_real=True, op="test")
        assert out.field == "real"

    def test_promotion_warns_on_genuine_imag(self):
        freq = np.zeros((1, 1, 2), dtype=complex)
        freq[0, 0, 0] = 1.0 + 2.0j  # not conjugate-symmetric
        with pytest.warns(RuntimeWarning):
            out = tcore._ifft_with_field(freq, want_real=True, op="test")
        assert out.field == "complex"

    def test_tensor_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            TTensor(np.full((1, 1, 1), np.nan))

    def test_immutable(self, rng):
        t = random_tensor(rng, 2, 2, 2)
        with pytest.raises(ValueError):
            t.data[0, 0, 0] = 7.0
        with pytest.raises(AttributeError):
            t.data = None


class TestTtjFormat:
    def test_roundtrip_real(self, tmp_path, rng):
        t = random_tensor(rng, 2, 3, 4)
        path = tmp_path / "t.ttj"
        tcore.save_ttj(t, path)
        obj = json.loads(path.read_text())
        assert obj["field"] == "real" and len(obj["data"]) == 24
        back = tcore.load_ttj(path)
        assert np.array_equal(back.data, t.data)

    def test_roundtrip_complex(self, tmp_path, rng):
        t = random_tensor(rng, 3, 1, 2, complex_entries=True)
        path = tmp_path / "t.ttj"
        tcore.save_ttj(t, path)
        obj = json.loads(path.read_text())
        assert obj["field"] == "complex"
        assert isinstance(obj["data"][0], list)
        back = tcore.load_ttj(path)
        assert np.array_equal(back.data, t.data)

    def test_slice_major_order(self):
        t = TTensor(np.arange(8.0).reshape(2, 2, 2))
        data = tcore.to_ttj_dict(t)["data"]
        # (slice, row, col): slice 0 is entries [:, :, 0]
        assert data[:4] == [0.0, 2.0, 4.0, 6.0]

    def test_malformed(self):
        with pytest.raises(ValueError):
            tcore.from_ttj_dict({"m": 1, "n": 1, "p": 2, "field": "real", "data": [1]})
        with pytest.raises(ValueError):
            tcore.from_ttj_dict({"m": 1, "n": 1, "p": 1, "field": "bogus", "data": [1]})


@settings(max_examples=30, deadline=None)
@given(m=st.integers(1, 4), n=st.integers(1, 4), p=st.integers(1, 5),
       seed=st.integers(0, 2**31))
def test_fold_unfold_roundtrip_property(m, n, p, seed):
    t = random_tensor(np.random.default_rng(seed), m, n, p)
    assert np.array_equal(fold(unfold(t), m).data, t.data)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_tprod_oracle_property(seed):
    rng = np.random.default_rng(seed)
    m, n, l, p = rng.integers(1, 4, size=4)
    c = random_tensor(rng, m, n, p)
    d = random_tensor(rng, n, l, p)
    assert_allclose(tprod(c, d).data, naive_tprod(c, d), rtol=1e-11, atol=1e-12)
