import numpy as np
import pytest
from numpy.testing import assert_allclose

from tprod import norms, spectral, tcore
from tprod.errors import ParameterError, PreconditionError
from tprod.norms import GaugeSpec, gauge_norm, holder_gauge_check, \
    unitary_invariance_check
from tprod.spectral import FnSpec, sym_factorize, t_singular_values, tensor_fn
from tprod.tcore import TTensor, htranspose, identity, tprod

from conftest import naive_bcirc, random_symmetric_tensor, random_tensor

GAUGES = [GaugeSpec.ky_fan(1), GaugeSpec.ky_fan(3), GaugeSpec.schatten(1.5),
          GaugeSpec.schatten(2.0), GaugeSpec.spectral(), GaugeSpec.trace_norm()]


class TestGaugeNorm:
    def test_kyfan_identity(self):
        eye = identity(2, 2)
        assert gauge_norm(eye, GaugeSpec.ky_fan(1)) == pytest.approx(1.0)
        assert gauge_norm(eye, GaugeSpec.ky_fan(4)) == pytest.approx(4.0)

    def test_kyfan_matches_bcirc_svd(self, rng):
        for _ in range(10):
            t = random_tensor(rng, 3, 3, 3)
            sv = np.linalg.svd(naive_bcirc(t), compute_uv=False)
            for k in (1, 4, 9):
                assert gauge_norm(t, GaugeSpec.ky_fan(k)) == pytest.approx(
                    np.sum(sv[:k]), rel=1e-10)

    def test_schatten2_is_bcirc_frobenius(self, rng):
        t = random_tensor(rng, 2, 2, 4)
        assert gauge_norm(t, GaugeSpec.schatten(2)) == pytest.approx(
            np.linalg.norm(naive_bcirc(t)), rel=1e-12)

    def test_extremes_collapse(self, rng):
        t = random_tensor(rng, 2, 2, 3)
        sv = t_singular_values(t).values
        assert gauge_norm(t, GaugeSpec.spectral()) == pytest.approx(sv[0])
        assert gauge_norm(t, GaugeSpec.ky_fan(1)) == pytest.approx(sv[0])
        assert gauge_norm(t, GaugeSpec.trace_norm()) == pytest.approx(sv.sum())
        assert gauge_norm(t, GaugeSpec.schatten(1)) == pytest.approx(sv.sum())
        assert gauge_norm(t, GaugeSpec.ky_fan(sv.size)) == pytest.approx(sv.sum())

    def test_k_out_of_range(self, rng):
        t = random_tensor(rng, 2, 2, 2)
        with pytest.raises(ParameterError):
            gauge_norm(t, GaugeSpec.ky_fan(5))
        with pytest.raises(ParameterError):
            GaugeSpec.ky_fan(0)

    def test_kyfan_monotone_in_k(self, rng):
        t = random_tensor(rng, 3, 3, 2)
        vals = [gauge_norm(t, GaugeSpec.ky_fan(k)) for k in range(1, 7)]
        assert np.all(np.diff(vals) >= -1e-12)

    def test_schatten_nonincreasing_in_q_on_contraction(self, rng):
        t = random_tensor(rng, 3, 3, 2)
        t = t * (0.9 / gauge_norm(t, GaugeSpec.spectral()))
        vals = [gauge_norm(t, GaugeSpec.schatten(q)) for q in (1, 1.5, 2, 3, 6)]
        assert np.all(np.diff(vals) <= 1e-12)

    def test_triangle_inequality(self, rng):
        for g in GAUGES:
            a = random_tensor(rng, 3, 3, 2)
            b = random_tensor(rng, 3, 3, 2)
            lhs = gauge_norm(a + b, g)
            rhs = gauge_norm(a, g) + gauge_norm(b, g)
            assert lhs <= rhs + 1e-10 * max(1.0, rhs)

    def test_topk_power_sums(self, rng):
        # Ky Fan k of |T|^s equals the sum of the top-k singular values^s
        t = random_symmetric_tensor(rng, 3, 2)
        gram = tprod(htranspose(t), t)
        absT = tensor_fn(gram, FnSpec.power(0.5))
        sv = t_singular_values(t).values
        for s in (1.0, 2.0, 3.5):
            powered = tensor_fn(absT, FnSpec.power(s))
            for k in (1, 3, 6):
                assert gauge_norm(powered, GaugeSpec.ky_fan(k)) == pytest.approx(
                    np.sum(sv[:k] ** s), rel=1e-9)


class TestGaugeSpecParsing:
    def test_parse(self):
        assert GaugeSpec.parse("kyfan:3").k == 3
        assert GaugeSpec.parse("schatten:2.5").q == 2.5
        assert GaugeSpec.parse("spectral").kind == "spectral"
        assert GaugeSpec.parse("trace").kind == "trace"
        with pytest.raises(ParameterError):
            GaugeSpec.parse("nuclear")

    def test_custom_gauge_accepts_lq(self):
        g = GaugeSpec.custom(lambda v: float(np.sum(v ** 3) ** (1 / 3)))
        vals = np.array([3.0, 1.0, 2.0])
        assert g.value(vals) == pytest.approx(np.sum(vals ** 3) ** (1 / 3))

    def test_custom_gauge_rejects_inhomogeneous(self):
        with pytest.raises(ParameterError):
            GaugeSpec.custom(lambda v: float(np.sum(v) + 1.0))

    def test_custom_gauge_rejects_order_dependent(self):
        with pytest.raises(ParameterError):
            GaugeSpec.custom(lambda v: float(v[0] + 0.5 * v[-1]))


class TestUnitaryInvariance:
    def test_identity_rotation_exact(self, rng):
        t = random_symmetric_tensor(rng, 3, 2)
        rep = unitary_invariance_check(t, identity(3, 2), GaugeSpec.ky_fan(2))
        assert rep.passed and abs(rep.worst_margin) <= 1e-12

    def test_factorization_rotation(self, rng):
        t = random_tensor(rng, 3, 3, 3)
        u, _ = sym_factorize(random_symmetric_tensor(rng, 3, 3))
        rep = unitary_invariance_check(t, u, GaugeSpec.ky_fan(3))
        assert rep.passed

    def test_schatten2_rotation_with_frobenius_oracle(self, rng):
        t = random_tensor(rng, 3, 3, 3)
        u, _ = sym_factorize(random_symmetric_tensor(rng, 3, 3))
        rep = unitary_invariance_check(t, u, GaugeSpec.schatten(2))
        assert rep.passed
        rotated = tprod(u, t)
        assert np.linalg.norm(naive_bcirc(rotated)) == pytest.approx(
            np.linalg.norm(naive_bcirc(t)), rel=1e-10)

    def test_rejects_nonorthogonal(self, rng):
        t = random_symmetric_tensor(rng, 2, 2)
        with pytest.raises(PreconditionError):
            unitary_invariance_check(t, t, GaugeSpec.spectral())


class TestHolder:
    def test_equal_vectors_tight(self):
        v = np.array([2.0, 1.0, 0.5])
        rep = holder_gauge_check([v, v, v], [0.2, 0.3, 0.5], GaugeSpec.ky_fan(2))
        assert rep.passed and abs(rep.worst_margin) <= 1e-12

    def test_two_vectors_all_kyfan_orders(self, rng):
        b1, b2 = rng.random(6) * 2, rng.random(6) * 2
        for k in range(1, 7):
            rep = holder_gauge_check([b1, b2], [0.5, 0.5], GaugeSpec.ky_fan(k))
            assert rep.passed
            # direct re-evaluation of both sides
            lhs = np.sum(np.sort(np.sqrt(b1 * b2))[::-1][:k])
            rhs = np.sqrt(np.sum(np.sort(b1)[::-1][:k]) * np.sum(np.sort(b2)[::-1][:k]))
            assert rep.witness["lhs"] == pytest.approx(lhs)
            assert rep.witness["rhs"] == pytest.approx(rhs)

    def test_four_vectors_schatten(self, rng):
        vecs = [rng.random(5) for _ in range(4)]
        w = rng.dirichlet(np.ones(4))
        rep = holder_gauge_check(vecs, w, GaugeSpec.schatten(2))
        assert rep.passed

    def test_weight_violations(self, rng):
        v = rng.random(4)
        with pytest.raises(ParameterError):
            holder_gauge_check([v, v], [0.6, 0.6], GaugeSpec.spectral())
        with pytest.raises(ParameterError):
            holder_gauge_check([v, v], [1.2, -0.2], GaugeSpec.spectral())
        with pytest.raises(ParameterError):
            holder_gauge_check([v, -v], [0.5, 0.5], GaugeSpec.spectral())
