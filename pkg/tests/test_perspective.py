import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perspec.funclib import HalfSum, LogMean, Power, WeightedArith, WeightedHarm, catalog
from perspec.matcore import DomainViolation, SupportViolation, SymMatrix, mat_pow, op_norm
from perspec.perspective import (
    adjoint_identity_check,
    d_ratio,
    dotted_exp,
    eps_limit,
    kantorovich,
    log_euclidean,
    loewner_le,
    loewner_margin,
    mean_sigma,
    perspective,
    perspective_singular,
    regularized_log_sum_exp,
    support_contained,
    transpose_identity_check,
    weighted_geo,
)


def _spd(rng, n, cond=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return SymMatrix((q * np.geomspace(1.0, cond, n)) @ q.T)


def _psd_rank(rng, n, r, basis=None):
    q = basis if basis is not None else np.linalg.qr(rng.standard_normal((n, n)))[0]
    w = np.zeros(n)
    w[:r] = rng.uniform(0.5, 3.0, r)
    return SymMatrix((q * w) @ q.T), q


class TestPerspective:
    def test_commuting_reduces_to_scalars(self):
        a = SymMatrix.diag([1.0, 4.0, 9.0])
        b = SymMatrix.diag([2.0, 1.0, 3.0])
        f = LogMean()
        want = np.diag([2.0, 1.0, 3.0]) * f.eval(np.array([0.5, 4.0, 3.0]))
        np.testing.assert_allclose(perspective(f, a, b).a, np.diag(np.diag(want)), atol=1e-12)

    def test_power_perspective_is_geometric_mean(self):
        rng = np.random.default_rng(0)
        a, b = _spd(rng, 4), _spd(rng, 4)
        br, bi = mat_pow(b, 0.5).a, mat_pow(b, -0.5).a
        c = SymMatrix(bi @ a.a @ bi)
        want = br @ mat_pow(c, 0.3).a @ br
        np.testing.assert_allclose(perspective(Power(0.3), a, b).a, want, atol=1e-10)
        np.testing.assert_allclose(weighted_geo(0.3, b, a).a, want, atol=1e-10)

    def test_arith_mean(self):
        rng = np.random.default_rng(1)
        a, b = _spd(rng, 3), _spd(rng, 3)
        np.testing.assert_allclose(mean_sigma(WeightedArith(0.3), a, b).a, 0.7 * a.a + 0.3 * b.a, atol=1e-10)

    def test_harmonic_mean(self):
        rng = np.random.default_rng(2)
        a, b = _spd(rng, 3), _spd(rng, 3)
        want = np.linalg.inv(0.5 * np.linalg.inv(a.a) + 0.5 * np.linalg.inv(b.a))
        np.testing.assert_allclose(mean_sigma(WeightedHarm(0.5), a, b).a, want, atol=1e-10)

    def test_homogeneous(self):
        rng = np.random.default_rng(3)
        a, b = _spd(rng, 3), _spd(rng, 3)
        f = HalfSum(0.3)
        np.testing.assert_allclose(perspective(f, a * 2.5, b * 2.5).a, 2.5 * perspective(f, a, b).a, rtol=1e-10)

    def test_needs_pd_b(self):
        with pytest.raises(DomainViolation):
            perspective(LogMean(), SymMatrix.identity(2), SymMatrix.diag([1.0, 0.0]))

    @pytest.mark.parametrize("name", list(catalog()))
    def test_transpose_and_adjoint_identities(self, name):
        f = catalog()[name]
        rng = np.random.default_rng(4)
        for _ in range(5):
            a, b = _spd(rng, 4, 50.0), _spd(rng, 4, 50.0)
            scale = max(1.0, op_norm(perspective(f, b, a)))
            assert transpose_identity_check(f, a, b) <= 1e-8 * scale
            assert adjoint_identity_check(f, a, b) <= 1e-8 * scale


class TestKantorovich:
    @pytest.mark.parametrize("xi", [1.0, 1.5, 4.0, 100.0])
    def test_p_one(self, xi):
        assert kantorovich(xi, 1.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("xi", [1.5, 4.0, 100.0])
    def test_p_two_closed_form(self, xi):
        assert kantorovich(xi, 2.0) == pytest.approx((xi + 1) ** 2 / (4 * xi), rel=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(1.01, 1e3), st.floats(0.05, 6.0).filter(lambda p: abs(p - 1) > 1e-3))
    def test_side_of_one(self, xi, p):
        k = kantorovich(xi, p)
        if p > 1:
            assert k >= 1.0 - 1e-12
        else:
            assert 0.0 < k <= 1.0 + 1e-12

    def test_rejects_small_xi(self):
        with pytest.raises(DomainViolation):
            kantorovich(0.5, 2.0)


class TestLoewner:
    def test_margin(self):
        x = SymMatrix.diag([1.0, 2.0])
        y = SymMatrix.diag([1.5, 2.0])
        assert loewner_margin(x, y) == pytest.approx(0.0, abs=1e-12)
        assert loewner_le(x, y)
        assert not loewner_le(y, x)


class TestSingular:
    def test_limit_matches_closed_form(self):
        rng = np.random.default_rng(5)
        n = 4
        for r in (n - 1, n - 2):
            b, q = _psd_rank(rng, n, r)
            a, _ = _psd_rank(rng, n, r, basis=q)
            f = LogMean()
            rep = eps_limit(f, a, b)
            closed = perspective_singular(f, a, b)
            scale = max(1.0, op_norm(closed))
            assert rep.cauchy
            assert op_norm(SymMatrix(rep.final.a - closed.a)) <= 1e-5 * scale

    def test_d_ratio_on_full_rank_is_congruence(self):
        rng = np.random.default_rng(6)
        a, b = _spd(rng, 3), _spd(rng, 3)
        bi = mat_pow(b, -0.5).a
        np.testing.assert_allclose(d_ratio(a, b).a, bi @ a.a @ bi, atol=1e-10)

    def test_support_containment(self):
        a = SymMatrix.diag([1.0, 0.0, 0.0])
        b = SymMatrix.diag([1.0, 1.0, 0.0])
        assert support_contained(a, b)
        assert not support_contained(b, a)

    def test_divergence_flagged(self):
        a = SymMatrix([[1.0, 0.0], [0.0, 0.0]])
        b = SymMatrix([[0.5, 0.5], [0.5, 0.5]])
        rep = eps_limit(Power(-0.5), a, b)
        assert rep.diverged and not rep.cauchy


class TestDottedExp:
    def test_full_rank_is_log_euclidean(self):
        rng = np.random.default_rng(7)
        a, b = _spd(rng, 3), _spd(rng, 3)
        np.testing.assert_allclose(dotted_exp(0.3, 0.7, a, b).a, log_euclidean(0.3, a, b).a, rtol=1e-10)

    def test_shared_support_matches_regularization(self):
        rng = np.random.default_rng(9)
        a, q = _psd_rank(rng, 4, 2)
        b, _ = _psd_rank(rng, 4, 2, basis=q)
        got = regularized_log_sum_exp(0.6, 0.4, a, b, eps=1e-6)
        np.testing.assert_allclose(got.a, dotted_exp(0.6, 0.4, a, b).a, atol=1e-4)

    def test_positive_weights_match_regularization(self):
        rng = np.random.default_rng(8)
        a, _ = _psd_rank(rng, 4, 3)
        b, _ = _psd_rank(rng, 4, 3)
        want = dotted_exp(0.4, 0.6, a, b)
        errs = [op_norm(SymMatrix(regularized_log_sum_exp(0.4, 0.6, a, b, log_eps=le).a - want.a))
                for le in (-1e3, -1e4, -1e5, -1e6)]
        assert errs[-1] <= 1e-4
        assert all(e1 < e0 for e0, e1 in zip(errs, errs[1:]))

    def test_negative_weight_matches_regularization(self):
        rng = np.random.default_rng(10)
        b, q = _psd_rank(rng, 4, 3)
        inner = q.copy()
        inner[:, :3] = q[:, :3] @ np.linalg.qr(rng.standard_normal((3, 3)))[0]
        a, _ = _psd_rank(rng, 4, 2, basis=inner)
        want = dotted_exp(1.5, -0.5, a, b)
        got = regularized_log_sum_exp(1.5, -0.5, a, b, log_eps=-1e6)
        np.testing.assert_allclose(got.a, want.a, atol=1e-4)

    def test_oracle_needs_one_eps(self):
        a = SymMatrix.identity(2)
        with pytest.raises(DomainViolation):
            regularized_log_sum_exp(0.5, 0.5, a, a)

    def test_negative_weight_needs_support_order(self):
        a = SymMatrix.diag([1.0, 1.0])
        b = SymMatrix.diag([1.0, 0.0])
        with pytest.raises(DomainViolation):
            dotted_exp(1.5, -0.5, a, b)

    def test_trivial_meet(self):
        a = SymMatrix.diag([1.0, 0.0])
        b = SymMatrix.diag([0.0, 1.0])
        np.testing.assert_allclose(dotted_exp(0.5, 0.5, a, b).a, 0.0)
        with pytest.raises(SupportViolation):
            dotted_exp(0.5, 0.5, a, b, strict=True)
