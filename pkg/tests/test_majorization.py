import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perspec.matcore import DimensionMismatch, SymMatrix, mat_pow
from perspec.majorization import log_majorize, log_supermajorize, weak_log_majorize, weak_majorize


def _spd(rng, n, cond=100.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return SymMatrix((q * np.geomspace(1.0, cond, n)) @ q.T)


class TestDiagonal:
    def test_weak_log(self):
        a = SymMatrix.diag([4.0, 1.0])
        b = SymMatrix.diag([5.0, 1.0])
        v = weak_log_majorize(a, b)
        assert v.holds
        np.testing.assert_allclose(v.margins, [np.log(5 / 4), np.log(5 / 4)])
        assert not weak_log_majorize(b, a).holds

    def test_log_needs_equal_det(self):
        a = SymMatrix.diag([2.0, 2.0])
        b = SymMatrix.diag([4.0, 1.0])
        assert log_majorize(a, b).holds
        assert not log_majorize(a, SymMatrix.diag([4.0, 2.0])).holds

    def test_supermajorize(self):
        a = SymMatrix.diag([3.0, 2.0])
        b = SymMatrix.diag([4.0, 1.0])
        assert log_supermajorize(a, b).holds
        assert not log_supermajorize(b, a).holds

    def test_weak_sums(self):
        assert weak_majorize(SymMatrix.diag([1.0, 1.0]), SymMatrix.diag([2.0, 0.0])).holds
        v = weak_majorize(SymMatrix.diag([3.0, 0.0]), SymMatrix.diag([2.0, 0.5]))
        assert not v.holds and v.worst_k == 1

    def test_singular_conventions(self):
        z = SymMatrix.diag([1.0, 0.0])
        assert weak_log_majorize(z, SymMatrix.diag([1.0, 0.0])).holds
        assert weak_log_majorize(z, SymMatrix.diag([1.0, 1e-3])).holds
        assert not weak_log_majorize(SymMatrix.diag([1.0, 1e-3]), z).holds

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatch):
            weak_log_majorize(SymMatrix.identity(2), SymMatrix.identity(3))


class TestAraki:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 6), st.floats(1.0, 3.0))
    def test_araki_lieb_thirring(self, seed, n, r):
        # (B^1/2 A B^1/2)^r <_log B^r/2 A^r B^r/2 for r >= 1
        # cond 10 keeps cond^(2r) inside the zero-eigenvalue threshold
        rng = np.random.default_rng(seed)
        a, b = _spd(rng, n, 10.0), _spd(rng, n, 10.0)
        rb = mat_pow(b, 0.5).a
        lhs = mat_pow(SymMatrix(rb @ a.a @ rb), r)
        rbr = mat_pow(b, r / 2).a
        rhs = SymMatrix(rbr @ mat_pow(a, r).a @ rbr)
        assert log_majorize(lhs, rhs).holds

    def test_reverse_fails_somewhere(self):
        rng = np.random.default_rng(3)
        found = False
        for _ in range(20):
            a, b = _spd(rng, 3), _spd(rng, 3)
            rb = mat_pow(b, 0.5).a
            lhs = mat_pow(SymMatrix(rb @ a.a @ rb), 2.0)
            rhs = SymMatrix(b.a @ mat_pow(a, 2.0).a @ b.a)
            found |= not weak_log_majorize(rhs, lhs).holds
        assert found
