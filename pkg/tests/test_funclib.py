import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perspec.funclib import (
    Adjoint,
    Dual,
    FnParseError,
    Geodesic,
    HalfSum,
    LogMean,
    NumericInverse,
    Power,
    Subst,
    TPowTimes,
    Transpose,
    WeightedArith,
    WeightedHarm,
    catalog,
    classify,
    compose_inverse_arg,
    divide_by_t,
    inverse_monotone,
    is_pmd,
    is_pmi,
    parse_fn,
    reciprocal,
    times_t,
)
from perspec.matcore import DomainViolation

T = np.geomspace(1e-3, 1e3, 41)
pos = st.floats(1e-3, 1e3, allow_nan=False)


class TestValues:
    def test_power(self):
        np.testing.assert_allclose(Power(0.5).eval(T), np.sqrt(T))

    def test_weighted_means(self):
        np.testing.assert_allclose(WeightedArith(0.3).eval(T), 0.7 + 0.3 * T)
        np.testing.assert_allclose(WeightedHarm(0.3).eval(T), 1.0 / (0.7 + 0.3 / T))

    def test_logmean_near_one_is_smooth(self):
        t = 1.0 + np.array([-1e-3, -1e-6, 0.0, 1e-9, 1e-6, 1e-3])
        want = np.where(t == 1.0, 1.0, (t - 1) / np.log(np.where(t == 1.0, 2.0, t)))
        np.testing.assert_allclose(LogMean().eval(t), want, rtol=1e-12)

    def test_halfsum(self):
        np.testing.assert_allclose(HalfSum(0.3).eval(T), 0.5 * (T**0.3 + T**0.7))

    def test_geodesic_is_weighted_power_sum(self):
        g = Geodesic(((0.0, 0.25), (0.5, 0.5), (1.0, 0.25)))
        np.testing.assert_allclose(g.eval(T), 0.25 + 0.5 * np.sqrt(T) + 0.25 * T)

    def test_transforms(self):
        f = LogMean()
        np.testing.assert_allclose(Transpose(f).eval(T), T * f.eval(1 / T))
        np.testing.assert_allclose(Adjoint(f).eval(T), 1 / f.eval(1 / T))
        np.testing.assert_allclose(Dual(f).eval(T), T / f.eval(T))
        np.testing.assert_allclose(TPowTimes(2, f).eval(T), T**2 * f.eval(T))
        np.testing.assert_allclose(Subst(0.5, f).eval(T), f.eval(T**2) ** 0.5)

    def test_negative_argument_raises(self):
        with pytest.raises(DomainViolation):
            Power(0.5).eval(-1.0)

    def test_zero_needs_finite_limit(self):
        assert Power(0.5).eval(0.0) == 0.0
        with pytest.raises(DomainViolation):
            Power(-0.5).eval(0.0)

    def test_catalog_normalized(self):
        for name, f in catalog().items():
            assert f.eval(1.0) == pytest.approx(1.0, abs=1e-12), name


class TestLimits:
    def test_power_limits(self):
        lim = Power(0.5).limits
        assert lim.zero == 0.0 and lim.inf == math.inf and lim.slope_inf == 0.0

    def test_value_at_zero(self):
        assert WeightedArith(0.5).value_at_zero == 0.5
        assert LogMean().value_at_zero == 0.0
        assert Power(-1.0).value_at_zero is None

    def test_slope_at_inf(self):
        assert WeightedArith(0.5).slope_at_inf == 0.5
        assert Power(2.0).slope_at_inf is None

    def test_tpow_negative_resolves_product(self):
        # t^-1 (1 + t)/2 at infinity has slope 0 and value 1/2
        f = TPowTimes(-1, WeightedArith(0.5))
        assert f.limits.inf == pytest.approx(0.5)
        assert f.limits.zero == math.inf


class TestHelpers:
    def test_times_t_folds_powers(self):
        assert times_t(Power(0.5), 2) == Power(2.5)
        assert times_t(TPowTimes(2, LogMean()), -2) == LogMean()
        assert divide_by_t(Power(1.5)) == Power(0.5)

    def test_compose_inverse_arg(self):
        g = compose_inverse_arg(LogMean())
        np.testing.assert_allclose(g.eval(T), LogMean().eval(1 / T))

    def test_reciprocal(self):
        np.testing.assert_allclose(reciprocal(LogMean()).eval(T), 1 / LogMean().eval(T))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(pos, min_size=1, max_size=8), st.integers(1, 3))
    def test_inverse_monotone_roundtrip(self, ys, n):
        h = WeightedArith(0.5)
        y = np.asarray(ys)
        x = inverse_monotone(n, h, y)
        np.testing.assert_allclose(x**n * h.eval(x), y, rtol=1e-12)

    def test_numeric_inverse_of_identity_power(self):
        f = NumericInverse(1, Power(1.0))
        np.testing.assert_allclose(f.eval(T), np.sqrt(T), rtol=1e-10)


class TestClassification:
    @pytest.mark.parametrize("f", [Power(0.5), Power(-0.5), Power(2.0)])
    def test_powers_are_both(self, f):
        assert is_pmi(f) and is_pmd(f)

    def test_arith_pmi_harm_pmd(self):
        assert is_pmi(WeightedArith(0.5)) and not is_pmd(WeightedArith(0.5))
        assert is_pmd(WeightedHarm(0.5)) and not is_pmi(WeightedHarm(0.5))

    def test_operator_monotone_flags(self):
        r = classify(Power(0.5))
        assert r.om_plus.holds
        assert not classify(Power(2.0)).om_plus.holds
        assert r.flags()["pmi"] == "holds-on-sample"

    def test_failure_has_witness(self):
        r = classify(Power(3.0))
        assert not r.om_plus.holds and r.om_plus.witness is not None


class TestParse:
    @pytest.mark.parametrize("name", list(catalog()))
    def test_roundtrip_catalog(self, name):
        g = catalog()[name]
        f = parse_fn(g.text())
        assert f == g
        np.testing.assert_allclose(f.eval(T[::8]), g.eval(T[::8]), rtol=1e-12)

    def test_fractions(self):
        assert parse_fn("warith(1/2)") == WeightedArith(0.5)
        assert parse_fn("tpow(1,pow(0.5))") == TPowTimes(1, Power(0.5))

    @pytest.mark.parametrize("text", ["pow(", "nope(1)", "pow(1) extra", "warith(2)", ""])
    def test_rejects(self, text):
        with pytest.raises((FnParseError, DomainViolation)):
            parse_fn(text)
