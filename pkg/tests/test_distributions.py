import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zipflaw.distributions import (
    BETA_MAX,
    FamilyKind,
    ZipfModel,
    hurwitz_zeta,
    log_gamma,
    log_gamma_ratio,
    log_pmf,
    log_survival,
    pmf,
    rank_exponent_from_beta,
    survival,
)
from zipflaw.errors import DomainError

ZETA2 = math.pi ** 2 / 6


def brute_zeta(s, a, terms=10**6):
    """Partial sum in chunks plus the integral/half-term tail, independent of Euler-Maclaurin code."""
    total = 0.0
    for start in range(0, terms, 10**6):
        k = np.arange(start, min(start + 10**6, terms), dtype=float)
        total += math.fsum((a + k) ** -s)
    K = a + terms
    return total + K ** (1 - s) / (s - 1) + 0.5 * K ** -s


class TestHurwitzZeta:
    def test_closed_forms(self):
        assert hurwitz_zeta(2.0, 1) == pytest.approx(ZETA2, rel=1e-12)
        assert hurwitz_zeta(2.0, 2) == pytest.approx(ZETA2 - 1, rel=1e-12)

    def test_zeta_three_halves_brute_force(self):
        # 1e7 terms; the remaining tail error is below 1e-18
        ref = brute_zeta(1.5, 1, terms=10**7)
        assert ref == pytest.approx(2.612375, abs=1e-6)
        assert hurwitz_zeta(1.5, 1) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("s", [1.0001, 1.01, 1.2, 1.5, 2.0, 3.3, 7.0, 20.0])
    @pytest.mark.parametrize("a", [1, 2, 3, 10, 137])
    def test_against_mpmath(self, s, a):
        mpmath.mp.dps = 30
        assert hurwitz_zeta(s, a) == pytest.approx(float(mpmath.zeta(s, a)), rel=1e-12)

    def test_large_s_against_direct_sum(self):
        ref = math.fsum((1000.0 + k) ** -50 for k in range(200000))
        assert hurwitz_zeta(50.0, 1000) == pytest.approx(ref, rel=1e-13)

    def test_vectorized_matches_scalar(self):
        a = np.array([1, 5, 50, 10**6])
        vec = hurwitz_zeta(1.7, a)
        assert vec.shape == (4,)
        for ai, v in zip(a, vec):
            assert v == hurwitz_zeta(1.7, int(ai))

    def test_shift_identity(self):
        for s in (1.3, 2.0, 4.5):
            for a in (1, 7, 300):
                assert hurwitz_zeta(s, a + 1) == pytest.approx(hurwitz_zeta(s, a) - a ** -s, rel=1e-13)

    @pytest.mark.parametrize("s,a", [(1.0, 1), (0.5, 1), (2.0, 0), (2.0, -3)])
    def test_domain(self, s, a):
        with pytest.raises(DomainError):
            hurwitz_zeta(s, a)


class TestLogGamma:
    @pytest.mark.parametrize("x,expected", [(1.0, 0.0), (0.5, math.log(math.sqrt(math.pi))),
                                            (10.0, math.log(362880))])
    def test_closed_forms(self, x, expected):
        assert log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)

    @pytest.mark.parametrize("x", [0.3, 2.5, 19.9, 20.0, 33.0, 1e3, 1e6, 1e9])
    @pytest.mark.parametrize("h", [-1.9, -1.5, -1.0, -0.5, 0.5])
    def test_ratio_against_mpmath(self, x, h):
        if x + h <= 0:
            pytest.skip("outside domain")
        mpmath.mp.dps = 40
        ref = float(mpmath.loggamma(mpmath.mpf(x) + h) - mpmath.loggamma(mpmath.mpf(x)))
        assert log_gamma_ratio(x, h) == pytest.approx(ref, rel=1e-13, abs=1e-13)


class TestModel:
    def test_kind_serializes(self):
        assert [k.value for k in FamilyKind] == ["f1", "f2", "f3"]
        m = ZipfModel("f2", 2.0, 1)
        assert m.to_dict() == {"kind": "f2", "beta": 2.0, "a": 1}
        assert ZipfModel.from_dict(m.to_dict()) == m

    @pytest.mark.parametrize("kind,beta", [("f1", 1.0), ("f2", 0.9), ("f3", 2.0), ("f3", 2.5), ("f1", BETA_MAX + 1)])
    def test_beta_domain(self, kind, beta):
        with pytest.raises(DomainError):
            ZipfModel(kind, beta, 1)

    @pytest.mark.parametrize("a", [0, -1, 1.5])
    def test_cutoff_domain(self, a):
        with pytest.raises(DomainError):
            ZipfModel("f1", 2.0, a)


class TestPmf:
    def test_examples(self):
        assert pmf(ZipfModel("f1", 2, 1), 1) == pytest.approx(6 / math.pi ** 2, rel=1e-12)
        assert pmf(ZipfModel("f2", 2, 1), 1) == pytest.approx(0.5, rel=1e-14)
        # S3(1) - S3(2) with Gamma(1/2) = sqrt(pi), Gamma(3/2) = sqrt(pi)/2
        g_half, g_3half = math.sqrt(math.pi), math.sqrt(math.pi) / 2
        s3_2 = math.gamma(1) * g_3half / (math.gamma(2) * g_half)
        assert pmf(ZipfModel("f3", 1.5, 1), 1) == pytest.approx(1 - s3_2, rel=1e-13)
        assert pmf(ZipfModel("f3", 1.5, 1), 1) == pytest.approx(0.5, rel=1e-13)

    def test_log_examples(self):
        assert log_pmf(ZipfModel("f1", 2, 1), 1) == pytest.approx(math.log(6 / math.pi ** 2), abs=1e-12)
        assert log_pmf(ZipfModel("f2", 2, 1), 1) == pytest.approx(math.log(0.5), abs=1e-14)
        expected = -2 * math.log(1e6) - math.log(ZETA2)
        assert expected == pytest.approx(-28.12872, abs=1e-5)
        assert log_pmf(ZipfModel("f1", 2, 1), 10**6) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("kind,beta", [("f1", 1.1), ("f2", 1.1), ("f3", 1.1), ("f1", 3.0), ("f2", 3.0), ("f3", 1.9)])
    def test_log_pmf_finite_far_out(self, kind, beta):
        v = log_pmf(ZipfModel(kind, beta, 1), np.array([10**6, 10**9]))
        assert np.all(np.isfinite(v))

    @pytest.mark.parametrize("kind,beta", [("f1", 2.0), ("f2", 1.5), ("f3", 1.5)])
    def test_log_pmf_consistent_with_pmf(self, kind, beta):
        m = ZipfModel(kind, beta, 2)
        n = np.unique(np.logspace(np.log10(2), 6, 300).astype(int))
        p = pmf(m, n)
        ok = p > 1e-300
        np.testing.assert_allclose(log_pmf(m, n)[ok], np.log(p[ok]), atol=1e-10)

    @pytest.mark.parametrize("fn", [pmf, log_pmf, survival, log_survival])
    def test_below_cutoff(self, fn):
        with pytest.raises(DomainError):
            fn(ZipfModel("f2", 2.0, 3), 2)


class TestSurvival:
    @pytest.mark.parametrize("kind,beta", [("f1", 1.7), ("f2", 2.2), ("f3", 1.4)])
    @pytest.mark.parametrize("a", [1, 2, 5])
    def test_one_at_cutoff(self, kind, beta, a):
        assert survival(ZipfModel(kind, beta, a), a) == 1.0
        assert log_survival(ZipfModel(kind, beta, a), a) == 0.0

    def test_examples(self):
        assert survival(ZipfModel("f2", 2, 1), 2) == pytest.approx(0.5, rel=1e-14)
        ref = brute_zeta(2.0, 2) / brute_zeta(2.0, 1)
        assert ref == pytest.approx(1 - 6 / math.pi ** 2, abs=1e-12)
        assert survival(ZipfModel("f1", 2, 1), 2) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("kind,beta", [("f1", 1.2), ("f2", 2.5), ("f3", 1.5)])
    def test_strictly_decreasing(self, kind, beta):
        s = survival(ZipfModel(kind, beta, 1), np.arange(1, 5000))
        assert np.all(np.diff(s) < 0)

    @given(kind=st.sampled_from(["f1", "f2", "f3"]),
           beta=st.floats(1.05, 1.95),
           a=st.integers(1, 20),
           offset=st.integers(0, 10**4))
    @settings(max_examples=200, deadline=None)
    def test_telescoping_moderate_n(self, kind, beta, a, offset):
        m = ZipfModel(kind, beta, a)
        n = a + offset
        delta = survival(m, n) - survival(m, n + 1)
        assert pmf(m, n) == pytest.approx(delta, rel=1e-10)


def test_pmf_strictly_decreasing():
    for kind, betas in (("f1", (1.2, 2.0, 3.0)), ("f2", (1.2, 2.0, 3.0)), ("f3", (1.2, 1.5, 1.9))):
        for beta in betas:
            for a in (1, 4):
                p = pmf(ZipfModel(kind, beta, a), np.arange(a, a + 20000))
                assert np.all(np.diff(p) < 0), (kind, beta, a)


@pytest.mark.parametrize("kind", ["f1", "f2", "f3"])
def test_asymptotic_tail(kind):
    beta, a, n = 1.5, 1, 10**6
    limits = {
        "f1": 1 / hurwitz_zeta(beta, a),
        "f2": (beta - 1) * a ** (beta - 1),
        "f3": (beta - 1) * math.gamma(a) / math.gamma(a + 1 - beta),
    }
    val = n ** beta * pmf(ZipfModel(kind, beta, a), n)
    assert val == pytest.approx(limits[kind], rel=1e-3)


def test_shape_at_small_n():
    n = np.arange(1, 6)

    def loglog_slopes(kind):
        return np.diff(log_pmf(ZipfModel(kind, 1.5, 1), n)) / np.diff(np.log(n))

    assert np.all(np.diff(loglog_slopes("f2")) < 0)
    assert np.all(np.diff(loglog_slopes("f3")) > 0)
    np.testing.assert_allclose(loglog_slopes("f1"), -1.5, atol=1e-12)
    p_at_a = [pmf(ZipfModel(k, 1.5, 1), 1) for k in ("f2", "f1", "f3")]
    assert p_at_a == sorted(p_at_a)


def test_f3_gamma_form_matches_beta_function_form():
    from scipy.special import beta as B

    for beta in (1.2, 1.5, 1.8):
        for a in (1, 3):
            n = np.arange(a, a + 50)
            ref = B(n + 1 - beta, beta) / B(a + 1 - beta, beta - 1)
            np.testing.assert_allclose(pmf(ZipfModel("f3", beta, a), n), ref, rtol=1e-12)


@pytest.mark.parametrize("beta,alpha", [(2.0, 1.0), (1.5, 2.0), (3.0, 0.5)])
def test_rank_exponent(beta, alpha):
    assert rank_exponent_from_beta(beta) == pytest.approx(alpha)


def test_rank_exponent_domain():
    with pytest.raises(DomainError):
        rank_exponent_from_beta(1.0)
