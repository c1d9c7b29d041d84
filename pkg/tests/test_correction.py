import math
import warnings

import numpy as np
import pytest
import sympy
from scipy import integrate

from gofcorr import (
    CorrectedDistribution,
    chi2_cdf,
    chi2_pdf,
    chi2_quantile,
    corrected_cdf,
    corrected_critical,
    corrected_pdf,
    corrected_pvalue,
    run_test,
    validate_model,
)
from gofcorr.cli import geometric_probs
from gofcorr.errors import CorrectionWarning, DomainError, NoRootInBracket, ValidityError

GRID_K = (5, 10, 15)
GRID_BC = (-3.0, -1.0, 0.0, 1.0, 3.0)


def quad_0_inf(f, dof):
    upper = 40 + 10 * dof
    return integrate.quad(f, 0, upper, epsabs=1e-12, epsrel=1e-12, limit=200)[0]


def bisection_root(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestCorrectedPdf:
    @pytest.mark.parametrize("k", [2, 5, 12])
    def test_zero_correction_is_chi_square(self, k):
        d = CorrectedDistribution(k, 0.0, 0.0)
        ts = np.linspace(0.01, 40, 97)
        assert np.max(np.abs(d.pdf(ts) - chi2_pdf(k - 1, ts))) <= 1e-15
        assert np.max(np.abs(d.cdf(ts) - chi2_cdf(k - 1, ts))) <= 1e-12

    def test_b_polynomial_roots(self):
        d = CorrectedDistribution(5, 1.0, 0.0)
        # t^2/24 - t/2 + 1 = 0
        for t in (6 - math.sqrt(12), 6 + math.sqrt(12)):
            assert abs(float(d.b_poly(t))) <= 1e-14
            assert d.pdf(t) == pytest.approx(chi2_pdf(4, t), rel=1e-13)

    def test_symbolic_value(self):
        B, C = sympy.Rational(-2292, 10000), sympy.Rational(1, 2)
        t, k = sympy.Integer(8), 10
        dof = k - 1
        chi = t ** (sympy.Rational(dof, 2) - 1) * sympy.exp(-t / 2) / (2 ** sympy.Rational(dof, 2) * sympy.gamma(sympy.Rational(dof, 2)))
        qb = t**2 / ((k - 1) * (k + 1)) - 2 * t / (k - 1) + 1
        qc = t**3 / ((k - 1) * (k + 1) * (k + 3)) - 3 * t**2 / ((k - 1) * (k + 1)) + 3 * t / (k - 1) - 1
        assert qb == sympy.Rational(64, 99) - sympy.Rational(16, 9) + 1
        assert qc == sympy.Rational(512, 1287) - sympy.Rational(192, 99) + sympy.Rational(24, 9) - 1
        ref = float((chi * (1 + B * qb + C * qc)).evalf(30))
        got = corrected_pdf(CorrectedDistribution(10, -0.2292, 0.5), 8.0)
        assert got == pytest.approx(ref, rel=1e-13)

    def test_negative_t_rejected(self):
        with pytest.raises(DomainError):
            CorrectedDistribution(5, 0.1, 0.1).pdf(-1.0)
        with pytest.raises(DomainError):
            CorrectedDistribution(5, 0.1, 0.1).cdf(np.array([1.0, -0.1]))

    def test_may_go_negative(self):
        d = CorrectedDistribution(5, -3.0, 3.0)
        assert np.min(d.pdf(np.linspace(0, 40, 401))) < 0

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            CorrectedDistribution(1, 0.0, 0.0)
        with pytest.raises(DomainError):
            CorrectedDistribution(5, math.inf, 0.0)


class TestMoments:
    @pytest.mark.parametrize("k", GRID_K)
    def test_correction_polynomials_orthogonal(self, k):
        d = CorrectedDistribution(k, 0.0, 0.0)
        chi = d.chi2
        for poly in (d.b_poly, d.c_poly):
            assert abs(quad_0_inf(lambda t: chi.pdf(t) * float(poly(t)), k - 1)) <= 1e-8
            assert abs(quad_0_inf(lambda t: t * chi.pdf(t) * float(poly(t)), k - 1)) <= 1e-8

    @pytest.mark.parametrize("k", GRID_K)
    @pytest.mark.parametrize("B", GRID_BC)
    def test_normalization_and_mean(self, k, B):
        for C in GRID_BC:
            d = CorrectedDistribution(k, B, C)
            assert abs(quad_0_inf(d.pdf, k - 1) - 1) <= 1e-8
            assert abs(quad_0_inf(lambda t: t * d.pdf(t), k - 1) - (k - 1)) <= 1e-7


class TestCorrectedCdf:
    def test_zero_at_origin(self):
        assert corrected_cdf(CorrectedDistribution(7, 0.4, 1.2), 0.0) == 0.0

    @pytest.mark.parametrize("k", GRID_K)
    def test_derivative_matches_pdf(self, k):
        d = CorrectedDistribution(k, 0.3, 1.1)
        h = 1e-4
        for u in range(1, 31):
            fd = (d.cdf(u + h) - d.cdf(u - h)) / (2 * h)
            assert abs(fd - d.pdf(u)) <= 1e-6, u

    @pytest.mark.parametrize("k", GRID_K)
    def test_tends_to_one(self, k):
        d = CorrectedDistribution(k, 1.0, -1.0)
        assert abs(d.cdf(40 + 10 * (k - 1)) - 1) <= 1e-8

    def test_sf_complements_cdf(self):
        d = CorrectedDistribution(10, 0.2, 0.9)
        us = np.linspace(0, 50, 51)
        np.testing.assert_allclose(d.sf(us) + d.cdf(us), 1.0, atol=1e-14)


class TestPvalue:
    def test_zero_statistic(self):
        assert corrected_pvalue(CorrectedDistribution(5, -0.05, 0.05), 0.0) == 1.0

    def test_reduces_to_plain(self):
        u = chi2_quantile(4, 0.95)
        assert corrected_pvalue(CorrectedDistribution(5, 0.0, 0.0), u) == pytest.approx(0.05, abs=1e-9)

    def test_quadrature_oracle(self):
        d = CorrectedDistribution(5, -0.05, 0.05)
        tail = integrate.quad(d.pdf, 9.4877, np.inf, epsabs=1e-13, epsrel=1e-12)[0]
        assert corrected_pvalue(d, 9.4877) == pytest.approx(tail, abs=1e-6)
        assert 1 - corrected_cdf(d, 9.4877) == pytest.approx(tail, abs=1e-6)

    def test_clamped_with_warning(self):
        d = CorrectedDistribution(5, -3.0, 3.0)
        ts = np.linspace(0, 60, 601)
        t_hi = float(ts[np.argmax(d.sf(ts))])
        assert d.sf(t_hi) > 1 + 1e-6
        with pytest.warns(CorrectionWarning):
            assert corrected_pvalue(d, t_hi) == 1.0

        d = CorrectedDistribution(5, 0.0, -3.0)
        t_lo = float(ts[np.argmin(d.sf(ts))])
        assert d.sf(t_lo) < -1e-6
        with pytest.warns(CorrectionWarning):
            assert corrected_pvalue(d, t_lo) == 0.0


class TestCritical:
    def test_reduces_to_plain(self):
        d = CorrectedDistribution(5, 0.0, 0.0)
        assert corrected_critical(d, 0.05) == pytest.approx(9.4877, abs=1e-3)
        for a in (0.1, 0.05, 0.01):
            assert abs(corrected_critical(d, a) - chi2_quantile(4, 1 - a)) <= 1e-12

    def test_uniform_regime_against_bisection(self):
        d = CorrectedDistribution(5, -0.05, 0.05)
        u = corrected_critical(d, 0.05)
        assert abs(d.cdf(u) - 0.95) <= 1e-9
        ref = bisection_root(lambda x: d.cdf(x) - 0.95, 5.0, 15.0)
        assert u == pytest.approx(ref, abs=1e-9)

    def test_validity_gate(self):
        d = CorrectedDistribution(15, 0.31, 2.62)
        with pytest.raises(ValidityError):
            corrected_critical(d, 0.05)
        u = corrected_critical(d, 0.05, force=True)
        assert abs(d.cdf(u) - 0.95) <= 1e-9

    def test_no_root(self):
        class Stuck(CorrectedDistribution):
            def sf(self, u):
                return 1.0

        with pytest.raises(NoRootInBracket):
            corrected_critical(Stuck(5, 0.0, 0.0), 0.05)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5])
    def test_alpha_domain(self, alpha):
        with pytest.raises(DomainError):
            corrected_critical(CorrectedDistribution(5, 0.0, 0.0), alpha)


class TestRunTest:
    def test_counts_at_expectation(self):
        m = validate_model([0.2] * 5, 20)
        r = run_test(m, [4] * 5)
        assert r.t_value == 0.0
        assert r.p_plain == 1.0 and r.p_corrected == 1.0
        assert r.B == pytest.approx(-0.05) and r.C == pytest.approx(0.05)
        assert r.validity and r.warnings == []

    def test_report_fields(self):
        m = validate_model([0.2] * 5, 20)
        r = run_test(m, [9, 3, 3, 3, 2], alpha=0.05)
        assert r.t_value == pytest.approx(8.0)  # (25+1+1+1+4)/4
        assert r.dof == 4
        assert r.p_plain == pytest.approx(1 - chi2_cdf(4, 8.0), abs=1e-14)
        d = CorrectedDistribution(5, -0.05, 0.05)
        assert r.p_corrected == pytest.approx(1 - d.cdf(8.0), abs=1e-14)
        assert r.reject_plain == (r.p_plain < 0.05)
        assert set(r.as_dict()) == set(r.FIELDS)

    def test_fig3_regime_warns(self):
        m = validate_model(geometric_probs(15, 5.0), 10)
        counts = [1, 0, 0, 1, 0, 1, 0, 1, 1, 1, 0, 2, 1, 0, 1]
        r = run_test(m, counts)
        assert not r.validity
        assert any("validity" in w for w in r.warnings)
        assert 0.0 <= r.p_corrected <= 1.0
