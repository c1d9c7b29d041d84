import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gofcorr import (
    ObservedCounts,
    covariance_matrix,
    symmetric_polynomials,
    t_statistic,
    validate_model,
    y_vector,
)
from gofcorr.errors import (
    DimensionMismatch,
    InvalidCounts,
    NonPositiveProbability,
    NonPositiveSampleSize,
    SmallProbabilityWarning,
    SumNotOne,
    TooFewCategories,
)

from conftest import models


class TestValidateModel:
    def test_two_categories(self):
        m = validate_model([0.5, 0.5], 10)
        assert m.k == 2 and m.n == 10 and m.dof == 1

    @pytest.mark.parametrize(
        "probs, n, exc",
        [
            ([0.5, 0.6], 10, SumNotOne),
            ([1.0], 5, TooFewCategories),
            ([0.5, 0.5, 0.0], 5, NonPositiveProbability),
            ([1.2, -0.2], 5, NonPositiveProbability),
            ([0.5, 0.5], 0, NonPositiveSampleSize),
            ([0.5, 0.5], 2.5, NonPositiveSampleSize),
        ],
    )
    def test_rejects(self, probs, n, exc):
        with pytest.raises(exc):
            validate_model(probs, n)

    def test_renormalize_within_lenient_tolerance(self):
        with pytest.raises(SumNotOne):
            validate_model([0.3333334, 0.3333334, 0.3333334], 9)
        m = validate_model([0.3333334, 0.3333334, 0.3333334], 9, renormalize=True)
        assert math.isclose(m.probs.sum(), 1.0, abs_tol=1e-15)

    def test_renormalize_still_refuses_large_deviation(self):
        with pytest.raises(SumNotOne):
            validate_model([0.3, 0.3, 0.3], 9, renormalize=True)

    def test_tiny_probability_warns(self):
        with pytest.warns(SmallProbabilityWarning):
            validate_model([1 - 1e-7, 1e-7], 10)

    def test_model_is_immutable(self):
        m = validate_model([0.25, 0.75], 4)
        with pytest.raises(ValueError):
            m.probs[0] = 0.5


class TestCounts:
    def test_real_counts_rejected(self):
        with pytest.raises(InvalidCounts):
            ObservedCounts([1.5, 2.5])

    def test_negative_counts_rejected(self):
        with pytest.raises(InvalidCounts):
            ObservedCounts([5, -1])

    def test_length_mismatch(self):
        m = validate_model([0.5, 0.5], 10)
        with pytest.raises(DimensionMismatch):
            t_statistic(m, [5, 5, 0])

    def test_sum_mismatch(self):
        m = validate_model([0.5, 0.5], 10)
        with pytest.raises(InvalidCounts):
            t_statistic(m, [5, 4])


class TestStatistic:
    @pytest.mark.parametrize(
        "probs, n, counts, expected",
        [
            ([0.5, 0.5], 10, [5, 5], 0.0),
            ([0.5, 0.5], 10, [8, 2], 3.6),
            ([0.25, 0.75], 4, [4, 0], 12.0),
        ],
    )
    def test_values(self, probs, n, counts, expected):
        assert t_statistic(validate_model(probs, n), counts) == pytest.approx(expected, abs=1e-12)

    def test_y_vector(self):
        m = validate_model([0.5, 0.5], 10)
        np.testing.assert_allclose(y_vector(m, [8, 2]), [3 / math.sqrt(5), -3 / math.sqrt(5)], atol=1e-15)
        np.testing.assert_array_equal(y_vector(m, [5, 5]), [0.0, 0.0])

    @given(models(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_nonnegative_and_norm_identity(self, model, data):
        cuts = sorted(data.draw(st.lists(st.integers(0, model.n), min_size=model.k - 1, max_size=model.k - 1)))
        counts = np.diff([0, *cuts, model.n])
        t = t_statistic(model, counts.tolist())
        y = y_vector(model, counts.tolist())
        assert t >= 0
        assert t == pytest.approx(float(np.sum(y**2)), rel=1e-12, abs=1e-12)

    def test_zero_iff_counts_match_expectation(self):
        m = validate_model([0.25, 0.25, 0.5], 8)
        assert t_statistic(m, [2, 2, 4]) == 0.0
        assert t_statistic(m, [3, 1, 4]) > 0.0


class TestCovariance:
    def test_two_categories(self):
        V = covariance_matrix(validate_model([0.5, 0.5], 3))
        np.testing.assert_allclose(V, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
        assert np.trace(V) == pytest.approx(1.0, abs=1e-15)

    @given(models(k_max=50, p_floor=1e-3))
    @settings(max_examples=60, deadline=None)
    def test_symmetric_idempotent_trace(self, model):
        V = covariance_matrix(model)
        np.testing.assert_array_equal(V, V.T)
        assert np.max(np.abs(V @ V - V)) <= 1e-12
        assert abs(np.trace(V) - (model.k - 1)) <= 1e-12


class TestSymmetricPolynomials:
    def test_two_categories(self):
        s1, s2, s3 = symmetric_polynomials(validate_model([0.5, 0.5], 2))
        assert (s1, s2, s3) == (1.0, 0.25, 0.0)

    def test_three_uniform(self):
        s1, s2, s3 = symmetric_polynomials(validate_model([1 / 3] * 3, 2))
        assert s2 == pytest.approx(1 / 3, abs=1e-15)
        assert s3 == pytest.approx(1 / 27, abs=1e-15)

    @given(models(k_max=25))
    @settings(max_examples=60, deadline=None)
    def test_power_sum_identities(self, model):
        s1, s2, s3 = symmetric_polynomials(model)
        p = model.probs
        assert abs(s1 - 1) <= 1e-12
        assert abs(math.fsum(p**2) - (s1 * s1 - 2 * s2)) <= 1e-12
        assert abs(math.fsum(p**3) - (s1**3 - 3 * s1 * s2 + 3 * s3)) <= 1e-12
