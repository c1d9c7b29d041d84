"""Category model, observed counts and the Pearson statistic.

A :class:`CategoryModel` is the pair ``(n, p)``: the number of trials and the
null-hypothesis category probabilities. Everything downstream (k, expected
counts, Q) is derived from it.
"""
from __future__ import annotations

import math
import numbers
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidCounts,
    NonPositiveProbability,
    NonPositiveSampleSize,
    SmallProbabilityWarning,
    SumNotOne,
    TooFewCategories,
)

SUM_TOL = 1e-9
RENORMALIZE_TOL = 1e-6
SMALL_PROB = 1e-6


def _frozen(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CategoryModel:
    """Sample size ``n`` and category probabilities ``probs``.

    Construct through :func:`validate_model`; the constructor itself only
    freezes the arrays.
    """

    n: int
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(self.probs, float))

    @property
    def k(self) -> int:
        return len(self.probs)

    @property
    def dof(self) -> int:
        return self.k - 1

    @property
    def expected(self) -> np.ndarray:
        return self.n * self.probs

    def __repr__(self):
        return f"CategoryModel(n={self.n}, probs={self.probs.tolist()!r})"


@dataclass(frozen=True, eq=False)
class ObservedCounts:
    counts: np.ndarray

    def __post_init__(self):
        raw = list(np.ravel(self.counts)) if not np.isscalar(self.counts) else [self.counts]
        for i, c in enumerate(raw):
            if isinstance(c, (bool, np.bool_)) or not isinstance(c, numbers.Integral):
                raise InvalidCounts(f"count {i} ({c!r}) is not an integer")
            if c < 0:
                raise InvalidCounts(f"count {i} ({c}) is negative")
        object.__setattr__(self, "counts", _frozen(raw, np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __len__(self):
        return len(self.counts)


def validate_model(raw_probs, n, renormalize: bool = False) -> CategoryModel:
    """Check ``raw_probs`` and ``n`` and return a :class:`CategoryModel`.

    With ``renormalize=True`` probabilities whose sum is within 1e-6 of one
    are divided by their sum; otherwise the sum must be within 1e-9.
    Probabilities below 1e-6 are accepted with a :class:`SmallProbabilityWarning`.
    """
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n <= 0:
        raise NonPositiveSampleSize(f"sample size must be a positive integer, got {n!r}")
    p = np.asarray(raw_probs, dtype=float).ravel()
    if p.size < 2:
        raise TooFewCategories(f"need at least 2 categories, got {p.size}")
    for i, v in enumerate(p):
        if not np.isfinite(v) or v <= 0:
            raise NonPositiveProbability(f"probability {i} ({v!r}) is not positive")
    total = math.fsum(p)
    deviation = abs(total - 1.0)
    if deviation > SUM_TOL:
        if renormalize and deviation <= RENORMALIZE_TOL:
            p = p / total
        else:
            raise SumNotOne(f"probabilities sum to {total!r}, not 1")
    tiny = np.flatnonzero(p < SMALL_PROB)
    if tiny.size:
        warnings.warn(
            f"categories {tiny.tolist()} have probability below {SMALL_PROB:g}; "
            "B and C will be inflated",
            SmallProbabilityWarning,
            stacklevel=2,
        )
    return CategoryModel(int(n), p)


def as_counts(model: CategoryModel, counts) -> ObservedCounts:
    """Wrap ``counts`` and check they pair with ``model``."""
    obs = counts if isinstance(counts, ObservedCounts) else ObservedCounts(counts)
    if len(obs) != model.k:
        raise DimensionMismatch(f"{len(obs)} counts for {model.k} categories")
    if obs.total != model.n:
        raise InvalidCounts(f"counts sum to {obs.total}, expected n={model.n}")
    return obs


def y_vector(model: CategoryModel, obs) -> np.ndarray:
    """Standardized deviations ``(X_i - n p_i) / sqrt(n p_i)``."""
    obs = as_counts(model, obs)
    e = model.expected
    return (obs.counts - e) / np.sqrt(e)


def t_statistic(model: CategoryModel, obs) -> float:
    """Pearson's statistic, the squared norm of :func:`y_vector`."""
    y = y_vector(model, obs)
    return float(y @ y)


def covariance_matrix(model: CategoryModel) -> np.ndarray:
    """Covariance of the standardized vector, ``I - sqrt(p) sqrt(p)^T``."""
    r = np.sqrt(model.probs)
    return np.eye(model.k) - np.outer(r, r)


def symmetric_polynomials(model: CategoryModel) -> tuple[float, float, float]:
    """First three elementary symmetric polynomials of the probabilities."""
    p = model.probs.tolist()
    s1 = math.fsum(p)
    s2 = math.fsum(a * b for a, b in combinations(p, 2))
    s3 = math.fsum(a * b * c for a, b, c in combinations(p, 3))
    return s1, s2, s3
