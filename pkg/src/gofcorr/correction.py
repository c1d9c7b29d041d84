"""Corrected density, distribution function, p-values and critical values of T."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cumulants import coefficients, is_valid, validity_threshold
from .errors import CorrectionWarning, DomainError, NoRootInBracket, ValidityError
from .model import CategoryModel, SMALL_PROB, as_counts, t_statistic
from .special import ChiSquare

CLAMP_NOTE_TOL = 1e-6


def _check_nonneg(x, what):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError(f"{what} must be nonnegative, got {x!r}")


@dataclass(frozen=True)
class CorrectedDistribution:
    """Chi-square with ``k - 1`` dof plus the B- and C-weighted 1/n terms."""

    k: int
    B: float
    C: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise DomainError(f"need k >= 2, got {self.k!r}")
        if not (math.isfinite(self.B) and math.isfinite(self.C)):
            raise DomainError("B and C must be finite")

    @classmethod
    def from_model(cls, model: CategoryModel) -> "CorrectedDistribution":
        c = coefficients(model)
        return cls(model.k, c.B, c.C)

    @property
    def dof(self) -> int:
        return self.k - 1

    @property
    def chi2(self) -> ChiSquare:
        return ChiSquare(self.dof)

    @property
    def valid(self) -> bool:
        return is_valid(self.k, self.B, self.C)

    def b_poly(self, t):
        k = self.k
        t = np.asarray(t, dtype=float)
        return t * t / ((k - 1) * (k + 1)) - 2 * t / (k - 1) + 1

    def c_poly(self, t):
        k = self.k
        t = np.asarray(t, dtype=float)
        return (
            t**3 / ((k - 1) * (k + 1) * (k + 3))
            - 3 * t * t / ((k - 1) * (k + 1))
            + 3 * t / (k - 1)
            - 1
        )

    def pdf(self, t):
        """Corrected density; can be negative in the tail for large |B|, |C|."""
        _check_nonneg(t, "t")
        factor = 1 + self.B * self.b_poly(t) + self.C * self.c_poly(t)
        out = self.chi2.pdf(t) * factor
        return float(out) if np.ndim(out) == 0 else out

    def cdf(self, u):
        """Corrected distribution function, unclamped."""
        _check_nonneg(u, "u")
        k = self.k
        u = np.asarray(u, dtype=float)
        bracket = self.B * (u / (k + 1) - 1) + self.C * (
            u * u / ((k + 1) * (k + 3)) - 2 * u / (k + 1) + 1
        )
        out = self.chi2.cdf(u) - 2 * self.chi2.pdf(u) * (u / (k - 1)) * bracket
        return float(out) if np.ndim(out) == 0 else out

    def sf(self, u):
        """``1 - cdf(u)`` computed from the chi-square upper tail, unclamped."""
        _check_nonneg(u, "u")
        k = self.k
        u = np.asarray(u, dtype=float)
        bracket = self.B * (u / (k + 1) - 1) + self.C * (
            u * u / ((k + 1) * (k + 3)) - 2 * u / (k + 1) + 1
        )
        out = self.chi2.sf(u) + 2 * self.chi2.pdf(u) * (u / (k - 1)) * bracket
        return float(out) if np.ndim(out) == 0 else out

    def pvalue(self, t_obs) -> float:
        return corrected_pvalue(self, t_obs)

    def critical(self, alpha, force=False) -> float:
        return corrected_critical(self, alpha, force=force)


def corrected_pdf(dist: CorrectedDistribution, t):
    return dist.pdf(t)


def corrected_cdf(dist: CorrectedDistribution, u):
    return dist.cdf(u)


def _clamped_pvalue(dist, t_obs):
    raw = dist.sf(t_obs)
    p = min(1.0, max(0.0, raw))
    note = None
    if abs(raw - p) > CLAMP_NOTE_TOL:
        note = f"corrected p-value {raw:.6g} fell outside [0, 1] and was clamped"
    return p, note


def corrected_pvalue(dist: CorrectedDistribution, t_obs: float) -> float:
    """Right-tail p-value ``1 - F(t_obs)`` clamped to [0, 1].

    Emits a :class:`CorrectionWarning` when the raw value strays outside the
    unit interval by more than 1e-6.
    """
    p, note = _clamped_pvalue(dist, float(t_obs))
    if note:
        warnings.warn(note, CorrectionWarning, stacklevel=2)
    return p


def corrected_critical(
    dist: CorrectedDistribution,
    alpha: float,
    force: bool = False,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> float:
    """Solve ``F(u) = 1 - alpha`` near the plain chi-square critical value.

    Raises :class:`ValidityError` when B or C break the 0.15*k rule unless
    ``force`` is set, and :class:`NoRootInBracket` when no sign change turns
    up within the expanding search window.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not force and not dist.valid:
        raise ValidityError(
            f"|B|={abs(dist.B):.4g} or |C|={abs(dist.C):.4g} exceeds "
            f"0.15k={validity_threshold(dist.k):.4g}; pass force=True to solve anyway"
        )
    # work with the upper tail: g(u) = sf(u) - alpha decreases through zero
    def g(u):
        return dist.sf(u) - alpha

    u0 = dist.chi2.quantile(1.0 - alpha)
    delta = 2.0
    for _ in range(7):
        lo, hi = max(0.0, u0 - delta), u0 + delta
        glo, ghi = g(lo), g(hi)
        if glo > 0 >= ghi:
            break
        delta *= 2.0
    else:
        raise NoRootInBracket(
            f"corrected cdf does not reach {1 - alpha} within [0, {u0 + delta / 2:.4g}]"
        )

    u = u0 if lo < u0 < hi else 0.5 * (lo + hi)
    for _ in range(max_iter):
        gu = g(u)
        if abs(gu) <= tol:
            break
        if gu > 0:
            lo = u
        else:
            hi = u
        dens = dist.pdf(u)
        step = u + gu / dens if dens > 0 else math.nan
        u = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * hi:
            break
    if dist.pdf(u) <= 0:
        warnings.warn(
            f"corrected cdf is not increasing at the critical value {u:.6g}",
            CorrectionWarning,
            stacklevel=2,
        )
    return u


@dataclass
class TestReport:
    t_value: float
    dof: int
    p_plain: float
    p_corrected: float
    B: float
    C: float
    validity: bool
    alpha: float
    reject_plain: bool
    reject_corrected: bool
    warnings: list = field(default_factory=list)

    __test__ = False  # not a pytest class

    FIELDS = (
        "t_value",
        "dof",
        "p_plain",
        "p_corrected",
        "B",
        "C",
        "validity",
        "alpha",
        "reject_plain",
        "reject_corrected",
        "warnings",
    )

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}


def run_test(model: CategoryModel, obs, alpha: float = 0.05) -> TestReport:
    """Plain and corrected goodness-of-fit test of ``obs`` against ``model``."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    obs = as_counts(model, obs)
    t = t_statistic(model, obs)
    dist = CorrectedDistribution.from_model(model)
    p_plain = float(dist.chi2.sf(t))
    p_corr, note = _clamped_pvalue(dist, t)

    notes = []
    if not dist.valid:
        notes.append(
            f"validity rule violated: |B|={abs(dist.B):.4g}, |C|={abs(dist.C):.4g}, "
            f"limit 0.15k={validity_threshold(dist.k):.4g}; corrected p-value unreliable"
        )
    tiny = np.flatnonzero(model.probs < SMALL_PROB)
    if tiny.size:
        notes.append(f"categories {tiny.tolist()} have probability below {SMALL_PROB:g}")
    if note:
        notes.append(note)
    return TestReport(
        t_value=t,
        dof=dist.dof,
        p_plain=p_plain,
        p_corrected=p_corr,
        B=dist.B,
        C=dist.C,
        validity=dist.valid,
        alpha=alpha,
        reject_plain=p_plain < alpha,
        reject_corrected=p_corr < alpha,
        warnings=notes,
    )
