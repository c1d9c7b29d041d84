"""Gamma-family special functions and the chi-square distribution.

Everything here is scalar at the core; the public functions accept numpy
arrays and map element-wise.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import ConvergenceError, DomainError

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

EPS = 1e-15
MAX_ITER = 500
_TINY = 1e-300


def _elementwise(fn):
    """Let a scalar function of its last argument broadcast over arrays."""

    @functools.wraps(fn)
    def wrapper(*args):
        *head, x = args
        if np.ndim(x) == 0:
            return fn(*head, float(x))
        arr = np.asarray(x, dtype=float)
        out = np.fromiter((fn(*head, float(v)) for v in arr.flat), float, arr.size)
        return out.reshape(arr.shape)

    return wrapper


def _ln_gamma(x: float) -> float:
    if not x > 0 or math.isinf(x):
        raise DomainError(f"ln_gamma needs a finite positive argument, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        return _ln_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    a = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        a += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (z + 0.5) * math.log(t) - t + math.log(a)


ln_gamma = _elementwise(_ln_gamma)
ln_gamma.__doc__ = "Natural log of the gamma function for x > 0 (Lanczos, g=7)."


def _gamma_series(a, x, gln):
    # P(a, x) by the power series; valid and fast for x < a + 1
    ap = a
    term = total = 1.0 / a
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total * math.exp(-x + a * math.log(x) - gln)
    raise ConvergenceError(f"gamma series did not converge for a={a}, x={x}")


def _gamma_contfrac(a, x, gln):
    # Q(a, x) by the modified Lentz continued fraction; for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return math.exp(-x + a * math.log(x) - gln) * h
    raise ConvergenceError(f"gamma continued fraction did not converge for a={a}, x={x}")


def _check_gamma_args(a, x):
    if not a > 0 or math.isinf(a):
        raise DomainError(f"shape parameter must be positive, got {a!r}")
    if not x >= 0:
        raise DomainError(f"argument must be nonnegative, got {x!r}")


def _gamma_p(a: float, x: float) -> float:
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    gln = _ln_gamma(a)
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x, gln))
    return max(0.0, 1.0 - _gamma_contfrac(a, x, gln))


def _gamma_q(a: float, x: float) -> float:
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    gln = _ln_gamma(a)
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x, gln))
    return min(1.0, _gamma_contfrac(a, x, gln))


regularized_gamma_p = _elementwise(_gamma_p)
regularized_gamma_p.__doc__ = "Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."
regularized_gamma_q = _elementwise(_gamma_q)
regularized_gamma_q.__doc__ = "Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."


@dataclass(frozen=True)
class ChiSquare:
    """Central chi-square distribution with ``dof`` degrees of freedom."""

    dof: int

    def __post_init__(self):
        if isinstance(self.dof, bool) or int(self.dof) != self.dof or self.dof < 1:
            raise DomainError(f"degrees of freedom must be a positive integer, got {self.dof!r}")

    def _pdf(self, t: float) -> float:
        if not t >= 0:
            raise DomainError(f"chi-square density needs t >= 0, got {t!r}")
        half = 0.5 * self.dof
        if t == 0.0:
            if self.dof == 1:
                return math.inf
            return 0.5 if self.dof == 2 else 0.0
        if math.isinf(t):
            return 0.0
        return math.exp((half - 1.0) * math.log(t) - 0.5 * t - half * math.log(2.0) - _ln_gamma(half))

    def _cdf(self, u: float) -> float:
        if not u >= 0:
            raise DomainError(f"chi-square cdf needs u >= 0, got {u!r}")
        return _gamma_p(0.5 * self.dof, 0.5 * u)

    def _sf(self, u: float) -> float:
        if not u >= 0:
            raise DomainError(f"chi-square survival function needs u >= 0, got {u!r}")
        return _gamma_q(0.5 * self.dof, 0.5 * u)

    def pdf(self, t):
        return _elementwise(lambda v: self._pdf(v))(t)

    def cdf(self, u):
        return _elementwise(lambda v: self._cdf(v))(u)

    def sf(self, u):
        return _elementwise(lambda v: self._sf(v))(u)

    def quantile(self, q):
        return _elementwise(lambda v: _chi2_quantile(self, v))(q)

    @property
    def mean(self) -> float:
        return float(self.dof)


def _chi2_quantile(dist: ChiSquare, q: float, tol: float = 1e-13, max_iter: int = 100) -> float:
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {q!r}")
    d = dist.dof
    # Wilson-Hilferty start
    z = NormalDist().inv_cdf(q)
    c = 2.0 / (9.0 * d)
    u = d * (1.0 - c + z * math.sqrt(c)) ** 3
    if not u > 0:
        u = d * 1e-3

    lo, hi = 0.0, u
    while dist._cdf(hi) < q:
        lo, hi = hi, 2.0 * hi + 1.0
    upper = q > 0.5
    for _ in range(max_iter):
        # same sign as cdf(u) - q; the upper tail keeps precision for q near 1
        f = (1.0 - q) - dist._sf(u) if upper else dist._cdf(u) - q
        if abs(f) <= tol:
            return u
        if f < 0:
            lo = max(lo, u)
        else:
            hi = min(hi, u)
        dens = dist._pdf(u)
        step = u - f / dens if dens > 0 and math.isfinite(dens) else math.nan
        u = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4 * EPS * hi:
            return u
    raise ConvergenceError(f"chi-square quantile did not converge for dof={d}, q={q}")


def chi2_pdf(dof: int, t):
    """Chi-square density; ``+inf`` at ``t = 0`` when ``dof == 1``."""
    return ChiSquare(dof).pdf(t)


def chi2_cdf(dof: int, u):
    return ChiSquare(dof).cdf(u)


def chi2_sf(dof: int, u):
    return ChiSquare(dof).sf(u)


def chi2_quantile(dof: int, q):
    """Inverse of :func:`chi2_cdf` by safeguarded Newton iteration."""
    return ChiSquare(dof).quantile(q)
