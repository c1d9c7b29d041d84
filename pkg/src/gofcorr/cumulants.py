"""Cumulants of the standardized count vector and the coefficients B and C.

Two routes are provided for B and C. The brute-force route sums the joint
third and fourth cumulants of Y directly (O(k^2) and O(k^3) loops); the
closed forms depend on the probabilities only through ``Q = sum(1/p_i)``.
The two must agree to rounding.

Indices are zero-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, OracleTooLarge
from .model import CategoryModel

BRUTEFORCE_MAX_K = 200
VALIDITY_FACTOR = 0.15


def _check_index(model, *idx):
    for i in idx:
        if not 0 <= i < model.k:
            raise IndexOutOfRange(f"index {i} outside 0..{model.k - 1}")


def cumulant3(model: CategoryModel, i: int, j: int, l: int) -> float:
    """Joint third cumulant of ``(Y_i, Y_j, Y_l)``; symmetric in its indices."""
    _check_index(model, i, j, l)
    p, n = model.probs, model.n
    a, b, c = sorted((i, j, l))
    if a == b == c:
        pi = p[a]
        return (1 - pi) * (1 - 2 * pi) / math.sqrt(n * pi)
    if a == b or b == c:
        # repeated index r, singleton s
        r, s = (a, c) if a == b else (c, a)
        return -math.sqrt(p[s]) * (1 - 2 * p[r]) / math.sqrt(n)
    return 2 * math.sqrt(p[a] * p[b] * p[c]) / math.sqrt(n)


def cumulant4_paired(model: CategoryModel, i: int, j: int) -> float:
    """Joint fourth cumulant of ``(Y_i, Y_i, Y_j, Y_j)``."""
    _check_index(model, i, j)
    p, n = model.probs, model.n
    if i == j:
        pi = p[i]
        return (1 / pi - 7 + 12 * pi - 6 * pi * pi) / n
    i, j = sorted((i, j))
    return (2 * p[i] + 2 * p[j] - 6 * p[i] * p[j] - 1) / n


def log_mgf(model: CategoryModel, t) -> float:
    """Log of the joint moment generating function of Y at ``t``."""
    t = np.asarray(t, dtype=float)
    e = model.expected
    z = t / np.sqrt(e)
    shift = z.max()
    lse = shift + math.log(float(np.sum(model.probs * np.exp(z - shift))))
    return model.n * lse - float(t @ np.sqrt(e))


def _check_oracle_size(model):
    if model.k > BRUTEFORCE_MAX_K:
        raise OracleTooLarge(
            f"brute-force sums are capped at k={BRUTEFORCE_MAX_K}, got k={model.k}"
        )


def b_bruteforce(model: CategoryModel) -> float:
    """B as one eighth of the sum of all paired fourth cumulants."""
    _check_oracle_size(model)
    k = model.k
    total = 0.0
    for i in range(k):
        for j in range(k):
            total += cumulant4_paired(model, i, j)
    return total / 8


def c_bruteforce(model: CategoryModel) -> float:
    """C from products and squares of third cumulants over all index triples."""
    _check_oracle_size(model)
    k = model.k
    products = 0.0
    squares = 0.0
    for i in range(k):
        for j in range(k):
            kij = cumulant3(model, i, j, j)
            for l in range(k):
                products += kij * cumulant3(model, i, l, l)
                squares += cumulant3(model, i, j, l) ** 2
    return products / 8 + squares / 12


def q_sum(model: CategoryModel) -> float:
    """``Q = sum(1/p_i)``, smallest terms first."""
    return math.fsum(sorted(1.0 / model.probs))


def b_from_q(k: int, n: int, Q: float) -> float:
    return (Q - k * k - 2 * k + 2) / (8 * n)


def c_from_q(k: int, n: int, Q: float) -> float:
    return (5 * (Q - k * k) + 2 * (k - 1) * (k - 2)) / (24 * n)


def q_from_b(k: int, n: int, B: float) -> float:
    """Invert :func:`b_from_q`: the Q that produces a given B."""
    return 8 * n * B + k * k + 2 * k - 2


def b_closed_form(model: CategoryModel) -> float:
    return b_from_q(model.k, model.n, q_sum(model))


def c_closed_form(model: CategoryModel) -> float:
    return c_from_q(model.k, model.n, q_sum(model))


def validity_threshold(k: int) -> float:
    return VALIDITY_FACTOR * k


def is_valid(k: int, B: float, C: float) -> bool:
    """Rule of thumb: neither |B| nor |C| may exceed 0.15*k."""
    limit = validity_threshold(k)
    return abs(B) <= limit and abs(C) <= limit


@dataclass(frozen=True)
class CorrectionCoefficients:
    B: float
    C: float
    Q: float
    k: int
    n: int
    valid: bool
    threshold: float

    @classmethod
    def from_q(cls, k: int, n: int, Q: float) -> "CorrectionCoefficients":
        B, C = b_from_q(k, n, Q), c_from_q(k, n, Q)
        return cls(B=B, C=C, Q=Q, k=k, n=n, valid=is_valid(k, B, C), threshold=validity_threshold(k))

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "Q": self.Q,
            "B": self.B,
            "C": self.C,
            "threshold": self.threshold,
            "valid": self.valid,
        }


def coefficients(model: CategoryModel) -> CorrectionCoefficients:
    """Closed-form B, C and Q for ``model`` with the validity flag."""
    return CorrectionCoefficients.from_q(model.k, model.n, q_sum(model))
