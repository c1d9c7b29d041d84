"""Exact null distribution of T by enumerating every multinomial outcome."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import TooManyOutcomes
from .model import CategoryModel
from .special import ln_gamma

MAX_OUTCOMES = 10**7
SIG_DIGITS = 12


def composition_count(n: int, k: int) -> int:
    """Number of count vectors of length ``k`` summing to ``n``."""
    return math.comb(n + k - 1, k - 1)


def compositions(n: int, k: int) -> np.ndarray:
    """All length-``k`` nonnegative integer vectors summing to ``n``, in
    lexicographic order (first coordinate slowest).
    """
    out = _compositions(n, k).copy()
    _compositions.cache_clear()
    return out


@functools.lru_cache(maxsize=None)
def _compositions(n, k):
    if k == 1:
        return np.array([[n]], dtype=np.int32)
    blocks = []
    for first in range(n + 1):
        rest = _compositions(n - first, k - 1)
        head = np.full((len(rest), 1), first, dtype=np.int32)
        blocks.append(np.hstack([head, rest]))
    return np.vstack(blocks)


def _round_sig(t: np.ndarray, digits: int = SIG_DIGITS) -> np.ndarray:
    out = np.zeros_like(t)
    nz = t != 0
    mag = np.floor(np.log10(np.abs(t[nz])))
    scale = 10.0 ** (digits - 1 - mag)
    out[nz] = np.round(t[nz] * scale) / scale
    return out


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    """Atoms of T (sorted, ties merged) with their probabilities."""

    t: np.ndarray
    prob: np.ndarray
    model: CategoryModel
    outcomes: int

    def __post_init__(self):
        cum = np.cumsum(self.prob)
        cum.setflags(write=False)
        object.__setattr__(self, "_cum", cum)

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.prob.tolist()))

    def __len__(self):
        return len(self.t)

    def mean(self) -> float:
        return math.fsum(self.t * self.prob)

    def cdf(self, u):
        """Right-continuous step function ``P(T <= u)``."""
        idx = np.searchsorted(self.t, u, side="right")
        out = np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)
        out = np.minimum(out, 1.0)
        return float(out) if np.ndim(out) == 0 else out


def enumerate_exact(model: CategoryModel, max_outcomes: int = MAX_OUTCOMES) -> ExactDistribution:
    """Enumerate every count vector and collect the distribution of T.

    Atoms whose T agrees to 12 significant digits are merged; the merged
    probabilities are accumulated largest first.
    """
    n, k = model.n, model.k
    total = composition_count(n, k)
    if total > max_outcomes:
        raise TooManyOutcomes(total, max_outcomes)

    X = compositions(n, k)
    ln_fact = np.array([ln_gamma(m + 1.0) for m in range(n + 1)])
    log_p = np.log(model.probs)
    logpmf = ln_fact[n] - ln_fact[X].sum(axis=1) + X @ log_p
    prob = np.exp(logpmf)

    e = model.expected
    T = (((X - e) ** 2) / e).sum(axis=1)
    keys = _round_sig(T)

    order = np.argsort(-prob, kind="stable")
    atoms, first, inverse = np.unique(keys[order], return_index=True, return_inverse=True)
    merged = np.bincount(inverse, weights=prob[order], minlength=len(atoms))
    keep = merged > 0
    # the most probable member's T stands for the merged atom
    t = T[order][first][keep]
    p = merged[keep]
    t.setflags(write=False)
    p.setflags(write=False)
    return ExactDistribution(t=t, prob=p, model=model, outcomes=total)


def exact_cdf(dist: ExactDistribution, u):
    return dist.cdf(u)


def uniform_lattice(k: int, n: int) -> tuple[float, float, float]:
    """``(start, stop, step)`` of the arithmetic progression carrying T when
    every ``p_i = 1/k``. The start can be negative; it anchors the
    progression and is not itself attainable in that case.
    """
    return float(k - n), float(n * (k - 1)), 2.0 * k / n


def on_lattice(t, k: int, n: int, tol: float = 1e-9) -> np.ndarray:
    """Elementwise check that ``t`` lies on the uniform-case lattice."""
    start, stop, step = uniform_lattice(k, n)
    t = np.asarray(t, dtype=float)
    m = (t - start) / step
    off = np.abs(m - np.round(m)) * step
    return (off <= tol * np.maximum(1.0, np.abs(t))) & (t <= stop + tol)


def midpoint_errors(dist: ExactDistribution, cdfs: dict, lo: float, hi: float) -> dict:
    """Max |F - exact| over midpoints between consecutive atoms in [lo, hi].

    Midpoints avoid the jumps, where any continuous approximation is off by
    half the atom mass.
    """
    mids = 0.5 * (dist.t[:-1] + dist.t[1:])
    mids = mids[(mids >= lo) & (mids <= hi)]
    exact = dist.cdf(mids)
    return {name: float(np.max(np.abs(np.asarray(f(mids)) - exact))) for name, f in cdfs.items()}
