"""Seed-deterministic simulation of the null distribution of T.

Samples are grouped into fixed-size blocks. Block ``b`` draws its uniforms
from a Philox stream keyed by ``(seed, b)``, and sample ``i`` always reads
the same slice of the same block, so the output does not depend on how
blocks are spread over workers.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .correction import CorrectedDistribution, corrected_critical
from .errors import DomainError, GofError
from .model import CategoryModel, ObservedCounts
from .special import ChiSquare

BLOCK_DRAWS = 1 << 20
ALPHAS = (0.10, 0.05, 0.01)
GRID_POINTS = 201
GRID_UPPER_Q = 0.9999


class AliasTable:
    """Walker/Vose alias table for O(1) categorical draws."""

    def __init__(self, probs):
        p = np.asarray(probs, dtype=float)
        k = len(p)
        scaled = p * k / p.sum()
        prob = np.ones(k)
        alias = np.arange(k)
        small = [i for i in range(k) if scaled[i] < 1.0]
        large = [i for i in range(k) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            g = large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] -= 1.0 - scaled[s]
            (small if scaled[g] < 1.0 else large).append(g)
        # leftovers are 1 up to rounding
        for i in small + large:
            prob[i] = 1.0
            alias[i] = i
        self.k = k
        self.prob = prob
        self.alias = alias

    def lookup(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms in [0, 1) to category indices."""
        x = u * self.k
        col = np.minimum(x.astype(np.int64), self.k - 1)
        frac = x - col
        return np.where(frac < self.prob[col], col, self.alias[col])

    def category_probs(self) -> np.ndarray:
        """Probabilities implied by the table (for checking the build)."""
        out = self.prob / self.k
        np.add.at(out, self.alias, (1.0 - self.prob) / self.k)
        return out


def sample_counts(model: CategoryModel, rng: np.random.Generator, table: AliasTable | None = None) -> ObservedCounts:
    """One multinomial draw of the category counts."""
    table = table or AliasTable(model.probs)
    cats = table.lookup(rng.random(model.n))
    return ObservedCounts(np.bincount(cats, minlength=model.k))


def block_size(n: int) -> int:
    return max(1, BLOCK_DRAWS // n)


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(block << 64) | seed))


def _simulate_block(model, table, seed, block, bs, samples):
    start = block * bs
    m = min(bs, samples - start)
    rng = block_generator(seed, block)
    k, n = model.k, model.n
    cats = table.lookup(rng.random(m * n))
    rows = np.repeat(np.arange(m), n)
    counts = np.bincount(rows * k + cats, minlength=m * k).reshape(m, k)
    e = model.expected
    return (((counts - e) ** 2) / e).sum(axis=1)


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    sorted_t: np.ndarray
    sample_count: int
    seed: int

    def cdf(self, u):
        """Fraction of simulated values ``<= u``."""
        out = np.searchsorted(self.sorted_t, u, side="right") / self.sample_count
        return float(out) if np.ndim(out) == 0 else out

    def mean(self) -> float:
        return float(np.mean(self.sorted_t))

    def exceedance(self, u: float) -> float:
        """Fraction of simulated values strictly above ``u``."""
        return 1.0 - self.cdf(u)


def _check_seed(seed):
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def simulate(model: CategoryModel, samples: int, seed: int = 0, workers: int = 1) -> EmpiricalDistribution:
    """Simulate ``samples`` values of T under the null hypothesis.

    The result is bit-identical for a given ``(model, samples, seed)`` no
    matter the value of ``workers``.
    """
    if int(samples) != samples or samples < 1:
        raise DomainError(f"samples must be a positive integer, got {samples!r}")
    if int(workers) != workers or workers < 1:
        raise DomainError(f"workers must be a positive integer, got {workers!r}")
    seed = _check_seed(seed)
    samples = int(samples)
    table = AliasTable(model.probs)
    bs = block_size(model.n)
    nblocks = math.ceil(samples / bs)

    def run(b):
        return _simulate_block(model, table, seed, b, bs, samples)

    if workers == 1 or nblocks == 1:
        parts = [run(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            parts = list(pool.map(run, range(nblocks)))
    t = np.sort(np.concatenate(parts))
    t.setflags(write=False)
    return EmpiricalDistribution(sorted_t=t, sample_count=samples, seed=seed)


def empirical_cdf(dist: EmpiricalDistribution, u):
    return dist.cdf(u)


@dataclass
class ComparisonReport:
    sup_dist_plain: float
    sup_dist_corrected: float
    tail_errors: list
    grid: np.ndarray
    B: float
    C: float
    valid: bool
    sample_count: int
    seed: int
    mean_t: float
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "B": self.B,
            "C": self.C,
            "valid": self.valid,
            "mean_t": self.mean_t,
            "sup_dist_plain": self.sup_dist_plain,
            "sup_dist_corrected": self.sup_dist_corrected,
            "tail_errors": [
                {"alpha": a, "critical_plain": cp, "critical_corrected": cc,
                 "plain_rejection_rate": rp, "corrected_rejection_rate": rc}
                for a, cp, cc, rp, rc in self.tail_errors
            ],
            "grid": self.grid.tolist(),
            "warnings": list(self.warnings),
        }


def comparison_grid(dof: int) -> np.ndarray:
    return np.linspace(0.0, ChiSquare(dof).quantile(GRID_UPPER_Q), GRID_POINTS)


def compare(
    dist: EmpiricalDistribution,
    model: CategoryModel,
    correction: CorrectedDistribution | None = None,
) -> ComparisonReport:
    """Sup-distances of the plain and corrected CDFs to the simulated one,
    and rejection rates at both critical values for alpha in (0.10, 0.05, 0.01).

    The comparison also runs when the validity rule is broken; critical
    values are then solved with ``force=True`` and the report is flagged.
    ``correction`` overrides the coefficients derived from ``model``.
    """
    corr = correction or CorrectedDistribution.from_model(model)
    grid = comparison_grid(corr.dof)
    emp = dist.cdf(grid)
    sup_plain = float(np.max(np.abs(corr.chi2.cdf(grid) - emp)))
    sup_corr = float(np.max(np.abs(corr.cdf(grid) - emp)))

    notes = []
    if not corr.valid:
        notes.append("validity rule violated; corrected critical values solved with force")
    tails = []
    for a in ALPHAS:
        crit_plain = float(corr.chi2.quantile(1 - a))
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                crit_corr = corrected_critical(corr, a, force=True)
            notes.extend(str(w.message) for w in caught)
            rate_corr = dist.exceedance(crit_corr)
        except GofError as exc:
            notes.append(f"alpha={a}: {exc}")
            crit_corr = rate_corr = math.nan
        tails.append((a, crit_plain, crit_corr, dist.exceedance(crit_plain), rate_corr))

    return ComparisonReport(
        sup_dist_plain=sup_plain,
        sup_dist_corrected=sup_corr,
        tail_errors=tails,
        grid=grid,
        B=corr.B,
        C=corr.C,
        valid=corr.valid,
        sample_count=dist.sample_count,
        seed=dist.seed,
        mean_t=dist.mean(),
        warnings=notes,
    )


def histogram(dist: EmpiricalDistribution, bins: int, upper: float) -> list[tuple[float, float]]:
    """Density-normalized histogram of T over ``[0, upper]``.

    Densities are relative to the full sample, so their integral is the
    fraction of values at or below ``upper``.
    """
    if int(bins) != bins or bins < 1:
        raise DomainError(f"bins must be a positive integer, got {bins!r}")
    if not upper > 0:
        raise DomainError(f"upper must be positive, got {upper!r}")
    counts, edges = np.histogram(dist.sorted_t, bins=int(bins), range=(0.0, float(upper)))
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = counts / (dist.sample_count * width)
    return list(zip(centers.tolist(), density.tolist()))
