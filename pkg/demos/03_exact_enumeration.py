"""Checking the approximations against the exact distribution.

With k=4 and n=8 there are only 165 count vectors, so the distribution of T
is known exactly. It is a step function; both continuous approximations are
compared with it at midpoints between consecutive jumps.
"""
import numpy as np

from gofcorr import CorrectedDistribution, chi2_cdf, enumerate_exact, uniform_lattice, validate_model
from gofcorr.exact import midpoint_errors

model = validate_model([0.1, 0.2, 0.3, 0.4], 8)
exact = enumerate_exact(model)
corr = CorrectedDistribution.from_model(model)
print(f"{exact.outcomes} outcomes, {len(exact)} distinct values of T, mean {exact.mean():.12f}")

errs = midpoint_errors(exact, {"plain": lambda u: chi2_cdf(3, u), "corrected": corr.cdf}, 1.0, 12.0)
print(f"max CDF error on [1, 12]: plain {errs['plain']:.4f}, corrected {errs['corrected']:.4f}")

mids = 0.5 * (exact.t[:-1] + exact.t[1:])
print(f"\n{'u':>7} {'exact':>8} {'plain':>8} {'corrected':>10}")
for u in mids[(mids > 1) & (mids < 12)][::8]:
    print(f"{u:7.3f} {exact.cdf(u):8.4f} {float(chi2_cdf(3, u)):8.4f} {float(corr.cdf(u)):10.4f}")

# With equal probabilities T lives on an arithmetic progression.
k, n = 5, 10
start, stop, step = uniform_lattice(k, n)
uniform = enumerate_exact(validate_model(np.full(k, 1 / k), n))
print(f"\nuniform k={k}, n={n}: lattice step {step}, first atoms {np.round(uniform.t[:5], 10)}")
