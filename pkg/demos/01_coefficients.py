"""How lopsided probabilities move the chi-square approximation.

B and C depend on the category probabilities only through Q = sum(1/p).
Uniform probabilities minimize Q; a few rare categories inflate it, and
with it both coefficients. This script walks a family of geometric
probability vectors and prints the coefficients next to the validity rule.
"""
import numpy as np

from gofcorr import b_bruteforce, coefficients, validate_model
from gofcorr.cli import geometric_probs

k, n = 10, 20
print(f"k={k}, n={n}, validity threshold 0.15k = {0.15 * k:.2f}\n")
print(f"{'ratio':>6} {'min p':>8} {'Q':>10} {'B':>8} {'C':>8}  valid")
for ratio in (1.0, 2.0, 5.0, 10.0, 30.0, 100.0):
    model = validate_model(geometric_probs(k, ratio), n)
    c = coefficients(model)
    print(f"{ratio:6.0f} {model.probs.min():8.4f} {c.Q:10.2f} {c.B:8.4f} {c.C:8.4f}  {c.valid}")

# The closed form is a shortcut for a sum over joint fourth cumulants.
model = validate_model(geometric_probs(k, 5.0), n)
print(f"\nB via cumulant sums {b_bruteforce(model):.15f}")
print(f"B via closed form   {coefficients(model).B:.15f}")

# Doubling the sample size halves both coefficients.
for m in (n, 2 * n, 4 * n):
    c = coefficients(validate_model(geometric_probs(k, 5.0), m))
    print(f"n={m:3d}: B={c.B:.4f} C={c.C:.4f}")
