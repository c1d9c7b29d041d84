"""Pearson goodness-of-fit test with 1/n corrections to the chi-square law.

The null distribution of Pearson's statistic T is approximated by the
chi-square density times a polynomial correction whose coefficients B and C
depend only on ``k``, ``n`` and ``Q = sum(1/p_i)``.
"""
from .correction import (
    CorrectedDistribution,
    TestReport,
    corrected_cdf,
    corrected_critical,
    corrected_pdf,
    corrected_pvalue,
    run_test,
)
from .cumulants import (
    CorrectionCoefficients,
    b_bruteforce,
    b_closed_form,
    c_bruteforce,
    c_closed_form,
    coefficients,
    cumulant3,
    cumulant4_paired,
    log_mgf,
)
from .errors import *  # noqa: F401,F403
from .exact import ExactDistribution, enumerate_exact, exact_cdf, uniform_lattice
from .model import (
    CategoryModel,
    ObservedCounts,
    covariance_matrix,
    symmetric_polynomials,
    t_statistic,
    validate_model,
    y_vector,
)
from .montecarlo import (
    ComparisonReport,
    EmpiricalDistribution,
    compare,
    empirical_cdf,
    histogram,
    sample_counts,
    simulate,
)
from .special import (
    ChiSquare,
    chi2_cdf,
    chi2_pdf,
    chi2_quantile,
    ln_gamma,
    regularized_gamma_p,
)

__version__ = "0.1.0"
