"""Norms of the Cauchy-Toeplitz matrices T_n = [2 / (1 + 2(i - j))], their
bounds, crossover constants and thresholds."""

from .bounds import (
    BoundReport,
    bozkurt_bounds,
    conjecture_rhs_lower,
    conjecture_rhs_upper,
    lemma_f,
    lemma_g,
    lemma_h,
    lemma_psi,
    thm2_bounds,
)
from .errors import (
    ConvergenceError,
    CTNormsError,
    DomainError,
    NoRoot,
    SearchOverflow,
    SizeError,
)
from .norms import (
    CTMatrix,
    asymptote_p,
    column_power_sums,
    entry,
    lp1_statistic,
    lp_statistic,
    lpq_statistic,
    norm_p,
    norm_pq,
    oracle_norm,
)
from .reports import reproduce_table, verify_all
from .roots import (
    RootResult,
    ThresholdPair,
    bozkurt_lower_threshold,
    classify_region,
    find_delta,
    find_delta_p,
    find_eta,
    find_mu,
    find_thresholds,
)
from .special import Exponent, PrecisionPolicy, odd_lambda, power_mean, zeta

__version__ = "0.1.0"
