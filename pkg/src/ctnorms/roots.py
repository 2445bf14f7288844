"""Crossover constants, integer thresholds and the region classifier.

Every equation solved here is strictly monotone on its bracket, so plain
bisection is enough; thresholds come from exponential bracketing followed by
binary search over monotone statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .bounds import (
    bozkurt_bounds,
    conjecture_rhs_lower,
    conjecture_rhs_upper,
    lemma_f,
    lemma_g,
)
from .errors import ConvergenceError, DomainError, NoRoot, SearchOverflow
from .norms import _check_order, lp1_statistic, lp_statistic, lpq_statistic
from .special import DEFAULT_POLICY, PrecisionPolicy, check_exponent

__all__ = [
    "RootResult",
    "ThresholdPair",
    "RegionVerdict",
    "MAX_ITER",
    "RESIDUAL_TOL",
    "MAX_THRESHOLD_N",
    "BOUNDARY_BAND",
    "find_delta",
    "find_mu",
    "find_delta_p",
    "delta_p_equation_residual",
    "find_thresholds",
    "find_eta",
    "bozkurt_lower_threshold",
    "classify_region",
]

MAX_ITER = 200
RESIDUAL_TOL = 1e-10
MAX_THRESHOLD_N = 10**8
# relative half-width of the band treated as equality by the classifier
BOUNDARY_BAND = 1e-9

_XTOL = 1e-15
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class RootResult:
    value: float
    bracket: tuple[float, float]
    residual: float
    iterations: int
    converged: bool
    # sign changes seen by a coarse scan, where one was run
    sign_changes: Optional[int] = None


@dataclass(frozen=True)
class ThresholdPair:
    p: float
    n1: int
    n2: int


@dataclass(frozen=True)
class RegionVerdict:
    n: int
    p: float
    q: float
    predicted: str  # "holds", "opposite" or "boundary"
    case_label: str
    observed: str
    statistic: float
    constant: float
    agree: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "agree", self.observed == "boundary" or self.predicted == self.observed
        )


def _bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    residual_tol: float = RESIDUAL_TOL,
    sign_changes: Optional[int] = None,
) -> RootResult:
    flo, fhi = func(lo), func(hi)
    if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
        raise NoRoot(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    value, info = optimize.bisect(
        func, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=MAX_ITER,
        full_output=True, disp=False,
    )
    if not info.converged:
        raise ConvergenceError(f"bisection did not converge in {MAX_ITER} iterations")
    residual = func(value)
    return RootResult(
        value=value, bracket=(lo, hi), residual=residual,
        iterations=info.iterations, converged=abs(residual) <= residual_tol,
        sign_changes=sign_changes,
    )


@lru_cache(maxsize=None)
def find_delta() -> RootResult:
    """Root of 3 - 2^p + 3^-p - (2/3)^p, i.e. of 2^p + 6^p = 3^(p+1) + 1."""
    return _bisect(lemma_g, 1.0, 2.0, residual_tol=1e-12)


@lru_cache(maxsize=None)
def find_mu(policy: PrecisionPolicy = DEFAULT_POLICY) -> RootResult:
    """Root of lambda(p) = 2^(p-1) (1/2 + 1/(2^p - 1))."""
    f = lambda p: lemma_f(p, policy)  # noqa: E731
    gap = 0.5
    while f(1 + gap) <= 0:
        gap /= 2
        if gap < policy.min_p_gap:
            raise NoRoot("lemma f is not positive anywhere above 1 + min_p_gap")
    return _bisect(f, 1 + gap, 3.0)


def delta_p_equation_residual(p: float, q: float) -> float:
    """Relative residual of 2^-p ((1+3^-p)^(q/p) + 2^(q/p))^p = 2^(pq) (2^p-1)^-q.

    Both sides are compared in log form; the return value is
    ``left / right - 1``.
    """
    log_left = -p * math.log(2) + p * math.log((1 + 3.0**-p) ** (q / p) + 2.0 ** (q / p))
    log_right = p * q * math.log(2) - q * math.log(2.0**p - 1)
    return math.expm1(log_left - log_right)


def find_delta_p(p: float, q_max: float = 1e6) -> RootResult:
    """Crossover exponent q for n = 2 in the p < q inequality, 1 < p < delta.

    Solves 2^(-1/q) ||T_2||_{p,q} = 4 (2^p - 1)^(-1/p) for q in (p, inf);
    the left side grows with q towards 2^(1 + 1/p).
    """
    p = float(p)
    delta = find_delta().value
    if not 1 < p < delta:
        raise DomainError(f"delta_p is defined for 1 < p < {delta:.6f}, got p={p!r}")
    target = conjecture_rhs_lower(p)
    phi = lambda q: lpq_statistic(2, p, q) - target  # noqa: E731
    hi = p + 1.0
    while phi(hi) <= 0:
        hi = 2 * hi
        if hi > q_max:
            raise ConvergenceError(f"delta_p bracket exceeded q={q_max:g} for p={p!r}")
    return _bisect(phi, p, hi)


def _last_at_or_below(stat: Callable[[int], float], bound: float, max_n: int) -> Optional[int]:
    """Largest n with stat(n) <= bound for increasing stat; None past max_n."""
    if stat(1) > bound:
        return 0
    lo, hi = 1, 2
    while stat(hi) <= bound:
        lo = hi
        if hi == max_n:
            return None
        hi = min(2 * hi, max_n)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if stat(mid) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


def _check_threshold_p(p: float, policy: PrecisionPolicy) -> float:
    p = float(p)
    mu = find_mu(policy).value
    if not 1 + policy.min_p_gap < p < mu:
        raise DomainError(
            f"thresholds exist for 1 + {policy.min_p_gap:g} < p < {mu:.6f}, got p={p!r}"
        )
    return p


@lru_cache(maxsize=4096)
def _search_thresholds(p: float, max_n: int) -> ThresholdPair:
    # no zeta is involved, so this also serves p within min_p_gap of 1
    bound = conjecture_rhs_upper(p)
    n1 = _last_at_or_below(lambda n: lp_statistic(n, p), bound, max_n)
    if n1 is None:
        raise SearchOverflow(f"N1 exceeds {max_n} for p={p!r}", max_n)
    n2 = _last_at_or_below(lambda n: lp1_statistic(n, p), bound, max_n)
    if n2 is None:
        raise SearchOverflow(f"N2 exceeds {max_n} for p={p!r}", max_n, n1=n1)
    return ThresholdPair(p=p, n1=n1, n2=n2)


def find_thresholds(
    p: float,
    policy: PrecisionPolicy = DEFAULT_POLICY,
    max_n: int = MAX_THRESHOLD_N,
) -> ThresholdPair:
    """Largest orders at which the l_p and l_{p,1} statistics stay at or below
    4 (1/2 + 1/(2^p - 1))^(1/p).

    Results are memoized per (p, max_n).
    """
    return _search_thresholds(_check_threshold_p(p, policy), int(max_n))


def _solve_eta(p: float, n: int) -> RootResult:
    bound = conjecture_rhs_upper(p)
    phi = lambda q: lpq_statistic(n, p, q) - bound  # noqa: E731
    if phi(1.0) > 0:
        raise DomainError(f"n={n} exceeds N2 for p={p!r}")
    if phi(p) <= 0:
        raise DomainError(f"n={n} does not exceed N1 for p={p!r}")
    return _bisect(phi, 1.0, p)


def find_eta(p: float, n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> RootResult:
    """Crossover q in (1, p) where n^(-1/q) ||T_n||_{p,q} meets the upper constant.

    Requires N1 < n <= N2. Both statistics are monotone in n, so this is
    checked directly from the signs at q = 1 and q = p.
    """
    return _solve_eta(_check_threshold_p(p, policy), _check_order(n))


def bozkurt_lower_threshold(
    n: int, policy: PrecisionPolicy = DEFAULT_POLICY, scan_step: float = 1e-3
) -> RootResult:
    """Exponent below which the two-sided zeta bound's lower side fails for T_n.

    Root in p of [(2^p-1) zeta(p)]^(1/p) = n^(-1/p) ||T_n||_p on
    (1 + min_p_gap, 2]. A scan at ``scan_step`` resolution counts sign
    changes; more than one is reported through ``sign_changes``.
    """
    n = _check_order(n)
    gap = lambda p: bozkurt_bounds(p, policy)[0] - lp_statistic(n, p)  # noqa: E731
    lo, hi = 1 + policy.min_p_gap, 2.0
    if gap(lo) <= 0:
        raise NoRoot(f"lower bound already holds at p={lo!r} for n={n}")
    if gap(hi) > 0:
        raise NoRoot(f"lower bound fails on all of ({lo!r}, 2] for n={n}")
    grid = np.append(np.arange(lo, hi, scan_step), hi)
    signs = np.sign([gap(x) for x in grid])
    changes = int(np.count_nonzero(signs[1:] != signs[:-1]))
    return _bisect(gap, lo, hi, sign_changes=changes)


def _observe(stat: float, constant: float, holds_if_above: bool) -> str:
    band = BOUNDARY_BAND * constant
    if abs(stat - constant) <= band:
        return "boundary"
    above = stat > constant
    return "holds" if above == holds_if_above else "opposite"


def _lower_region(n: int, p: float, q: float) -> tuple[str, str]:
    if n >= 3:
        return "holds", "lower: n>=3"
    if n == 1:
        return "opposite", "lower: n=1"
    if p == 1:
        return "opposite", "lower: n=2, p=1"
    if p >= find_delta().value:
        return "holds", "lower: n=2, p>=delta"
    if q >= find_delta_p(p).value:
        return "holds", "lower: n=2, q>=delta_p"
    return "opposite", "lower: n=2, q<delta_p"


def _upper_region(n: int, p: float, q: float, policy: PrecisionPolicy) -> tuple[str, str]:
    if p == 1:
        return ("holds", "upper: p=1, n<=7") if n <= 7 else ("opposite", "upper: p=1, n>=8")
    if p >= find_mu(policy).value:
        return "holds", "upper: mu<=p"
    # any threshold past the cap is past n as well
    cap = max(4 * n, 4096)
    try:
        pair = _search_thresholds(p, cap)
        n1, n2 = pair.n1, pair.n2
    except SearchOverflow as exc:
        n1, n2 = exc.n1, None
    if n1 is None or n <= n1:
        return "holds", "upper: 1<p<mu, n<=N1"
    if n2 is not None and n > n2:
        return "opposite", "upper: 1<p<mu, n>N2"
    if q < _solve_eta(p, n).value:
        return "holds", "upper: N1<n<=N2, q<eta"
    return "opposite", "upper: N1<n<=N2, q>=eta"


def classify_region(n: int, p, q, policy: PrecisionPolicy = DEFAULT_POLICY) -> RegionVerdict:
    """Compare the direction predicted for (n, p, q) with the computed norm.

    For p < q the relevant inequality is
    n^(-1/q) ||T_n||_{p,q} >= 4 (1/(2^p - 1))^(1/p); for q <= p it is
    n^(-1/q) ||T_n||_{p,q} < 4 (1/2 + 1/(2^p - 1))^(1/p).
    """
    n = _check_order(n)
    p = check_exponent(p, "p")
    q = check_exponent(q, "q")
    stat = lpq_statistic(n, p, q)
    if p < q:
        constant = conjecture_rhs_lower(p)
        predicted, label = _lower_region(n, p, q)
        observed = _observe(stat, constant, holds_if_above=True)
    else:
        constant = conjecture_rhs_upper(p)
        predicted, label = _upper_region(n, p, q, policy)
        observed = _observe(stat, constant, holds_if_above=False)
    return RegionVerdict(
        n=n, p=p, q=q, predicted=predicted, case_label=label,
        observed=observed, statistic=stat, constant=constant,
    )
