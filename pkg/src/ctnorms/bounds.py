"""Explicit bounds on the normalized norms of T_n and the auxiliary sign functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .norms import _check_order, lp_statistic
from .special import DEFAULT_POLICY, PrecisionPolicy, check_exponent, odd_lambda

__all__ = [
    "BoundReport",
    "CorrectionTerms",
    "REL_SLACK",
    "bozkurt_bounds",
    "bozkurt_report",
    "correction_terms",
    "thm2_bounds",
    "conjecture_rhs_upper",
    "conjecture_rhs_lower",
    "lemma_g",
    "lemma_f",
    "lemma_h",
    "lemma_psi",
]

# relative slack granted to every inequality check against rounding
REL_SLACK = 1e-13


def _below(a: float, b: float, strict: bool) -> bool:
    """``a < b`` (or ``<=``) up to REL_SLACK."""
    slack = REL_SLACK * max(abs(a), abs(b))
    return a < b + slack if strict else a <= b + slack


@dataclass(frozen=True)
class BoundReport:
    """A normalized norm together with the bounds claimed for it.

    ``lower`` is None when no lower bound applies or when it is vacuous
    (nonpositive radicand); ``vacuous`` tells the two apart.
    """

    n: int
    p: float
    statistic: float
    lower: Optional[float]
    upper: Optional[float]
    lower_strict: bool = True
    upper_strict: bool = True
    vacuous: bool = False

    @property
    def contained(self) -> bool:
        ok = True
        if self.lower is not None:
            ok &= _below(self.lower, self.statistic, self.lower_strict)
        if self.upper is not None:
            ok &= _below(self.statistic, self.upper, self.upper_strict)
        return ok


@dataclass(frozen=True)
class CorrectionTerms:
    c_prime: float
    c_double_prime: float


def bozkurt_bounds(p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """Two-sided bound ``([(2^p-1) zeta(p)]^(1/p), 2^(1/p) [(2^p-1) zeta(p)]^(1/p))``.

    Uses ``(2^p - 1) zeta(p) = 2^p lambda(p)`` so the values stay finite for
    large p.
    """
    lam = odd_lambda(p, policy)
    lower = 2.0 * lam ** (1.0 / p)
    return lower, 2.0 ** (1.0 / p) * lower


def bozkurt_report(n: int, p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> BoundReport:
    n = _check_order(n)
    lower, upper = bozkurt_bounds(p, policy)
    return BoundReport(
        n=n, p=float(p), statistic=lp_statistic(n, p),
        lower=lower, upper=upper, lower_strict=False, upper_strict=False,
    )


def correction_terms(n: int, p: float) -> CorrectionTerms:
    p = float(p)
    c1 = (n * n + 2) / ((p - 1) * n ** (p + 1)) + 2.0 ** (p + 1) / (n * (2 * n - 1) ** p)
    c2 = 2.0 ** (p - 1) / ((p - 1) * (2 * n + 1) ** (p - 1))
    return CorrectionTerms(c1, c2)


def thm2_bounds(n: int, p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> BoundReport:
    """Size-dependent sandwich for n^(-1/p) ||T_n||_p, n >= 2, p > 1.

    Both sides are strict. When the lower radicand is nonpositive the lower
    bound carries no information and the report is flagged ``vacuous``.
    """
    n = _check_order(n)
    if n < 2:
        raise DomainError("the size-dependent bounds need n >= 2")
    p = float(p)
    base = 2.0 ** p * odd_lambda(p, policy)  # (2^p - 1) zeta(p)
    c = correction_terms(n, p)
    radicand = (1 + 2 / n**2) * base - c.c_prime
    lower = radicand ** (1 / p) if radicand > 0 else None
    upper = (2 - 1 / n) ** (1 / p) * (base - c.c_double_prime) ** (1 / p)
    return BoundReport(
        n=n, p=p, statistic=lp_statistic(n, p), lower=lower, upper=upper,
        vacuous=lower is None,
    )


def conjecture_rhs_upper(p) -> float:
    """4 (1/2 + 1/(2^p - 1))^(1/p), the constant in the q <= p inequality.

    ``p = inf`` returns the limit 4.
    """
    p = check_exponent(p)
    if math.isinf(p):
        return 4.0
    return 4.0 * (0.5 + 1.0 / math.expm1(p * math.log(2.0))) ** (1.0 / p)


def conjecture_rhs_lower(p) -> float:
    """4 (1/(2^p - 1))^(1/p), the constant in the p < q inequality.

    ``p = inf`` returns the limit 2.
    """
    p = check_exponent(p)
    if math.isinf(p):
        return 2.0
    return 4.0 * math.expm1(p * math.log(2.0)) ** (-1.0 / p)


def lemma_g(p: float) -> float:
    """3 - 2^p + 3^-p - (2/3)^p; positive below delta, negative above."""
    return 3.0 - 2.0**p + 3.0**-p - (2.0 / 3.0) ** p


def lemma_f(p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """lambda(p) - 2^(p-1) (1/2 + 1/(2^p - 1)); positive below mu, negative above."""
    return odd_lambda(p, policy) - 2.0 ** (p - 1) * (0.5 + 1.0 / (2.0**p - 1))


def lemma_h(p: float) -> float:
    return (
        2.0 ** (p + 1) - 5 + 3 * (2.0 / 3.0) ** p + (2.0 / 5.0) ** p
        - 3.0 ** (1 - p) - 5.0**-p
    )


def lemma_psi(p: float) -> float:
    """Sign function behind n^(-1/p) ||T_7||_p < 4 (1/2 + 1/(2^p-1))^(1/p)."""
    return (
        7 * 2.0 ** (p - 1) + 7 * 2.0**p / (2.0**p - 1) - 13
        - 11 * 3.0**-p - 9 * 5.0**-p - 7.0 ** (1 - p)
        - 5 * 9.0**-p - 3 * 11.0**-p - 13.0**-p
    )
