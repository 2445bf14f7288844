"""Real-argument zeta, the odd-index lambda function and power means."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from scipy.special import bernoulli

from .errors import DomainError

__all__ = [
    "Exponent",
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "check_exponent",
    "zeta",
    "odd_lambda",
    "power_mean",
]


@dataclass(frozen=True)
class Exponent:
    """Norm exponent: a finite real >= 1 or ``math.inf``."""

    value: float

    def __post_init__(self):
        check_exponent(self.value)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def __float__(self) -> float:
        return float(self.value)


def check_exponent(value, name: str = "p") -> float:
    """Validate a norm exponent and return it as a float."""
    if isinstance(value, Exponent):
        return value.value
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if math.isnan(x) or x < 1:
        raise DomainError(f"{name} must be >= 1 or inf, got {value!r}")
    return x


@dataclass(frozen=True)
class PrecisionPolicy:
    rel_tol: float = 1e-12
    zeta_terms: int = 32
    zeta_bernoulli_order: int = 8
    # smallest admissible p - 1 for anything built on zeta(p)
    min_p_gap: float = 1e-6

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.min_p_gap > 0:
            raise DomainError("min_p_gap must be positive")
        if self.zeta_terms < 1 or self.zeta_bernoulli_order < 1:
            raise DomainError("zeta_terms and zeta_bernoulli_order must be positive")


DEFAULT_POLICY = PrecisionPolicy()


@lru_cache(maxsize=None)
def _bernoulli_coefficients(order: int) -> tuple[float, ...]:
    """B_{2j} / (2j)! for j = 1..order."""
    b = bernoulli(2 * order)
    return tuple(b[2 * j] / math.factorial(2 * j) for j in range(1, order + 1))


def _check_zeta_arg(p: float, policy: PrecisionPolicy) -> float:
    p = float(p)
    if math.isnan(p) or p < 1 + policy.min_p_gap:
        raise DomainError(
            f"zeta-based quantities need p >= 1 + {policy.min_p_gap:g}, got p={p!r}"
        )
    return p


def zeta(p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Riemann zeta function for real ``p > 1``.

    Sums the first ``zeta_terms - 1`` terms directly and closes the tail with
    the Euler-Maclaurin formula (integral, half-term and Bernoulli terms).
    """
    p = _check_zeta_arg(p, policy)
    if math.isinf(p):
        return 1.0
    big_n = policy.zeta_terms
    terms = [k ** -p for k in range(1, big_n)]
    terms.append(big_n ** (1 - p) / (p - 1))
    terms.append(0.5 * big_n ** -p)
    # rising factorial p (p+1) ... (p+2j-2) times N^(-p-2j+1)
    rising = p
    power = big_n ** (-p - 1)
    for j, coeff in enumerate(_bernoulli_coefficients(policy.zeta_bernoulli_order), 1):
        terms.append(coeff * rising * power)
        rising *= (p + 2 * j - 1) * (p + 2 * j)
        power /= big_n * big_n
    return math.fsum(terms)


def odd_lambda(p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Sum of (2k-1)^-p over k >= 1, i.e. (1 - 2^-p) zeta(p)."""
    p = _check_zeta_arg(p, policy)
    return -math.expm1(-p * math.log(2.0)) * zeta(p, policy)


def power_mean(r: float, xs: Iterable[float]) -> float:
    """Power mean of order ``r`` of positive numbers.

    ``r = 0`` gives the geometric mean and ``r = +-inf`` the max / min.
    """
    values: Sequence[float] = [float(x) for x in xs]
    if not values:
        raise DomainError("power_mean needs a nonempty list")
    if any(not x > 0 for x in values):
        raise DomainError("power_mean needs strictly positive entries")
    r = float(r)
    if math.isnan(r):
        raise DomainError("order r must not be NaN")
    if r == math.inf:
        return max(values)
    if r == -math.inf:
        return min(values)
    n = len(values)
    if r == 0:
        return math.exp(math.fsum(math.log(x) for x in values) / n)
    # scaled by the extreme entry against overflow; expm1/log1p keep small |r| accurate
    scale = max(values) if r > 0 else min(values)
    mean = math.fsum(math.expm1(r * math.log(x / scale)) for x in values) / n
    return scale * math.exp(math.log1p(mean) / r)
