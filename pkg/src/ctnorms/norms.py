"""Entrywise norms of the Cauchy-Toeplitz matrices T_n = [2 / (1 + 2(i - j))].

The matrix is never materialized. Column ``j`` (1-based) of ``T_n`` holds
``2 / (2m + 1)`` for ``m = 0..n-j`` below the diagonal and ``-2 / (2m - 1)``
for ``m = 1..j-1`` above it, so with the odd prefix sums
``O[k] = sum_{m<=k} (2m - 1)^-p`` every column power sum is
``2^p (O[n - j + 1] + O[j - 1])``. All routines work with the scaled sums
``O[n - j + 1] + O[j - 1]`` (>= 1) and restore the factor 2 at the end, which
keeps large exponents from overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import DomainError, SizeError
from .special import DEFAULT_POLICY, PrecisionPolicy, check_exponent, odd_lambda

__all__ = [
    "CTMatrix",
    "ColumnPowerSums",
    "NormValue",
    "ORACLE_MAX_N",
    "entry",
    "column_power_sums",
    "norm_p",
    "norm_pq",
    "oracle_norm",
    "lp_statistic",
    "lp1_statistic",
    "lpq_statistic",
    "asymptote_p",
]

ORACLE_MAX_N = 10_000
_CHUNK = 1 << 20
_ACC = np.longdouble


def _check_order(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"matrix order n must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class CTMatrix:
    n: int

    def __post_init__(self):
        _check_order(self.n)

    def entry(self, i: int, j: int) -> float:
        """Entry ``(i, j)`` with 1-based indices; negative iff ``i < j``."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"index ({i}, {j}) outside [1, {self.n}]^2")
        return 2.0 / (1 + 2 * (i - j))

    def to_array(self) -> np.ndarray:
        idx = np.arange(1, self.n + 1)
        return 2.0 / (1 + 2 * (idx[:, None] - idx[None, :]))


def entry(spec: CTMatrix | int, i: int, j: int) -> float:
    if not isinstance(spec, CTMatrix):
        spec = CTMatrix(spec)
    return spec.entry(i, j)


@dataclass(frozen=True)
class NormValue:
    kind: str  # "lp", "lpq" or "lp1"
    n: int
    p: float
    q: Optional[float]
    value: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ColumnPowerSums:
    """Per-column sums of ``|a_ij|^p`` for ``T_n``; ``sums[j-1]`` is column ``j``."""

    n: int
    p: float
    sums: np.ndarray

    @property
    def n0(self) -> int:
        """1-based index of the largest column sum."""
        return self.n // 2 + 1


def _odd_terms(lo: int, hi: int, p: float) -> np.ndarray:
    """(2m - 1)^-p for m = lo..hi-1, promoted for extended-precision sums.

    Terms that underflow double precision are dropped; every sum they enter
    already contains the m = 1 term 1.
    """
    odd = 2.0 * np.arange(lo, hi, dtype=np.float64) - 1.0
    return np.power(odd, -p).astype(_ACC)


def _odd_prefix_total(n: int, p: float) -> _ACC:
    total = _ACC(0)
    for lo in range(1, n + 1, _CHUNK):
        total += _odd_terms(lo, min(lo + _CHUNK, n + 1), p).sum()
    return total


def _iter_scaled_sums(n: int, p: float) -> Iterator[np.ndarray]:
    """Yield ``O[n - j + 1] + O[j - 1]`` for j = 1..n in chunks.

    ``O[j - 1]`` is carried forward from the left, ``O[n - j + 1]`` is the
    total minus a tail carried from the right, so memory stays O(chunk).
    """
    total = _odd_prefix_total(n, p)
    left = _ACC(0)   # O[a0], a = j - 1
    right = _ACC(0)  # O[n] - O[n - a0]
    for a0 in range(0, n, _CHUNK):
        a1 = min(a0 + _CHUNK, n)
        fwd = left + np.cumsum(_odd_terms(a0 + 1, a1 + 1, p))
        # terms m = n - a0, n - a0 - 1, ..., n - a1 + 1
        back = right + np.cumsum(_odd_terms(n - a1 + 1, n - a0 + 1, p)[::-1])
        o_left = np.concatenate(([left], fwd[:-1]))
        o_right = total - np.concatenate(([right], back[:-1]))
        left, right = fwd[-1], back[-1]
        yield o_left + o_right


def _scaled_sums(n: int, p: float) -> np.ndarray:
    return np.concatenate(list(_iter_scaled_sums(n, p)))


def column_power_sums(n: int, p) -> ColumnPowerSums:
    """All n column power sums in O(n) time from a shared odd prefix table."""
    n = _check_order(n)
    p = check_exponent(p)
    if math.isinf(p):
        raise DomainError("column power sums need a finite p")
    sums = (np.exp2(_ACC(p)) * _scaled_sums(n, p)).astype(np.float64)
    sums.flags.writeable = False
    return ColumnPowerSums(n=n, p=p, sums=sums)


def _lp_scaled_power(n: int, p: float) -> _ACC:
    """sum_k (2n - 2k + 1) (2k - 1)^-p, the p-th power of ||T_n||_p / 2."""
    acc = _ACC(0)
    for lo in range(1, n + 1, _CHUNK):
        hi = min(lo + _CHUNK, n + 1)
        weight = (2 * n + 1 - 2 * np.arange(lo, hi, dtype=np.int64)).astype(_ACC)
        acc += (weight * _odd_terms(lo, hi, p)).sum()
    return acc


def lp_statistic(n: int, p) -> float:
    """n^(-1/p) ||T_n||_p."""
    n = _check_order(n)
    p = check_exponent(p)
    if math.isinf(p):
        return 2.0
    return float(2 * (_lp_scaled_power(n, p) / n) ** (1 / _ACC(p)))


def lp1_statistic(n: int, p) -> float:
    """n^-1 ||T_n||_{p,1}."""
    return lpq_statistic(n, p, 1.0)


def lpq_statistic(n: int, p, q) -> float:
    """n^(-1/q) ||T_n||_{p,q}, the order-q power mean of the column p-norms."""
    n = _check_order(n)
    p = check_exponent(p)
    q = check_exponent(q, "q")
    if math.isinf(p):
        return 2.0
    if p == q:
        return lp_statistic(n, p)
    if math.isinf(q):
        return float(2 * _scaled_sums(n, p).max() ** (1 / _ACC(p)))
    r = _ACC(q) / _ACC(p)
    if r <= 1:
        acc = sum(np.power(s, r).sum() for s in _iter_scaled_sums(n, p))
        return float(2 * (acc / n) ** (1 / _ACC(q)))
    s = _scaled_sums(n, p)
    top = s.max()
    acc = np.power(s / top, r).sum()
    return float(2 * top ** (1 / _ACC(p)) * (acc / n) ** (1 / _ACC(q)))


def norm_p(n: int, p) -> NormValue:
    """||T_n||_p via 2 [sum_k (2n - 2k + 1) / (2k - 1)^p]^(1/p)."""
    n = _check_order(n)
    p = check_exponent(p)
    if math.isinf(p):
        value = 2.0
    else:
        value = float(2 * _lp_scaled_power(n, p) ** (1 / _ACC(p)))
    return NormValue("lp", n, p, None, value)


def norm_pq(n: int, p, q) -> NormValue:
    """||T_n||_{p,q}: the q-norm over columns of the column p-norms."""
    n = _check_order(n)
    p = check_exponent(p)
    q = check_exponent(q, "q")
    kind = "lp1" if q == 1 else "lpq"
    if math.isinf(q):
        value = lpq_statistic(n, p, q)
    else:
        value = lpq_statistic(n, p, q) * n ** (1 / q)
    return NormValue(kind, n, p, q, value)


def oracle_norm(n: int, p, q=None) -> NormValue:
    """Brute-force norm by direct entry summation; for cross-checking only."""
    n = _check_order(n)
    if n > ORACLE_MAX_N:
        raise SizeError(f"oracle_norm is capped at n={ORACLE_MAX_N}, got {n}")
    p = check_exponent(p)
    if q is not None:
        q = check_exponent(q, "q")

    # entries are divided by the largest modulus 2 so large p cannot overflow
    col_norms = []
    all_terms = []
    for j in range(1, n + 1):
        col = [abs(1.0 / (1 + 2 * (i - j))) for i in range(1, n + 1)]
        if math.isinf(p):
            col_norms.append(max(col))
        else:
            terms = [x ** p for x in col]
            all_terms.extend(terms)
            col_norms.append(math.fsum(terms) ** (1 / p))

    if q is None:
        value = max(col_norms) if math.isinf(p) else math.fsum(all_terms) ** (1 / p)
        return NormValue("lp", n, p, None, 2 * value)
    if math.isinf(q):
        value = max(col_norms)
    else:
        value = math.fsum(c ** q for c in col_norms) ** (1 / q)
    return NormValue("lp1" if q == 1 else "lpq", n, p, q, 2 * value)


def asymptote_p(p: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Common limit of n^(-1/p) ||T_n||_p and n^-1 ||T_n||_{p,1} as n grows.

    Equals 2^(1/p) [(2^p - 1) zeta(p)]^(1/p), evaluated as 2 (2 lambda(p))^(1/p).
    """
    return 2.0 * (2.0 * odd_lambda(p, policy)) ** (1.0 / p)
