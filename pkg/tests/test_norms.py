import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ctnorms.norms as norms_mod
from ctnorms.errors import DomainError, SizeError
from ctnorms.norms import (
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


def direct_column_sums(n, p):
    a = np.abs(CTMatrix(n).to_array())
    return np.array([math.fsum(a[:, j] ** p) for j in range(n)])


@pytest.mark.parametrize("i,j,expected", [(1, 1, 2.0), (1, 2, -2.0), (3, 1, 0.4)])
def test_entry_examples(i, j, expected):
    assert entry(3, i, j) == expected


def test_entry_sign_and_bounds():
    m = CTMatrix(6)
    for i in range(1, 7):
        for j in range(1, 7):
            assert (m.entry(i, j) < 0) == (i < j)
    for bad in [(0, 1), (1, 7), (7, 7)]:
        with pytest.raises(IndexError):
            m.entry(*bad)
    with pytest.raises(DomainError):
        CTMatrix(0)


def test_column_sums_examples():
    np.testing.assert_allclose(column_power_sums(2, 1).sums, [8 / 3, 4], rtol=1e-15)
    p = 1.7
    np.testing.assert_allclose(
        column_power_sums(2, p).sums, [2**p * (1 + 3**-p), 2 * 2**p], rtol=1e-15
    )
    for p in (1.0, 2.5):
        np.testing.assert_allclose(column_power_sums(1, p).sums, [2**p], rtol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 10, 57, 200])
@pytest.mark.parametrize("p", [1.0, 1.37, 2.0, 6.5])
def test_column_sums_match_direct_and_peak_at_n0(n, p):
    cps = column_power_sums(n, p)
    np.testing.assert_allclose(cps.sums, direct_column_sums(n, p), rtol=1e-13)
    assert cps.n0 == n // 2 + 1
    # for large p the central columns agree to double precision
    assert cps.sums[cps.n0 - 1] == cps.sums.max()
    if p <= 2:
        # odd n ties columns n0 and n0 + 1; argmax reports the first
        assert int(np.argmax(cps.sums)) + 1 == cps.n0
    assert not cps.sums.flags.writeable


def test_column_sums_closed_form_identity():
    n, p = 9, 1.45
    cps = column_power_sums(n, p)
    for j in range(1, n + 1):
        below = math.fsum((2 * m + 1) ** -p for m in range(0, n - j + 1))
        above = math.fsum((2 * m - 1) ** -p for m in range(1, j))
        assert cps.sums[j - 1] == pytest.approx(2**p * (below + above), rel=1e-14)


def test_chunked_evaluation_matches_single_pass(monkeypatch):
    n, p = 1000, 1.3
    reference = (lp1_statistic(n, p), lpq_statistic(n, p, 3.5), lp_statistic(n, p),
                 column_power_sums(n, p).sums.copy())
    monkeypatch.setattr(norms_mod, "_CHUNK", 37)
    chunked = (lp1_statistic(n, p), lpq_statistic(n, p, 3.5), lp_statistic(n, p),
               column_power_sums(n, p).sums)
    for a, b in zip(reference[:3], chunked[:3]):
        assert a == pytest.approx(b, rel=1e-15)
    np.testing.assert_allclose(reference[3], chunked[3], rtol=1e-15)


def test_norm_p_examples():
    for p in (1.0, 2.0, 7.3):
        assert norm_p(1, p).value == 2.0
    assert norm_p(3, 2).value == pytest.approx(math.sqrt(1612 / 75), rel=1e-15)
    assert norm_p(2, 1).value == pytest.approx(20 / 3, rel=1e-15)


def test_norm_p_three_by_three_closed_form():
    for p in (1.0, 1.5, 3.0):
        expected = (2**p * (5 + 3 ** (1 - p) + 5**-p)) ** (1 / p)
        assert norm_p(3, p).value == pytest.approx(expected, rel=1e-14)


def test_norm_pq_examples():
    assert norm_pq(2, 1, 1).value == pytest.approx(20 / 3, rel=1e-15)
    assert norm_pq(2, 1, 1).kind == "lp1"
    for p, q in [(1.3, 2.0), (2.0, 1.2), (1.5, 9.0)]:
        expected = 2 * ((1 + 3**-p) ** (q / p) + 2 ** (q / p)) ** (1 / q)
        assert norm_pq(2, p, q).value == pytest.approx(expected, rel=1e-14)
    assert norm_pq(5, math.inf, 2).value == pytest.approx(2 * math.sqrt(5), rel=1e-15)
    assert norm_pq(5, math.inf, math.inf).value == 2.0


def test_norm_pq_infinite_q_is_largest_column():
    n, p = 11, 1.8
    cps = column_power_sums(n, p)
    assert norm_pq(n, p, math.inf).value == pytest.approx(cps.sums.max() ** (1 / p), rel=1e-14)
    assert norm_pq(n, p, math.inf).value == pytest.approx(oracle_norm(n, p, math.inf).value, rel=1e-14)


def test_norm_pq_equal_exponents_reduce_to_norm_p():
    for n, p in [(4, 1.0), (17, 2.6)]:
        assert norm_pq(n, p, p).value == pytest.approx(norm_p(n, p).value, rel=1e-14)


def test_oracle_examples():
    assert oracle_norm(1, 3).value == 2.0
    assert oracle_norm(2, 2).value == pytest.approx(math.sqrt(112 / 9), rel=1e-15)
    assert norm_pq(50, 1.3, 2.7).value == pytest.approx(oracle_norm(50, 1.3, 2.7).value, rel=1e-11)


def test_oracle_size_cap():
    with pytest.raises(SizeError):
        oracle_norm(10_001, 2.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 200), st.floats(1, 6), st.floats(1, 6))
def test_closed_forms_match_oracle(n, p, q):
    assert norm_p(n, p).value == pytest.approx(oracle_norm(n, p).value, rel=1e-11)
    assert norm_pq(n, p, q).value == pytest.approx(oracle_norm(n, p, q).value, rel=1e-11)


@pytest.mark.parametrize("p", [1.0, 1.3, 2.0, 5.0, 12.0])
def test_lp_statistic_strictly_increasing_from_two(p):
    stats = [lp_statistic(n, p) for n in range(1, 400)]
    assert stats[0] == 2.0
    assert all(b > a for a, b in zip(stats, stats[1:]))
    assert all(s > 2 for s in stats[1:])


@pytest.mark.parametrize("p", [1.0, 1.2, 1.5, 2.0, 4.0])
def test_lp1_statistic_nondecreasing(p):
    stats = [lp1_statistic(n, p) for n in range(1, 400)]
    assert all(a <= b for a, b in zip(stats, stats[1:]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 300), st.floats(1, 8), st.floats(1, 8))
def test_power_mean_sandwich(n, p, q):
    q, p = min(p, q), max(p, q)
    s1, sq, sp = lp1_statistic(n, p), lpq_statistic(n, p, q), lp_statistic(n, p)
    assert s1 <= sq * (1 + 1e-13)
    assert sq <= sp * (1 + 1e-13)


def test_asymptote_examples():
    assert asymptote_p(2) == pytest.approx(math.pi, rel=1e-14)
    with pytest.raises(DomainError):
        asymptote_p(1 + 1e-9)


def test_asymptote_p_1_5_exceeds_statistic_on_sweep():
    limit = asymptote_p(1.5)
    for n in np.unique(np.geomspace(1, 10**5, 120).astype(int)):
        assert lp_statistic(int(n), 1.5) < limit
        assert lp1_statistic(int(n), 1.5) < limit


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_statistics_converge_to_asymptote(p):
    # p = 1.2 is covered in test_acceptance (criterion 9)
    limit = asymptote_p(p)
    for stat in (lp_statistic(10**5, p), lp1_statistic(10**5, p)):
        assert 0.98 * limit <= stat < limit


def test_statistics_stay_below_asymptote_at_p_1_2():
    limit = asymptote_p(1.2)
    assert lp_statistic(10**5, 1.2) < limit
    assert lp1_statistic(10**5, 1.2) < limit


def test_large_exponent_does_not_overflow():
    v = norm_p(50, 2000.0).value
    assert math.isfinite(v)
    # only the k = 1 term of the closed form survives
    assert v == pytest.approx(2 * 99 ** (1 / 2000), rel=1e-12)
    assert lpq_statistic(50, 2000.0, 3.0) == pytest.approx(
        oracle_norm(50, 2000.0, 3.0).value * 50 ** (-1 / 3), rel=1e-12)


def test_bad_exponents_rejected():
    with pytest.raises(DomainError):
        norm_p(3, 0.5)
    with pytest.raises(DomainError):
        norm_pq(3, 2.0, math.nan)
    with pytest.raises(DomainError):
        column_power_sums(3, math.inf)
