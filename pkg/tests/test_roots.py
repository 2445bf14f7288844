import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctnorms.bounds import bozkurt_bounds, conjecture_rhs_upper, lemma_f, lemma_g
from ctnorms.errors import DomainError, NoRoot, SearchOverflow
from ctnorms.norms import lp1_statistic, lp_statistic, lpq_statistic
from ctnorms.reports import TABLE1, TABLE2, TABLE3
from ctnorms.roots import (
    RESIDUAL_TOL,
    RegionVerdict,
    bozkurt_lower_threshold,
    classify_region,
    delta_p_equation_residual,
    find_delta,
    find_delta_p,
    find_eta,
    find_mu,
    find_thresholds,
)


def test_delta():
    res = find_delta()
    assert res.value == pytest.approx(1.40485, abs=1e-4)
    assert res.converged
    assert abs(lemma_g(res.value)) < 1e-10
    v = res.value
    assert abs(2**v + 6**v - 3 ** (v + 1) - 1) < 1e-9
    lo, hi = res.bracket
    assert lemma_g(lo) > 0 > lemma_g(hi)


def test_mu():
    res = find_mu()
    assert res.value == pytest.approx(1.6181, abs=1e-3)
    assert abs(lemma_f(res.value)) < 1e-10
    assert lemma_f(1.5) > 0 > lemma_f(1.7)
    lo, hi = res.bracket
    assert lemma_f(lo) > 0 > lemma_f(hi)


@pytest.mark.parametrize("p,gold", sorted(TABLE2.items()))
def test_delta_p_matches_table(p, gold):
    res = find_delta_p(p)
    assert res.value == pytest.approx(gold, abs=1e-3)
    # the monotone form and the original equation agree on the root
    assert abs(delta_p_equation_residual(p, res.value)) < 1e-10
    assert abs(res.residual) < RESIDUAL_TOL


def test_delta_p_decreasing_and_above_p():
    ps = sorted(TABLE2)
    vals = [find_delta_p(p).value for p in ps]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > p for p, v in zip(ps, vals))
    assert vals[-1] > 1.4


def test_delta_p_domain():
    for bad in (1.0, 1.41, 2.0):
        with pytest.raises(DomainError):
            find_delta_p(bad)


@pytest.mark.parametrize("p,gold", sorted(TABLE1.items()))
def test_thresholds_match_table(p, gold):
    pair = find_thresholds(p)
    assert (pair.n1, pair.n2) == gold
    bound = conjecture_rhs_upper(p)
    # both statistics cross the bound between N and N + 1
    assert lp_statistic(pair.n1, p) <= bound < lp_statistic(pair.n1 + 1, p)
    assert lp1_statistic(pair.n2, p) <= bound < lp1_statistic(pair.n2 + 1, p)


def test_thresholds_domain_and_overflow():
    for bad in (1.0, 1.0000001, 1.62, 3.0):
        with pytest.raises(DomainError):
            find_thresholds(bad)
    with pytest.raises(SearchOverflow) as info:
        find_thresholds(1.6, max_n=64)
    assert info.value.max_n == 64


def test_thresholds_concurrent_readers():
    ps = [1.2, 1.3, 1.5, 1.52, 1.55] * 8
    with ThreadPoolExecutor(max_workers=8) as pool:
        pairs = list(pool.map(find_thresholds, ps))
    for p, pair in zip(ps, pairs):
        assert (pair.n1, pair.n2) == TABLE1[p]


@pytest.mark.parametrize("key,gold", sorted(TABLE3.items()))
def test_eta_matches_table(key, gold):
    p, n = key
    res = find_eta(p, n)
    assert res.value == pytest.approx(gold, abs=1e-3)
    assert abs(res.residual) < RESIDUAL_TOL
    bound = conjecture_rhs_upper(p)
    assert lpq_statistic(n, p, 1.0) < bound < lpq_statistic(n, p, p)


def test_eta_decreases_in_n():
    for p in (1.54, 1.55, 1.56):
        pair = find_thresholds(p)
        vals = [find_eta(p, n).value for n in range(pair.n1 + 1, pair.n2 + 1)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_eta_window():
    with pytest.raises(DomainError):
        find_eta(1.5, 44)  # n = N1
    with pytest.raises(DomainError):
        find_eta(1.56, 119)  # past N2
    with pytest.raises(DomainError):
        find_eta(1.7, 10)


def test_epsilon_roots():
    vals = []
    for n in (2, 5, 10, 100):
        res = bozkurt_lower_threshold(n)
        assert 1 < res.value < 2
        assert abs(res.residual) < 1e-10
        assert res.sign_changes == 1
        mid = 0.5 * (1 + res.value)
        assert bozkurt_bounds(mid)[0] > lp_statistic(n, mid)
        vals.append(res.value)
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_epsilon_no_root_for_single_entry():
    # n = 1 gives the constant 2, below the zeta bound for every p in (1, 2]
    with pytest.raises(NoRoot):
        bozkurt_lower_threshold(1)


def test_classify_examples():
    v = classify_region(10, 1.2, 3)
    assert (v.predicted, v.observed) == ("holds", "holds")
    v = classify_region(2, 1, 5)
    assert v.predicted == "opposite" and v.agree
    v = classify_region(7, 1, 1)
    assert v.predicted == "holds" and v.statistic < 6 and v.agree
    v = classify_region(8, 1, 1)
    assert v.predicted == "opposite" and v.statistic > 6 and v.agree


def test_classify_threshold_window_cases():
    p = 1.54
    labels = {classify_region(n, p, q).case_label
              for n in (70, 77, 78, 90) for q in (1.0, 1.3, 1.54)}
    assert "upper: 1<p<mu, n<=N1" in labels
    assert "upper: 1<p<mu, n>N2" in labels
    assert {"upper: N1<n<=N2, q<eta", "upper: N1<n<=N2, q>=eta"} <= labels


def test_classify_n2_delta_p_split():
    p = 1.2
    dp = find_delta_p(p).value
    below = classify_region(2, p, dp * 0.99)
    above = classify_region(2, p, dp * 1.01)
    assert below.predicted == "opposite" and below.agree
    assert above.predicted == "holds" and above.agree


def test_verdict_boundary_always_agrees():
    v = RegionVerdict(2, 2.0, 3.0, "holds", "x", "boundary", 1.0, 1.0)
    assert v.agree
    assert not RegionVerdict(2, 2.0, 3.0, "holds", "x", "opposite", 1.0, 1.1).agree


exponents = st.one_of(st.just(1.0), st.just(math.inf), st.floats(1.0, 8.0))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 200), exponents, exponents)
def test_classifier_agrees(n, p, q):
    assert classify_region(n, p, q).agree


def test_classifier_handles_p_next_to_one():
    # thresholds need no zeta, so p inside min_p_gap of 1 still classifies
    for n in range(1, 12):
        for p in (1.0000000000000002, 1 + 1e-9):
            assert classify_region(n, p, 1.0).agree
            assert classify_region(n, p, p).agree


def test_classifier_rejects_bad_input():
    with pytest.raises(DomainError):
        classify_region(0, 2, 2)
    with pytest.raises(DomainError):
        classify_region(3, 0.5, 2)
