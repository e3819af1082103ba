import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from scenariobounds.bounds import (CONSISTENT_KINDS, DISCARD_KINDS, BoundKind, BoundQuery,
                                   bound, bound_consistent_campi, bound_consistent_floyd,
                                   bound_consistent_new, bound_consistent_waitjudge,
                                   bound_discard_campi, bound_discard_margellos,
                                   bound_discard_new, bound_discard_romao, log_binomial,
                                   log_bound, log_lower_tail, optimal_m, to_probability)
from scenariobounds.errors import DomainError
from scenariobounds.exact import exact_brute_min_m, exact_raw_bound

K = BoundKind


def rel_err(x, ref):
    ref = float(ref)
    if ref == 0:
        return abs(x)
    return abs(x - ref) / abs(ref)


# --- log_binomial -----------------------------------------------------------

def test_log_binomial_small():
    assert log_binomial(5, 2) == pytest.approx(math.log(10), rel=1e-15)
    assert log_binomial(0, 0) == 0.0
    assert log_binomial(7, 0) == 0.0 and log_binomial(7, 7) == 0.0


def test_log_binomial_matches_big_integer():
    exact = math.comb(500, 100)
    assert rel_err(math.exp(log_binomial(500, 100)), exact) <= 1e-12


@pytest.mark.parametrize("n,k", [(5, -1), (5, 6), (-1, 0)])
def test_log_binomial_domain(n, k):
    with pytest.raises(DomainError):
        log_binomial(n, k)


# --- optimal_m --------------------------------------------------------------

def test_optimal_m_examples():
    assert optimal_m(500, 100, 0.3) == 333
    assert exact_brute_min_m(500, 100, Fraction(3, 10)) == 333
    assert optimal_m(10, 10, 0.5) == 10
    assert optimal_m(5, 1, 1.0) == 1


def test_optimal_m_domain():
    with pytest.raises(DomainError):
        optimal_m(5, 6, 0.5)
    with pytest.raises(DomainError):
        optimal_m(5, 2, 0.0)


@settings(max_examples=300, deadline=None)
@given(N=st.integers(0, 120), data=st.data(),
       eps=st.floats(1e-3, 1.0, allow_nan=False))
def test_optimal_m_equals_brute_force_on_float_epsilon(N, data, eps):
    d = data.draw(st.integers(0, N))
    # the closed form works on the float's exact rational value
    assert optimal_m(N, d, eps) == exact_brute_min_m(N, d, Fraction(eps))


# --- formula examples (values computed by exact rational arithmetic) --------

def q(N, d, r=0, eps=0.5):
    return BoundQuery(N, d, r, eps)


@pytest.mark.parametrize("fn,query,expected", [
    (bound_consistent_floyd, q(10, 1, 0, 0.5), 10 * Fraction(1, 2) ** 9),
    (bound_consistent_floyd, q(10, 1, 0, 0.2), 1),
    (bound_consistent_floyd, q(7, 7, 0, 0.3), 1),
    (bound_consistent_campi, q(10, 2, 0, 0.5), Fraction(11, 1024)),
    (bound_consistent_campi, q(10, 0, 0, 0.5), 0),
    (bound_consistent_campi, q(10, 10, 0, 0.5), 1 - Fraction(1, 1024)),
    (bound_consistent_waitjudge, q(3, 1, 0, 0.9), Fraction(3, 40)),
    (bound_consistent_waitjudge, q(3, 1, 0, 0.5), 1),
    (bound_consistent_waitjudge, q(2, 1, 0, 1.0), 0),
    (bound_consistent_new, q(2, 1, 0, 0.75), Fraction(1, 2)),
    (bound_consistent_new, q(10, 1, 0, 1.0), 0),
    (bound_consistent_new, q(10, 10, 0, 0.4), 1),
    (bound_discard_margellos, q(4, 1, 1, 0.9), Fraction(112, 1000)),
    (bound_discard_margellos, q(4, 1, 1, 0.5), 1),
    (bound_discard_campi, q(10, 1, 1, 0.5), Fraction(11, 1024)),
    (bound_discard_campi, q(10, 1, 0, 0.5), Fraction(1, 1024)),
    (bound_discard_campi, q(10, 1, 1, 1.0), 0),
    (bound_discard_romao, q(10, 1, 1, 0.5), Fraction(11, 1024)),
    (bound_discard_romao, q(10, 1, 9, 0.5), 1 - Fraction(1, 1024)),
    (bound_discard_new, q(3, 1, 1, 0.9), Fraction(3, 5)),
    (bound_discard_new, q(3, 1, 1, 0.5), 1),
])
def test_formula_examples(fn, query, expected):
    value = fn(query)
    assert 0.0 <= value <= 1.0
    if expected in (0, 1):
        assert value == expected
    else:
        assert rel_err(value, expected) <= 1e-12


def test_examples_agree_with_oracle():
    # same hand-checked cases, routed through the rational oracle
    assert exact_raw_bound(K.NEW_CONSISTENT, 2, 1, 0, Fraction(3, 4)) == Fraction(1, 2)
    assert exact_raw_bound(K.WAITJUDGE_CONSISTENT, 3, 1, 0, Fraction(9, 10)) == Fraction(3, 40)
    assert exact_raw_bound(K.MARGELLOS_DISCARD, 4, 1, 1, Fraction(9, 10)) == Fraction(14, 125)
    assert exact_raw_bound(K.NEW_DISCARD, 3, 1, 1, Fraction(1, 2)) == 3


def test_margellos_r0_is_single_term():
    for N, d, eps in [(10, 3, 0.2), (50, 7, 0.05), (500, 100, 0.3)]:
        raw = math.exp(log_bound(K.MARGELLOS_DISCARD, q(N, d, 0, eps)))
        expected = math.comb(N, d) * (1 - eps) ** (N - d)
        assert rel_err(raw, expected) <= 1e-12


@pytest.mark.parametrize("kind,query", [
    (K.FLOYD_CONSISTENT, q(5, 6)),
    (K.NEW_CONSISTENT, q(5, 2, 1)),
    (K.WAITJUDGE_CONSISTENT, q(5, 5)),
    (K.CAMPI_DISCARD, q(5, 0, 1)),
    (K.ROMAO_DISCARD, q(5, 0, 0)),
    (K.ROMAO_DISCARD, q(5, 3, 4)),
    (K.MARGELLOS_DISCARD, q(5, 3, 3)),
    (K.NEW_DISCARD, q(5, 3, 3)),
])
def test_domain_errors(kind, query):
    with pytest.raises(DomainError):
        bound(kind, query)


@pytest.mark.parametrize("args", [(-1, 0, 0, 0.5), (5, 2, 0, 0.0), (5, 2, 0, 1.5), (5.0, 2, 0, 0.5)])
def test_query_validation(args):
    with pytest.raises(DomainError):
        BoundQuery(*args)


def test_campi_discard_edge_of_domain():
    # N = r + d - 1: the tail sums every term, i.e. equals 1 before the coefficient
    assert log_bound(K.ROMAO_DISCARD, q(5, 2, 4, 0.3)) == 0.0
    assert bound(K.CAMPI_DISCARD, q(5, 2, 4, 0.3)) == 1.0


def test_c500_does_not_overflow():
    # C(500, 250) ~ 1e149 times (1 - e)^250 stays finite in log space
    lv = log_bound(K.FLOYD_CONSISTENT, q(500, 250, 0, 0.9))
    assert math.isfinite(lv)
    assert to_probability(lv) == pytest.approx(math.exp(lv))


def test_lower_tail_short_and_long_paths_agree():
    for n, k, eps in [(300, 23, 0.1), (300, 24, 0.1), (2000, 23, 0.02), (60, 40, 0.7)]:
        ref = float(exact_raw_bound(K.ROMAO_DISCARD, n, k + 1, 0, Fraction(eps)))
        assert rel_err(math.exp(log_lower_tail(n, k, eps)), ref) <= 1e-11


def test_waitjudge_identity_path_for_huge_N():
    # beyond the direct-sum limit the denominator uses the negative-binomial identity
    from scenariobounds import bounds as B
    for N, d, eps in [(60_000, 3, 0.001), (200_000, 10, 0.0001)]:
        direct_limit = B._DIRECT_SUM_LIMIT
        try:
            B._DIRECT_SUM_LIMIT = 10**9
            direct = B._log_waitjudge_denominator(N, d, eps)
        finally:
            B._DIRECT_SUM_LIMIT = direct_limit
        assert B._log_waitjudge_denominator(N, d, eps) == pytest.approx(direct, rel=1e-11)


# --- properties -------------------------------------------------------------

@st.composite
def queries(draw, kinds=tuple(BoundKind), max_n=400):
    kind = draw(st.sampled_from(kinds))
    N = draw(st.integers(1, max_n))
    r = draw(st.integers(0, min(N, 30))) if kind.discards else 0
    lo_d = 1 if kind in (K.CAMPI_DISCARD, K.ROMAO_DISCARD) else 0
    hi_d = N - r + (1 if kind in (K.CAMPI_DISCARD, K.ROMAO_DISCARD) else 0)
    if kind is K.WAITJUDGE_CONSISTENT:
        hi_d = N - 1
    assume(lo_d <= hi_d)
    d = draw(st.integers(lo_d, hi_d))
    return kind, N, d, r


@settings(max_examples=300, deadline=None)
@given(queries(), st.integers(5, 200))
def test_monotone_in_epsilon(query, steps):
    kind, N, d, r = query
    grid = np.linspace(0.0, 1.0, steps + 1)[1:]
    values = [bound(kind, BoundQuery(N, d, r, float(e))) for e in grid]
    for a, b in zip(values, values[1:]):
        assert b <= a


@settings(max_examples=300, deadline=None)
@given(queries(), st.floats(1e-4, 1.0))
def test_range_and_clamping(query, eps):
    kind, N, d, r = query
    lv = log_bound(kind, BoundQuery(N, d, r, eps))
    value = bound(kind, BoundQuery(N, d, r, eps))
    assert 0.0 <= value <= 1.0
    if lv >= 0:
        assert value == 1.0
    if lv == -math.inf:
        assert value == 0.0


@settings(max_examples=300, deadline=None)
@given(queries(kinds=(K.NEW_CONSISTENT,), max_n=2000), st.floats(1e-4, 1.0))
def test_new_dominates_floyd_and_waitjudge(query, eps):
    _, N, d, _ = query
    qq = BoundQuery(N, d, 0, eps)
    assert log_bound(K.NEW_CONSISTENT, qq) <= log_bound(K.FLOYD_CONSISTENT, qq)
    if d <= N - 1:
        assert bound(K.NEW_CONSISTENT, qq) <= bound(K.WAITJUDGE_CONSISTENT, qq)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 2000), st.data(), st.floats(1e-4, 1.0))
def test_r0_reductions_bit_identical(N, data, eps):
    d = data.draw(st.integers(0, N))
    assert bound(K.NEW_DISCARD, BoundQuery(N, d, 0, eps)) == bound(K.NEW_CONSISTENT, BoundQuery(N, d, 0, eps))
    if d >= 1:
        assert log_bound(K.ROMAO_DISCARD, BoundQuery(N, d, 0, eps)) == \
            log_bound(K.CAMPI_CONSISTENT, BoundQuery(N, d, 0, eps))


def test_optimal_m_exhaustive_small():
    for N in range(0, 80):
        for d in range(N + 1):
            for k in range(1, 100, 7):
                e = Fraction(k, 100)
                assert optimal_m(N, d, e) == exact_brute_min_m(N, d, e)
