"""Arbitrary-precision reference values for every bound.

Tolerances enter as exact rationals (``Fraction``) and every quantity is kept
as an integer numerator over a power of the tolerance's denominator, so the
results carry no rounding at all.  Used to certify the log-domain evaluators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math
from math import comb

from .bounds import BoundKind, BoundQuery, check_domain
from .errors import DomainError

# Full cumulative tails are cached only for small n; beyond this the integers
# get large enough that caching costs more memory than it saves time.
_CACHE_TAIL_LIMIT = 200


def _as_fraction(epsilon) -> Fraction:
    e = epsilon if type(epsilon) is Fraction else Fraction(epsilon)
    if not (0 < e <= 1):
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    return e


@lru_cache(maxsize=4096)
def _tail_cumsums(n: int, a: int, b: int) -> tuple[int, ...]:
    # cum[k] * b^-n = P[Bin(n, a/b) <= k]
    c = b - a
    c_pows = [1]
    for _ in range(n):
        c_pows.append(c_pows[-1] * c)
    out = []
    acc, coef, a_pow = 0, 1, 1  # coef = C(n, i), a_pow = a^i
    for i in range(n + 1):
        acc += coef * a_pow * c_pows[n - i]
        out.append(acc)
        coef = coef * (n - i) // (i + 1)
        a_pow *= a
    return tuple(out)


def _horner(coefs, y: int) -> int:
    # sum_j u_j y^(L-j) for the sequence u_0..u_L, evaluated by Horner's rule
    acc = 0
    for u in coefs:
        acc = acc * y + u
    return acc


def _tail_terms(n: int, k: int, a: int, c: int):
    # C(n,i) a^i for i = 0..k
    coef, a_pow = 1, 1
    for i in range(k + 1):
        yield coef * a_pow
        coef = coef * (n - i) // (i + 1)
        a_pow *= a


def _tail_parts(n: int, k: int, a: int, b: int) -> tuple[int, int]:
    # P[Bin(n, a/b) <= k] as an unreduced (numerator, denominator) pair
    if k < 0:
        return 0, 1
    if k >= n:
        return 1, 1
    if n <= _CACHE_TAIL_LIMIT:
        return _tail_cumsums(n, a, b)[k], b**n
    c = b - a
    # sum_{i<=k} C(n,i) a^i c^(n-i) = c^(n-k) sum_{i<=k} C(n,i) a^i c^(k-i)
    return _horner(_tail_terms(n, k, a, c), c) * c ** (n - k), b**n


def lower_tail(n: int, k: int, epsilon) -> Fraction:
    """Exact P[Binomial(n, epsilon) <= k]."""
    e = _as_fraction(epsilon)
    return Fraction(*_tail_parts(n, k, e.numerator, e.denominator))


def brute_min_m_prefix(N_max: int, d: int, epsilon) -> list[int]:
    """Smallest argmin of C(m,d)^-1 (1-e)^(N-m) over m in [d, N], for each N.

    Entry ``N - d`` of the result answers the horizon ``N``.  The factor
    (1-e)^N is common to every m, so one exhaustive running comparison of
    H(m) = C(m,d) (1-e)^m (scaled to an integer) serves all horizons.
    """
    if not (0 <= d <= N_max):
        raise DomainError(f"need 0 <= d <= N, got d={d}, N={N_max}")
    e = _as_fraction(epsilon)
    if e == 1:
        # t_m = 0 for every m < N and t_N > 0
        return [d] * (N_max - d + 1)
    b = e.denominator
    c = b - e.numerator
    # H(m) = C(m,d) c^m b^(N_max-m), an integer for every m in [d, N_max]
    h = c**d * b ** (N_max - d)
    best_m, best_h = d, h
    out = [d]
    for m in range(d, N_max):
        h = h * (m + 1) * c // ((m + 1 - d) * b)
        if h > best_h:
            best_m, best_h = m + 1, h
        out.append(best_m)
    return out


@lru_cache(maxsize=65536)
def _brute_min_m(N: int, d: int, a: int, b: int) -> int:
    return brute_min_m_prefix(N, d, Fraction(a, b))[-1]


def exact_brute_min_m(N: int, d: int, epsilon) -> int:
    """Exhaustive exact argmin of the inner minimization (smallest on ties)."""
    e = _as_fraction(epsilon)
    if not (0 <= d <= N):
        raise DomainError(f"need 0 <= d <= N, got d={d}, N={N}")
    return _brute_min_m(N, d, e.numerator, e.denominator)


def _waitjudge_terms(N: int, d: int, c: int):
    # C(m,d) c^(m-d) for m = d..N-1
    coef, c_pow = 1, 1
    for m in range(d, N):
        yield coef * c_pow
        coef = coef * (m + 1) // (m + 1 - d)
        c_pow *= c


def _min_term_parts(M: int, d: int, a: int, b: int) -> tuple[int, int]:
    # min_{m=d..M} C(m,d)^-1 (1-e)^(M-m)
    m = _brute_min_m(M, d, a, b)
    return (b - a) ** (M - m), comb(m, d) * b ** (M - m)


def exact_raw_parts(kind: BoundKind, N: int, d: int, r: int, epsilon) -> tuple[int, int]:
    """Unclamped exact value as an unreduced (numerator, denominator) pair."""
    e = _as_fraction(epsilon)
    check_domain(kind, BoundQuery(N, d, r, float(e)))
    a, b = e.numerator, e.denominator
    c = b - a
    if kind is BoundKind.FLOYD_CONSISTENT:
        return comb(N, d) * c ** (N - d), b ** (N - d)
    if kind is BoundKind.CAMPI_CONSISTENT:
        return _tail_parts(N, d - 1, a, b)
    if kind is BoundKind.WAITJUDGE_CONSISTENT:
        # sum_{m=d}^{N-1} C(m,d) c^(m-d) b^(N-1-m), by Horner's rule in b
        den = _horner(_waitjudge_terms(N, d, c), b)
        return N * comb(N, d) * c ** (N - d), b * den
    if kind is BoundKind.NEW_CONSISTENT:
        num, den = _min_term_parts(N, d, a, b)
        return comb(N, d) * num, den
    if kind is BoundKind.MARGELLOS_DISCARD:
        num, den = _tail_parts(N - d, r, a, b)
        return comb(N, d) * num, den
    if kind is BoundKind.CAMPI_DISCARD:
        num, den = _tail_parts(N, r + d - 1, a, b)
        return comb(r + d - 1, r) * num, den
    if kind is BoundKind.ROMAO_DISCARD:
        return _tail_parts(N, r + d - 1, a, b)
    if kind is BoundKind.NEW_DISCARD:
        num, den = _min_term_parts(N - r, d, a, b)
        return comb(N, r) * comb(N - r, d) * num, den
    raise DomainError(f"unknown bound kind {kind!r}")


def exact_raw_bound(kind: BoundKind, N: int, d: int, r: int, epsilon) -> Fraction:
    """Unclamped exact value of the bound, in lowest terms."""
    return Fraction(*exact_raw_parts(kind, N, d, r, epsilon))


def exact_bound(kind: BoundKind, N: int, d: int, r: int, epsilon) -> Fraction:
    """Exact bound clamped into [0, 1]."""
    return min(Fraction(1), exact_raw_bound(kind, N, d, r, epsilon))


def log_parts(parts: tuple[int, int]) -> float:
    """Natural log of numerator/denominator, accurate for huge integers."""
    num, den = parts
    if num == 0:
        return -math.inf
    return math.log(num) - math.log(den)
