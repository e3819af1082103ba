"""Compression-based confidence bounds for scenario decision algorithms.

Every bound is evaluated as a natural-log value first and only converted to a
probability (clamped to [0, 1]) at the very end, so that binomial coefficients
such as C(500, 250) never overflow.

Consistent algorithms (decision satisfies all N sampled constraints):

    floyd       C(N,d) (1-e)^(N-d)
    campi       sum_{i<d} C(N,i) e^i (1-e)^(N-i)                  [nondegenerate]
    waitjudge   N C(N,d) (1-e)^(N-d) / sum_{m=d}^{N-1} C(m,d) (1-e)^(m-d)
    new         C(N,d) min_{m=d..N} C(m,d)^-1 (1-e)^(N-m)

Sample-and-discard algorithms (r constraints removed before solving):

    margellos   C(N,d) sum_{i<=r} C(N-d,i) e^i (1-e)^(N-d-i)
    campi       C(r+d-1,r) sum_{i<r+d} C(N,i) e^i (1-e)^(N-i)    [nondegenerate, conformity]
    romao       sum_{i<r+d} C(N,i) e^i (1-e)^(N-i)                [sequential nondegeneracy]
    new         C(N,r) C(N-r,d) min_{m=d..N-r} C(m,d)^-1 (1-e)^(N-r-m)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Real

import numpy as np
from scipy.special import bdtrc, gammaln

from .errors import DomainError

# Plain float holding ln(x) for a nonnegative x; -inf encodes zero.
LogValue = float

# Log-factorials are tabulated up to this size; larger arguments fall back to
# evaluating log-gamma directly.
_TABLE_LIMIT = 1 << 20
_log_factorials = gammaln(np.arange(1025, dtype=float) + 1.0)
_log_factorials_list = _log_factorials.tolist()

# Tails with at most this many terms are summed in plain Python, which beats
# numpy's per-call overhead on short arrays.
_SHORT_TAIL = 24

# Above this many denominator terms the wait-and-judge sum switches to the
# negative-binomial identity instead of explicit summation.
_DIRECT_SUM_LIMIT = 50_000


class BoundKind(enum.Enum):
    FLOYD_CONSISTENT = "floyd-consistent"
    CAMPI_CONSISTENT = "campi-consistent"
    WAITJUDGE_CONSISTENT = "waitjudge-consistent"
    NEW_CONSISTENT = "new-consistent"
    MARGELLOS_DISCARD = "margellos-discard"
    CAMPI_DISCARD = "campi-discard"
    ROMAO_DISCARD = "romao-discard"
    NEW_DISCARD = "new-discard"

    @property
    def discards(self) -> bool:
        return self in _DISCARD_KINDS

    @property
    def assumes_nondegeneracy(self) -> bool:
        return self in _NONDEGENERATE_KINDS

    @property
    def assumes_conformity_or_cascade(self) -> bool:
        return self in (BoundKind.CAMPI_DISCARD, BoundKind.ROMAO_DISCARD)

    @property
    def distribution_free(self) -> bool:
        return not (self.assumes_nondegeneracy or self.assumes_conformity_or_cascade)

    def assumption_warning(self) -> str | None:
        """Human-readable caveat for bounds that are not distribution-free."""
        if self is BoundKind.CAMPI_CONSISTENT:
            return "campi-consistent assumes nondegeneracy; not valid for every distribution"
        if self is BoundKind.CAMPI_DISCARD:
            return "campi-discard assumes nondegeneracy and conformity; not valid for every distribution"
        if self is BoundKind.ROMAO_DISCARD:
            return ("romao-discard assumes sequential nondegeneracy and a cascade-form algorithm; "
                    "not valid for every distribution")
        return None

    def min_samples(self, d: int, r: int = 0) -> int:
        """Smallest N for which the formula is defined at (d, r)."""
        if self is BoundKind.WAITJUDGE_CONSISTENT:
            return d + 1
        if self in (BoundKind.CAMPI_DISCARD, BoundKind.ROMAO_DISCARD):
            return max(r + d - 1, 0)
        return d + r


_DISCARD_KINDS = frozenset({
    BoundKind.MARGELLOS_DISCARD, BoundKind.CAMPI_DISCARD,
    BoundKind.ROMAO_DISCARD, BoundKind.NEW_DISCARD,
})
_NONDEGENERATE_KINDS = frozenset({
    BoundKind.CAMPI_CONSISTENT, BoundKind.CAMPI_DISCARD, BoundKind.ROMAO_DISCARD,
})

CONSISTENT_KINDS = (
    BoundKind.FLOYD_CONSISTENT, BoundKind.CAMPI_CONSISTENT,
    BoundKind.WAITJUDGE_CONSISTENT, BoundKind.NEW_CONSISTENT,
)
DISCARD_KINDS = (
    BoundKind.MARGELLOS_DISCARD, BoundKind.CAMPI_DISCARD,
    BoundKind.ROMAO_DISCARD, BoundKind.NEW_DISCARD,
)


@dataclass(frozen=True)
class BoundQuery:
    """Parameters (N, d, r, epsilon) of a single bound evaluation."""

    N: int
    d: int
    r: int = 0
    epsilon: float = 0.5

    def __post_init__(self):
        for name in ("N", "d", "r"):
            value = getattr(self, name)
            if type(value) is not int:
                if isinstance(value, bool) or not isinstance(value, Integral):
                    raise DomainError(f"{name} must be an integer, got {value!r}")
                object.__setattr__(self, name, int(value))
            if value < 0:
                raise DomainError(f"{name} must be nonnegative, got {value}")
        _check_epsilon(self.epsilon)


def _check_epsilon(epsilon) -> None:
    if type(epsilon) is not float and (isinstance(epsilon, bool) or not isinstance(epsilon, Real)):
        raise DomainError(f"epsilon must be a real number, got {epsilon!r}")
    if not (0 < epsilon <= 1):
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")


def check_domain(kind: BoundKind, q: BoundQuery) -> None:
    """Raise DomainError unless ``q`` lies in the domain of ``kind``."""
    if not kind.discards and q.r != 0:
        raise DomainError(f"{kind.value} is a consistent bound and needs r = 0")
    if kind in (BoundKind.CAMPI_DISCARD, BoundKind.ROMAO_DISCARD) and q.d < 1:
        raise DomainError(f"{kind.value} needs d >= 1")
    lo = kind.min_samples(q.d, q.r)
    if q.N < lo:
        raise DomainError(f"{kind.value} needs N >= {lo} for d={q.d}, r={q.r}; got N={q.N}")


# ---------------------------------------------------------------------------
# log-domain primitives


def log_binomial(n: int, k: int) -> LogValue:
    """ln C(n, k) via log-gamma; exactly 0 at k = 0 and k = n."""
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"binomial coefficient C({n}, {k}) undefined")
    if k == 0 or k == n:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _xlog1m(k: int, epsilon: float) -> float:
    # k * ln(1 - epsilon), with 0 * ln 0 = 0
    if k == 0:
        return 0.0
    if epsilon == 1:
        return -math.inf
    return k * math.log1p(-epsilon)


def to_probability(log_value: LogValue) -> float:
    """Exponentiate a log value and clamp into [0, 1]."""
    if log_value >= 0.0:
        return 1.0
    return math.exp(log_value)


def _log_factorial(n: int) -> np.ndarray:
    """ln k! for k = 0..n (a view into a cached table when n is small)."""
    global _log_factorials
    if n < len(_log_factorials):
        return _log_factorials[: n + 1]
    if n > _TABLE_LIMIT:
        return gammaln(np.arange(n + 1, dtype=float) + 1.0)
    global _log_factorials_list
    size = len(_log_factorials)
    while size <= n:
        size *= 2
    _log_factorials = gammaln(np.arange(size, dtype=float) + 1.0)
    _log_factorials_list = _log_factorials.tolist()
    return _log_factorials[: n + 1]


def _logsumexp(terms: np.ndarray) -> float:
    top = terms.max()
    if top == -math.inf:
        return -math.inf
    return float(top + math.log(np.exp(terms - top).sum()))


def _log_binomial_terms(n: int, lo: int, hi: int, epsilon: float) -> list[float] | np.ndarray:
    # ln[C(n,i) e^i (1-e)^(n-i)] for i = lo..hi, with 0 < epsilon < 1
    lf = _log_factorial(n)
    log_e, log_1m = math.log(epsilon), math.log1p(-epsilon)
    if hi - lo < _SHORT_TAIL and n < len(_log_factorials_list):
        lfl = _log_factorials_list
        return [lfl[n] - lfl[i] - lfl[n - i] + i * log_e + (n - i) * log_1m
                for i in range(lo, hi + 1)]
    i = np.arange(lo, hi + 1)
    return lf[n] - lf[lo:hi + 1] - lf[n - hi:n - lo + 1][::-1] + i * log_e + (n - i) * log_1m


def _logsumexp_any(terms) -> float:
    if isinstance(terms, np.ndarray):
        return _logsumexp(terms)
    top = max(terms)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def log_lower_tail(n: int, k: int, epsilon: float) -> LogValue:
    """ln P[Binomial(n, epsilon) <= k], as a max-shifted sum of log terms.

    Above the mean the lower tail is close to 1, so it is taken as the
    complement of the (small, accurately summed) upper tail instead.
    """
    if k < 0:
        return -math.inf
    if k >= n:
        return 0.0
    if epsilon == 1:
        return -math.inf
    if k >= n * epsilon:
        log_upper = _logsumexp_any(_log_binomial_terms(n, k + 1, n, epsilon))
        if log_upper < -1e-3:
            return math.log1p(-math.exp(log_upper))
    terms = _log_binomial_terms(n, 0, k, epsilon)
    # the i = 0 coefficient is exactly C(n, 0) = 1
    terms[0] = _xlog1m(n, epsilon)
    return _logsumexp_any(terms)


def optimal_m(N: int, d: int, epsilon) -> int:
    """Smallest minimizer of C(m,d)^-1 (1-e)^(N-m) over m in [d, N].

    The ratio of consecutive terms, (m+1-d) / ((m+1)(1-e)), is nondecreasing
    in m, so the sequence decreases while (m+1) e < d and the first minimizer
    is ceil(d/e) - 1 clamped into [d, N].  ``epsilon`` may be a float or a
    Fraction; the ceiling is taken on its exact rational value.
    """
    if not (0 <= d <= N):
        raise DomainError(f"optimal_m needs 0 <= d <= N, got d={d}, N={N}")
    _check_epsilon(epsilon)
    e = Fraction(epsilon)
    ceil_ratio = -(-d * e.denominator // e.numerator)
    return min(max(ceil_ratio - 1, d), N)


def _log_new_core(M: int, d: int, epsilon: float) -> LogValue:
    # ln C(M,d) + min_m [ -ln C(m,d) + (M-m) ln(1-e) ]
    head = log_binomial(M, d)
    at_d = head + _xlog1m(M - d, epsilon)
    m = optimal_m(M, d, epsilon)
    if m == d:
        return at_d
    at_opt = head - log_binomial(m, d) + _xlog1m(M - m, epsilon)
    # keeping the m = d term explicit makes new <= floyd hold bit for bit
    return min(at_opt, at_d)


def _log_waitjudge_denominator(N: int, d: int, epsilon: float) -> LogValue:
    # ln sum_{m=d}^{N-1} C(m,d) (1-e)^(m-d); the m = d term equals 1
    count = N - d
    if count > _DIRECT_SUM_LIMIT and epsilon < 1:
        # sum_{m=d}^{N-1} C(m,d) x^(m-d) (1-x)^(d+1) = P[Bin(N, 1-x) >= d+1]
        upper = float(bdtrc(d, N, epsilon))
        if upper > 1e-280:
            return math.log(upper) - (d + 1) * math.log(epsilon)
    if epsilon == 1:
        return 0.0
    lf = _log_factorial(N - 1)
    j = np.arange(count)  # j = m - d
    terms = lf[d:N] - lf[d] - lf[:count] + j * math.log1p(-epsilon)
    terms[0] = 0.0
    return _logsumexp(terms)


# ---------------------------------------------------------------------------
# the eight bounds, as raw log values


def _log_floyd(q: BoundQuery) -> LogValue:
    return log_binomial(q.N, q.d) + _xlog1m(q.N - q.d, q.epsilon)


def _log_campi(q: BoundQuery) -> LogValue:
    return log_lower_tail(q.N, q.d - 1, q.epsilon)


def _log_waitjudge(q: BoundQuery) -> LogValue:
    numerator = math.log(q.N) + log_binomial(q.N, q.d) + _xlog1m(q.N - q.d, q.epsilon)
    return numerator - _log_waitjudge_denominator(q.N, q.d, q.epsilon)


def _log_new_consistent(q: BoundQuery) -> LogValue:
    return _log_new_core(q.N, q.d, q.epsilon)


def _log_margellos(q: BoundQuery) -> LogValue:
    return log_binomial(q.N, q.d) + log_lower_tail(q.N - q.d, q.r, q.epsilon)


def _log_campi_discard(q: BoundQuery) -> LogValue:
    k = q.r + q.d - 1
    return log_binomial(k, q.r) + log_lower_tail(q.N, k, q.epsilon)


def _log_romao(q: BoundQuery) -> LogValue:
    return log_lower_tail(q.N, q.r + q.d - 1, q.epsilon)


def _log_new_discard(q: BoundQuery) -> LogValue:
    return log_binomial(q.N, q.r) + _log_new_core(q.N - q.r, q.d, q.epsilon)


_LOG_EVALUATORS = {
    BoundKind.FLOYD_CONSISTENT: _log_floyd,
    BoundKind.CAMPI_CONSISTENT: _log_campi,
    BoundKind.WAITJUDGE_CONSISTENT: _log_waitjudge,
    BoundKind.NEW_CONSISTENT: _log_new_consistent,
    BoundKind.MARGELLOS_DISCARD: _log_margellos,
    BoundKind.CAMPI_DISCARD: _log_campi_discard,
    BoundKind.ROMAO_DISCARD: _log_romao,
    BoundKind.NEW_DISCARD: _log_new_discard,
}


def log_bound(kind: BoundKind, q: BoundQuery) -> LogValue:
    """Natural log of the unclamped bound value."""
    check_domain(kind, q)
    return _LOG_EVALUATORS[kind](q)


def raw_bound(kind: BoundKind, q: BoundQuery) -> float:
    """Unclamped bound value (may exceed 1, may overflow to inf)."""
    lv = log_bound(kind, q)
    return math.exp(lv) if lv < 709.0 else math.inf


def bound(kind: BoundKind, q: BoundQuery) -> float:
    """Confidence bound q(N, epsilon) clamped into [0, 1]."""
    return to_probability(log_bound(kind, q))


def evaluate(kind: BoundKind | str, N: int, d: int, r: int = 0, epsilon: float = 0.5) -> float:
    return bound(BoundKind(kind), BoundQuery(N, d, r, epsilon))


def bound_consistent_floyd(q: BoundQuery) -> float:
    return bound(BoundKind.FLOYD_CONSISTENT, q)


def bound_consistent_campi(q: BoundQuery) -> float:
    return bound(BoundKind.CAMPI_CONSISTENT, q)


def bound_consistent_waitjudge(q: BoundQuery) -> float:
    return bound(BoundKind.WAITJUDGE_CONSISTENT, q)


def bound_consistent_new(q: BoundQuery) -> float:
    return bound(BoundKind.NEW_CONSISTENT, q)


def bound_discard_margellos(q: BoundQuery) -> float:
    return bound(BoundKind.MARGELLOS_DISCARD, q)


def bound_discard_campi(q: BoundQuery) -> float:
    return bound(BoundKind.CAMPI_DISCARD, q)


def bound_discard_romao(q: BoundQuery) -> float:
    return bound(BoundKind.ROMAO_DISCARD, q)


def bound_discard_new(q: BoundQuery) -> float:
    return bound(BoundKind.NEW_DISCARD, q)
