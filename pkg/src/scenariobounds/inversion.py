"""Invert a confidence bound for the tolerance or for the sample size."""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import BoundKind, BoundQuery, bound, check_domain
from .errors import DomainError, Infeasible, ResourceLimit

EPS_TOL = 1e-12
MAX_SAMPLES = 10**8


@dataclass(frozen=True)
class InversionTarget:
    """Bound kind, confidence ``beta`` and the parameters held fixed.

    ``N`` is needed for tolerance inversion, ``epsilon`` for sample-size
    inversion; the other one is ignored.
    """

    kind: BoundKind
    beta: float
    d: int
    r: int = 0
    N: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if not (0 < self.beta < 1):
            raise DomainError(f"beta must lie in (0, 1), got {self.beta!r}")


def epsilon_for_confidence(t: InversionTarget, tol: float = EPS_TOL) -> float:
    """Smallest epsilon in (0, 1] with q(N, epsilon) <= beta, by bisection.

    Every bound is nonincreasing in epsilon, so bisection on [0, 1] converges
    to the first crossing; the returned value is always a point where the
    target holds.
    """
    if t.N is None:
        raise DomainError("epsilon inversion needs N")

    def q(eps: float) -> float:
        return bound(t.kind, BoundQuery(t.N, t.d, t.r, eps))

    if q(1.0) > t.beta:
        raise Infeasible(
            f"{t.kind.value} exceeds beta={t.beta} even at epsilon=1 (N={t.N}, d={t.d}, r={t.r})")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if q(mid) <= t.beta:
            hi = mid
        else:
            lo = mid
    return hi


def sample_size_for(t: InversionTarget, limit: int = MAX_SAMPLES) -> int:
    """Minimal N with q(N, epsilon) <= beta.

    The bounds are not monotone in N for small N, so after bracketing by
    exponential steps and bisecting, the answer is walked backwards until the
    previous N fails the target (or the domain ends).
    """
    if t.epsilon is None:
        raise DomainError("sample-size inversion needs epsilon")
    if not (0 < t.epsilon < 1):
        raise DomainError(f"epsilon must lie in (0, 1), got {t.epsilon!r}")
    lower = max(t.d + t.r, t.d, 1, t.kind.min_samples(t.d, t.r))
    check_domain(t.kind, BoundQuery(lower, t.d, t.r, t.epsilon))

    def ok(n: int) -> bool:
        return bound(t.kind, BoundQuery(n, t.d, t.r, t.epsilon)) <= t.beta

    if ok(lower):
        return lower
    fail, step = lower, 1
    while True:
        probe = lower + step
        if probe > limit:
            if ok(limit):
                probe = limit
                break
            raise ResourceLimit(
                f"no N <= {limit} reaches beta={t.beta} for {t.kind.value} at epsilon={t.epsilon}")
        if ok(probe):
            break
        fail, step = probe, 2 * step
    good = probe
    while good - fail > 1:
        mid = (fail + good) // 2
        if ok(mid):
            good = mid
        else:
            fail = mid
    while good > lower and ok(good - 1):
        good -= 1
    return good
