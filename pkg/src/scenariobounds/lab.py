"""Planar min-norm scenario program with random half-plane constraints.

A constraint is a direction ``a`` with ||a|| <= 1 and describes the half-plane
{x : a.(x - c) <= 1}; every such half-plane contains the unit ball around the
anchor ``c``.  The scenario decision is the minimum-norm point satisfying all
kept constraints, optionally after discarding the ``r`` constraints with the
largest ||a||.  Risks are exact, so Monte Carlo runs certify the confidence
bounds without any inner sampling error.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np
from scipy import stats

from .bounds import BoundKind, evaluate
from .errors import DomainError, SolverError

FEAS_TOL = 1e-9
PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class CircleUniform:
    """``a`` uniform on the unit circle."""

    name = "circle"


@dataclass(frozen=True)
class DiskUniform:
    """``a`` uniform (by area) on the closed unit disk."""

    name = "disk"


@dataclass(frozen=True)
class DiscreteAtoms:
    """Finitely many directions with probability weights."""

    atoms: tuple[tuple[float, float], ...]
    weights: tuple[float, ...]
    name = "atoms"

    def __post_init__(self):
        if len(self.atoms) == 0 or len(self.atoms) != len(self.weights):
            raise DomainError("atoms and weights must be nonempty and of equal length")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise DomainError("atom weights must be positive and sum to 1")
        a = np.asarray(self.atoms, dtype=float)
        if a.shape != (len(self.atoms), 2) or np.any(np.hypot(a[:, 0], a[:, 1]) > 1 + 1e-12):
            raise DomainError("atoms must be 2-vectors with norm <= 1")


Distribution = CircleUniform | DiskUniform | DiscreteAtoms


@dataclass(frozen=True)
class HalfPlaneConstraint:
    a: tuple[float, float]

    def __post_init__(self):
        if math.hypot(*self.a) > 1 + 1e-12:
            raise DomainError(f"constraint direction {self.a} has norm > 1")


@dataclass(frozen=True)
class ProblemConfig:
    distribution: Distribution = field(default_factory=CircleUniform)
    N: int = 20
    r: int = 0
    epsilon: float = 0.1
    trials: int = 1000
    seed: int = 0
    c: tuple[float, float] = (-3.0, 0.0)

    def __post_init__(self):
        if self.N < self.r + 1:
            raise DomainError(f"need N >= r + 1, got N={self.N}, r={self.r}")
        if self.r < 0:
            raise DomainError("r must be nonnegative")
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if not (0 < self.epsilon <= 1):
            raise DomainError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not (0 <= self.seed < 2**64):
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class TrialOutcome:
    decision: tuple[float, float]
    risk: float
    support_indices: tuple[int, ...]
    kept_indices: tuple[int, ...]
    violated: bool


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    violations: int
    empirical_rate: float
    exact_binomial_upper_95: float
    theoretical_bound: float
    bound_kind: BoundKind
    max_support_size: int = 0

    @property
    def conclusive(self) -> bool:
        return self.theoretical_bound >= 0.05

    @property
    def certified(self) -> bool:
        return self.exact_binomial_upper_95 <= self.theoretical_bound

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["bound_kind"] = self.bound_kind.value
        rec["certified"] = self.certified
        rec["conclusive"] = self.conclusive
        return rec


# ---------------------------------------------------------------------------
# sampling


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent stream for one trial: Philox keyed by the seed, with the
    trial index in the top counter word."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, trial_index]))


def sample_directions(rng: np.random.Generator, dist: Distribution, n: int) -> np.ndarray:
    """Draw ``n`` constraint directions as an (n, 2) array."""
    if isinstance(dist, DiscreteAtoms):
        cdf = np.cumsum(dist.weights)
        idx = np.searchsorted(cdf, rng.random(n), side="right")
        idx = np.minimum(idx, len(dist.atoms) - 1)
        return np.asarray(dist.atoms, dtype=float)[idx]
    theta = 2.0 * np.pi * rng.random(n)
    if isinstance(dist, CircleUniform):
        radius = 1.0
    elif isinstance(dist, DiskUniform):
        radius = np.sqrt(rng.random(n))
    else:
        raise DomainError(f"unknown distribution {dist!r}")
    return np.column_stack((radius * np.cos(theta), radius * np.sin(theta)))


def sample_constraint(rng: np.random.Generator, dist: Distribution) -> HalfPlaneConstraint:
    a = sample_directions(rng, dist, 1)[0]
    return HalfPlaneConstraint((float(a[0]), float(a[1])))


def _directions(constraints) -> np.ndarray:
    if len(constraints) and isinstance(constraints[0], HalfPlaneConstraint):
        return np.array([h.a for h in constraints], dtype=float)
    return np.asarray(constraints, dtype=float).reshape(-1, 2)


# ---------------------------------------------------------------------------
# solver


def solve_min_norm(c, constraints) -> np.ndarray:
    """Minimum-norm x subject to a_i.(x - c) <= 1 for every constraint.

    Enumerates the origin, the projections of the origin onto each boundary
    line and the pairwise intersections of boundary lines, and returns the
    feasible candidate of least norm (ties: smallest x1, then x2).  The
    candidate set does not depend on the order of the constraints, so
    neither does the result.
    """
    c = np.asarray(c, dtype=float)
    A = _directions(constraints)
    origin = np.zeros(2)
    if len(A) == 0 or np.max(A @ (origin - c)) - 1.0 <= FEAS_TOL:
        return origin
    b = 1.0 + A @ c  # boundary line i: a_i.x = b_i

    sq = np.einsum("ij,ij->i", A, A)
    nz = sq > PARALLEL_TOL**2
    proj = (b[nz] / sq[nz])[:, None] * A[nz]

    i, j = np.triu_indices(len(A), 1)
    det = A[i, 0] * A[j, 1] - A[i, 1] * A[j, 0]
    keep = np.abs(det) > PARALLEL_TOL
    i, j, det = i[keep], j[keep], det[keep]
    x1 = (b[i] * A[j, 1] - b[j] * A[i, 1]) / det
    x2 = (A[i, 0] * b[j] - A[j, 0] * b[i]) / det
    cand = np.concatenate((proj, np.column_stack((x1, x2))))

    slack = (cand - c) @ A.T - 1.0
    cand = cand[slack.max(axis=1) <= FEAS_TOL]
    if len(cand) == 0:
        raise SolverError("no feasible candidate; geometry too degenerate")
    norm2 = cand[:, 0] ** 2 + cand[:, 1] ** 2
    best = np.lexsort((cand[:, 1], cand[:, 0], norm2))[0]
    return cand[best].copy()


def active_indices(c, constraints, x) -> list[int]:
    A = _directions(constraints)
    if len(A) == 0:
        return []
    g = A @ (np.asarray(x, dtype=float) - np.asarray(c, dtype=float)) - 1.0
    return [int(k) for k in np.flatnonzero(np.abs(g) <= FEAS_TOL)]


def support_set(c, constraints, x) -> tuple[int, ...]:
    """Smallest index set (at most two) on which the solver reproduces ``x``.

    Candidates are tried by size, then lexicographically: the empty set,
    active singletons, active pairs.
    """
    A = _directions(constraints)
    x = np.asarray(x, dtype=float)

    def reproduces(idx) -> bool:
        return np.linalg.norm(solve_min_norm(c, A[list(idx)]) - x) <= FEAS_TOL

    if reproduces(()):
        return ()
    active = active_indices(c, A, x)
    for k in active:
        if reproduces((k,)):
            return (k,)
    for pair in combinations(active, 2):
        if reproduces(pair):
            return pair
    raise SolverError(f"no compression set of size <= 2 reproduces decision {x}")


def exact_risk(x, c, dist: Distribution) -> float:
    """Probability that a freshly drawn constraint is violated by ``x``."""
    y = np.asarray(x, dtype=float) - np.asarray(c, dtype=float)
    if isinstance(dist, DiscreteAtoms):
        g = np.asarray(dist.atoms, dtype=float) @ y
        # same tolerance as the solver's feasibility test
        return float(np.sum(np.asarray(dist.weights)[g > 1.0 + FEAS_TOL]))
    dist_to_c = math.hypot(y[0], y[1])
    if dist_to_c <= 1.0:
        return 0.0
    t = 1.0 / dist_to_c
    if isinstance(dist, CircleUniform):
        return math.acos(t) / math.pi
    if isinstance(dist, DiskUniform):
        return (math.acos(t) - t * math.sqrt(1.0 - t * t)) / math.pi
    raise DomainError(f"unknown distribution {dist!r}")


def discard_select(constraints, r: int) -> list[int]:
    """Indices of the N - r constraints with smallest ||a|| (ties keep the
    smaller index), in ascending index order."""
    A = _directions(constraints)
    n = len(A)
    if not (0 <= r <= n):
        raise DomainError(f"cannot discard r={r} of {n} constraints")
    norms = np.hypot(A[:, 0], A[:, 1])
    order = np.argsort(norms, kind="stable")
    return sorted(int(k) for k in order[: n - r])


# ---------------------------------------------------------------------------
# Monte Carlo


def run_trial(config: ProblemConfig, trial_index: int) -> TrialOutcome:
    rng = trial_rng(config.seed, trial_index)
    A = sample_directions(rng, config.distribution, config.N)
    kept = discard_select(A, config.r)
    kept_A = A[kept]
    x = solve_min_norm(config.c, kept_A)
    support = tuple(kept[k] for k in support_set(config.c, kept_A, x))
    risk = exact_risk(x, config.c, config.distribution)
    return TrialOutcome(
        decision=(float(x[0]), float(x[1])),
        risk=risk,
        support_indices=support,
        kept_indices=tuple(kept),
        violated=risk > config.epsilon,
    )


def _run_chunk(args) -> list[TrialOutcome]:
    config, start, stop = args
    return [run_trial(config, t) for t in range(start, stop)]


def iter_trials(config: ProblemConfig, workers: int = 1, chunk: int = 500) -> Iterator[TrialOutcome]:
    """Yield trial outcomes in trial-index order, optionally in parallel."""
    if workers <= 1:
        for t in range(config.trials):
            yield run_trial(config, t)
        return
    jobs = [(config, s, min(s + chunk, config.trials)) for s in range(0, config.trials, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for block in pool.map(_run_chunk, jobs):
            yield from block


def clopper_pearson_upper(violations: int, trials: int, level: float = 0.95) -> float:
    """One-sided exact binomial upper confidence limit."""
    if violations >= trials:
        return 1.0
    return float(stats.beta.ppf(level, violations + 1, trials - violations))


def summarize(config: ProblemConfig, outcomes: Sequence[TrialOutcome] | Iterator[TrialOutcome],
              bound: BoundKind, d: int) -> MonteCarloReport:
    theoretical = evaluate(bound, config.N, d, config.r, config.epsilon)
    trials = violations = max_support = 0
    for out in outcomes:
        trials += 1
        violations += out.violated
        max_support = max(max_support, len(out.support_indices))
    return MonteCarloReport(
        trials=trials,
        violations=violations,
        empirical_rate=violations / trials,
        exact_binomial_upper_95=clopper_pearson_upper(violations, trials),
        theoretical_bound=theoretical,
        bound_kind=bound,
        max_support_size=max_support,
    )


def run_monte_carlo(config: ProblemConfig, bound: BoundKind, d: int = 2, workers: int = 1) -> MonteCarloReport:
    """Empirical check of P[risk > epsilon] <= q(N, epsilon) for one bound."""
    # fail on a bad (bound, N, d, r) before spending time on trials
    evaluate(bound, config.N, d, config.r, config.epsilon)
    return summarize(config, iter_trials(config, workers), bound, d)
