"""Monte Carlo certification runs on the planar min-norm example.

For each configuration the tolerance is set by inverting the chosen bound at
``beta``; the script then reports the empirical violation rate next to the
bound and its exact binomial 95% upper limit.

    python3 scripts/validate_examples.py --trials 20000 --jobs 1
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, replace

from scenariobounds.bounds import BoundKind
from scenariobounds.inversion import InversionTarget, epsilon_for_confidence
from scenariobounds.lab import (CircleUniform, DiscreteAtoms, DiskUniform, Distribution,
                                ProblemConfig, run_monte_carlo)


@dataclass(frozen=True)
class Experiment:
    label: str
    kind: BoundKind
    distribution: Distribution
    N: int
    r: int = 0
    d: int = 2
    beta: float = 0.2
    seed: int = 0


EXPERIMENTS = (
    Experiment("circle consistent", BoundKind.NEW_CONSISTENT, CircleUniform(), N=20, seed=6),
    Experiment("disk discard", BoundKind.NEW_DISCARD, DiskUniform(), N=50, r=5, seed=7),
    Experiment("disk discard, margellos", BoundKind.MARGELLOS_DISCARD, DiskUniform(), N=50, r=5, seed=8),
    Experiment("three atoms", BoundKind.NEW_CONSISTENT,
               DiscreteAtoms(((1.0, 0.0), (0.6, 0.6), (0.6, -0.6)), (0.5, 0.25, 0.25)), N=20, seed=9),
)


def run(exp: Experiment, trials: int, jobs: int) -> dict:
    eps = epsilon_for_confidence(InversionTarget(exp.kind, exp.beta, exp.d, exp.r, N=exp.N))
    config = ProblemConfig(exp.distribution, N=exp.N, r=exp.r, epsilon=eps,
                           trials=trials, seed=exp.seed)
    t0 = time.perf_counter()
    report = run_monte_carlo(config, exp.kind, d=exp.d, workers=jobs)
    return {"experiment": exp.label, "epsilon": round(eps, 8), **report.to_record(),
            "seconds": round(time.perf_counter() - t0, 1)}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--beta", type=float, default=None, help="override beta for every run")
    args = parser.parse_args()
    for exp in EXPERIMENTS:
        if args.beta is not None:
            exp = replace(exp, beta=args.beta)
        print(json.dumps(run(exp, args.trials, args.jobs)))


if __name__ == "__main__":
    main()
