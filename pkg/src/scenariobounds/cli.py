"""Command-line front end.

    scenariobounds eval     --bound new-consistent --N 2 --d 1 --eps 0.75
    scenariobounds invert   --bound floyd-consistent --N 10 --d 0 --beta 0.05
    scenariobounds design   --bound floyd-consistent --d 0 --eps 0.1 --beta 0.05
    scenariobounds table    --N 500 --beta 0.05 --r 0 --output fig2.csv
    scenariobounds validate --dist circle --N 20 --d 2 --eps 0.25 --trials 20000

Exit codes: 0 ok, 2 domain error, 3 infeasible inversion, 4 resource limit,
5 I/O error, 6 Monte Carlo certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bounds import BoundKind, evaluate
from .errors import DomainError, Infeasible, ResourceLimit, SolverError
from .inversion import InversionTarget, epsilon_for_confidence, sample_size_for
from .lab import (CircleUniform, DiscreteAtoms, DiskUniform, ProblemConfig,
                  iter_trials, summarize)
from .tables import TableSpec, format_number, table_csv

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_INFEASIBLE = 3
EXIT_RESOURCE = 4
EXIT_IO = 5
EXIT_CERTIFICATION = 6

BOUND_NAMES = [k.value for k in BoundKind]


def dumps(record: dict) -> str:
    """One-line JSON with floats in fixed 12-significant-digit notation."""
    parts = []
    for key, value in record.items():
        if isinstance(value, float):
            text = format_number(value)
        else:
            text = json.dumps(value)
        parts.append(f"{json.dumps(key)}: {text}")
    return "{" + ", ".join(parts) + "}"


def _emit(record: dict, out) -> None:
    out.write(dumps(record) + "\n")


def _warn(kind: BoundKind) -> str | None:
    msg = kind.assumption_warning()
    if msg:
        print(f"warning: {msg}", file=sys.stderr)
    return msg


def cmd_eval(args, out) -> int:
    kind = BoundKind(args.bound)
    q = evaluate(kind, args.N, args.d, args.r, args.eps)
    rec = {"bound": kind.value, "N": args.N, "d": args.d, "r": args.r,
           "epsilon": args.eps, "q": q, "assumptions_warning": _warn(kind)}
    if args.exact:
        from .exact import exact_bound
        rec["q_exact"] = str(exact_bound(kind, args.N, args.d, args.r, Fraction(args.exact)))
    _emit(rec, out)
    return EXIT_OK


def cmd_invert(args, out) -> int:
    kind = BoundKind(args.bound)
    eps = epsilon_for_confidence(InversionTarget(kind, args.beta, args.d, args.r, N=args.N))
    _emit({"bound": kind.value, "N": args.N, "d": args.d, "r": args.r, "beta": args.beta,
           "epsilon": eps, "assumptions_warning": _warn(kind)}, out)
    return EXIT_OK


def cmd_design(args, out) -> int:
    kind = BoundKind(args.bound)
    n = sample_size_for(InversionTarget(kind, args.beta, args.d, args.r, epsilon=args.eps))
    _emit({"bound": kind.value, "d": args.d, "r": args.r, "epsilon": args.eps,
           "beta": args.beta, "N": n, "assumptions_warning": _warn(kind)}, out)
    return EXIT_OK


def cmd_table(args, out) -> int:
    spec = TableSpec.default(args.N, args.beta, args.r)
    overrides = {}
    if args.bounds:
        overrides["bounds"] = tuple(BoundKind(b.strip()) for b in args.bounds.split(","))
    if args.d_min is not None:
        overrides["d_start"] = args.d_min
    if args.d_max is not None:
        overrides["d_stop"] = args.d_max
    if args.d_step is not None:
        overrides["d_step"] = args.d_step
    if overrides:
        spec = TableSpec(**{**spec.__dict__, **overrides})
    text = table_csv(spec)
    if args.output in (None, "-"):
        out.write(text)
        return EXIT_OK
    try:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _parse_pair(text: str) -> tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise DomainError(f"expected 'x,y', got {text!r}") from None
    return (x, y)


def parse_distribution(name: str, atoms: str | None):
    if name == "circle":
        return CircleUniform()
    if name == "disk":
        return DiskUniform()
    if name == "discrete-single-atom":
        return DiscreteAtoms(atoms=((1.0, 0.0),), weights=(1.0,))
    if name == "atoms":
        if not atoms:
            raise DomainError("--dist atoms needs --atoms 'ax,ay,w;...'")
        dirs, weights = [], []
        for item in atoms.split(";"):
            try:
                ax, ay, w = (float(v) for v in item.split(","))
            except ValueError:
                raise DomainError(f"bad atom {item!r}; expected 'ax,ay,w'") from None
            dirs.append((ax, ay))
            weights.append(w)
        return DiscreteAtoms(atoms=tuple(dirs), weights=tuple(weights))
    raise DomainError(f"unknown distribution {name!r}")


def cmd_validate(args, out) -> int:
    kind = BoundKind(args.bound)
    if (args.eps is None) == (args.eps_from_beta is None):
        raise DomainError("give exactly one of --eps and --eps-from-beta")
    eps = args.eps
    if eps is None:
        eps = epsilon_for_confidence(InversionTarget(kind, args.eps_from_beta, args.d, args.r, N=args.N))
    config = ProblemConfig(
        distribution=parse_distribution(args.dist, args.atoms),
        N=args.N, r=args.r, epsilon=eps, trials=args.trials, seed=args.seed,
        c=_parse_pair(args.center),
    )
    evaluate(kind, config.N, args.d, config.r, config.epsilon)
    warning = _warn(kind)

    def stream():
        for t, outcome in enumerate(iter_trials(config, workers=args.jobs)):
            _emit({"trial": t, "risk": outcome.risk,
                   "support_size": len(outcome.support_indices),
                   "violated": outcome.violated}, out)
            yield outcome

    report = summarize(config, stream(), kind, args.d)
    rec = {"summary": True, "N": config.N, "d": args.d, "r": config.r, "epsilon": config.epsilon,
           **report.to_record(), "assumptions_warning": warning}
    if not report.conclusive:
        status, code = "inconclusive", EXIT_OK
    elif report.certified:
        status, code = "certified", EXIT_OK
    elif kind.distribution_free:
        status, code = "failed", EXIT_CERTIFICATION
    else:
        status, code = "failed-assumptions-not-guaranteed", EXIT_OK
    rec["status"] = status
    _emit(rec, out)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenariobounds", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a bound q(N, epsilon)")
    p.add_argument("--bound", required=True, choices=BOUND_NAMES)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--eps", type=float, required=True)
    # debugging aid: exact rational value at the given rational tolerance
    p.add_argument("--exact", metavar="P/Q", default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("invert", help="smallest epsilon with q(N, epsilon) <= beta")
    p.add_argument("--bound", required=True, choices=BOUND_NAMES)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("design", help="smallest N with q(N, epsilon) <= beta")
    p.add_argument("--bound", required=True, choices=BOUND_NAMES)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("table", help="CSV of inverted epsilon against d")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--d-min", type=int, default=None)
    p.add_argument("--d-max", type=int, default=None)
    p.add_argument("--d-step", type=int, default=None)
    p.add_argument("--bounds", default=None, help="comma-separated bound names")
    p.add_argument("--output", default=None, help="output path (default: stdout)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("validate", help="Monte Carlo certification on the planar example")
    p.add_argument("--center", default="-3,0")
    p.add_argument("--dist", default="circle",
                   choices=["circle", "disk", "atoms", "discrete-single-atom"])
    p.add_argument("--atoms", default=None, help="'ax,ay,w;...' for --dist atoms")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--eps-from-beta", type=float, default=None,
                   help="set epsilon by inverting the chosen bound at this beta")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", default="new-consistent", choices=BOUND_NAMES)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
