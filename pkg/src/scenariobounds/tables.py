"""Tolerance-versus-compression-size tables (the data behind the comparison plots)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .bounds import CONSISTENT_KINDS, DISCARD_KINDS, BoundKind
from .errors import DomainError, Infeasible
from .inversion import InversionTarget, epsilon_for_confidence

SIG_DIGITS = 12


def format_number(x: float) -> str:
    """12 significant digits, positional notation; |x| < 1e-300 prints as 0."""
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"cannot format non-finite value {x}")
    if abs(x) < 1e-300:
        return "0.0"
    return np.format_float_positional(x, precision=SIG_DIGITS, unique=False,
                                      fractional=False, trim="0")


@dataclass(frozen=True)
class TableSpec:
    N: int
    beta: float
    r: int = 0
    d_start: int = 1
    d_stop: int = 1  # inclusive
    d_step: int = 1
    bounds: tuple[BoundKind, ...] = CONSISTENT_KINDS

    def __post_init__(self):
        if self.d_step < 1:
            raise DomainError("d step must be positive")
        if self.d_start < 0 or self.d_stop < self.d_start:
            raise DomainError("empty or negative d range")
        if not self.bounds:
            raise DomainError("at least one bound is required")

    @classmethod
    def default(cls, N: int, beta: float, r: int = 0) -> "TableSpec":
        """Full grid d = 1..N-r-1 with the four bounds of the matching family."""
        kinds = CONSISTENT_KINDS if r == 0 else DISCARD_KINDS
        return cls(N=N, beta=beta, r=r, d_start=1, d_stop=N - r - 1, bounds=kinds)

    @property
    def grid(self) -> range:
        return range(self.d_start, self.d_stop + 1, self.d_step)


def invert_cell(kind: BoundKind, N: int, d: int, r: int, beta: float) -> float | None:
    """Inverted tolerance, or None when the target is unreachable or the
    grid point lies outside the bound's domain."""
    try:
        return epsilon_for_confidence(InversionTarget(kind, beta, d, r, N=N))
    except (Infeasible, DomainError):
        return None


def generate_table(spec: TableSpec) -> list[tuple[int, list[float | None]]]:
    return [(d, [invert_cell(k, spec.N, d, spec.r, spec.beta) for k in spec.bounds])
            for d in spec.grid]


def table_csv(spec: TableSpec, rows=None) -> str:
    """CSV text: ``d,<bound>...,flag``; infeasible cells hold 1.0 and set
    ``flag`` to ``*``."""
    if rows is None:
        rows = generate_table(spec)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["d", *(k.value for k in spec.bounds), "flag"])
    for d, cells in rows:
        flag = "*" if any(c is None for c in cells) else ""
        writer.writerow([d, *(format_number(1.0 if c is None else c) for c in cells), flag])
    return buf.getvalue()


def read_table_csv(text: str) -> tuple[list[str], list[tuple[int, list[float], bool]]]:
    """Parse text produced by :func:`table_csv`."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [(int(rec[0]), [float(v) for v in rec[1:-1]], rec[-1] == "*") for rec in reader]
    return header[1:-1], rows
