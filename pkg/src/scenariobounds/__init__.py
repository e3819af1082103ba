"""Compression-based PAC confidence bounds for scenario decision making."""

from .bounds import (CONSISTENT_KINDS, DISCARD_KINDS, BoundKind, BoundQuery, bound,
                     bound_consistent_campi, bound_consistent_floyd, bound_consistent_new,
                     bound_consistent_waitjudge, bound_discard_campi, bound_discard_margellos,
                     bound_discard_new, bound_discard_romao, evaluate, log_binomial, log_bound,
                     optimal_m, raw_bound)
from .errors import DomainError, Infeasible, NumericalDegeneracy, ResourceLimit, SolverError
from .inversion import InversionTarget, epsilon_for_confidence, sample_size_for

__version__ = "0.1.0"
