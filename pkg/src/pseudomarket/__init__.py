"""Exact HZ pseudo-market, EPS, welfare and Nash bargaining solvers for
dichotomous assignment problems."""

from pseudomarket.eps import balancing_operation, eps_solve
from pseudomarket.hz import hz_solve, verify_hz
from pseudomarket.model import FractionalAssignment, Instance, binary_reduce, scale_shift
from pseudomarket.nb import nb_leximin_certificate, nb_solve_binary
from pseudomarket.welfare import ceei_prices_from_mnw, hz_via_reduction, mnw_kkt_check

__version__ = "0.1.0"

__all__ = [
    "FractionalAssignment",
    "Instance",
    "balancing_operation",
    "binary_reduce",
    "ceei_prices_from_mnw",
    "eps_solve",
    "hz_solve",
    "hz_via_reduction",
    "mnw_kkt_check",
    "nb_leximin_certificate",
    "nb_solve_binary",
    "scale_shift",
    "verify_hz",
]
