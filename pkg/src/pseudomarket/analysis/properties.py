"""Envy-freeness and Pareto optimality among balanced assignments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from pseudomarket import errors
from pseudomarket.flow import feasible_rate
from pseudomarket.io import format_rational
from pseudomarket.model import BINARY, FractionalAssignment, Instance, bundle_utility


@dataclass
class EnvyReport:
    verdict: bool
    envier: int | None = None
    envied: int | None = None
    own: Fraction | None = None
    other: Fraction | None = None

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        witness = None
        if not self.verdict:
            witness = {
                "agent": self.envier,
                "envies": self.envied,
                "own": format_rational(self.own),
                "other": format_rational(self.other),
            }
        return {"certificate": "envy", "verdict": self.verdict, "witness": witness}


def check_envy_free(inst: Instance, x: FractionalAssignment) -> EnvyReport:
    """First (i, k) in row-major order with u_i(x_k) > u_i(x_i), if any."""
    if inst.n != x.n or inst.m != x.m:
        raise errors.DimensionMismatch("instance and assignment shapes differ")
    for i in range(inst.n):
        u = inst.u[i]
        own = bundle_utility(u, x.x[i])
        for k in range(inst.n):
            if k == i:
                continue
            other = bundle_utility(u, x.x[k])
            if other > own:
                return EnvyReport(False, i, k, own, other)
    return EnvyReport(True)


@dataclass
class ParetoReport:
    verdict: bool
    total: Fraction
    maximum: Fraction

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        return {
            "certificate": "pareto",
            "verdict": self.verdict,
            "total_liked_mass": format_rational(self.total),
            "max_liked_mass": format_rational(self.maximum),
        }


def check_pareto_balanced(inst: Instance, x: FractionalAssignment) -> ParetoReport:
    """Pareto optimality among balanced assignments, for 1-0 utilities.

    A balanced assignment is efficient iff its total liked mass equals the
    max flow with unit agent caps: augmenting a flow never lowers any agent's
    inflow, so a shortfall always yields a Pareto improvement.
    """
    if inst.utility_class.kind != BINARY:
        raise errors.NotBinary("Pareto check needs 1-0 utilities")
    if inst.n != x.n or inst.m != x.m:
        raise errors.DimensionMismatch("instance and assignment shapes differ")
    if not x.balanced:
        raise errors.NotBalanced("assignment rows must each sum to 1")
    total = sum((bundle_utility(inst.u[i], x.x[i]) for i in range(inst.n)), Fraction(0))
    _, flow = feasible_rate(inst.liked, range(inst.n), range(inst.m), 1)
    return ParetoReport(total == flow.value, total, flow.value)
