"""HZ solutions under dichotomous utilities and their equilibrium certificates.

The assignment is the EPS outcome.  Prices come straight from the EPS trace:
items sold in a bottleneck round at rate v cost 1/v, items exhausted by the
Hall-tight part of the final full-unit phase cost 1, everything else is free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from pseudomarket import errors
from pseudomarket.eps import PROPORTIONAL, EpsTrace, eps_solve
from pseudomarket.io import format_rational
from pseudomarket.model import FractionalAssignment, Instance, binary_reduce

PriceVector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def prices_from_trace(trace: EpsTrace, m: int) -> PriceVector:
    prices = [ZERO] * m
    for r in trace.rounds:
        for j in r.items:
            prices[j] = 1 / r.v
    for j in trace.tight_items:
        prices[j] = ONE
    return tuple(prices)


def hz_solve(inst: Instance, leftovers: str = PROPORTIONAL) -> tuple[FractionalAssignment, PriceVector, EpsTrace]:
    x, trace = eps_solve(inst, leftovers)
    return x, prices_from_trace(trace, inst.m), trace


def demand_dichotomous(liked, prices: Sequence[Fraction], budget=ONE) -> tuple[Fraction, Fraction]:
    """Best size-1 bundle for an agent who only cares about liked mass.

    Returns ``(max liked mass, least cost of reaching it)``.  Because a bundle
    has size 1 and no item can be bought beyond one unit, only the cheapest
    liked price ``a`` and the cheapest unliked price ``b`` matter: mixing
    ``l`` units at ``a`` with ``1 - l`` at ``b`` costs ``b + l * (a - b)``.
    """
    budget = Fraction(budget)
    liked = frozenset(liked)
    if not liked:
        raise errors.PreconditionError("agent likes no item")
    a = min(prices[j] for j in liked)
    unliked = [prices[j] for j in range(len(prices)) if j not in liked]
    if a <= budget:
        return ONE, a
    if not unliked:
        raise errors.Infeasible("no size-1 bundle fits the budget")
    b = min(unliked)
    if b > budget:
        raise errors.Infeasible("no size-1 bundle fits the budget")
    return (budget - b) / (a - b), budget


@dataclass
class AgentVerdict:
    agent: int
    liked_mass: Fraction
    spend: Fraction
    max_liked_mass: Fraction | None
    min_cost: Fraction | None
    utility_maximal: bool
    cost_minimal: bool
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.utility_maximal and self.cost_minimal

    def to_json(self) -> dict:
        fmt = lambda q: None if q is None else format_rational(q)
        return {
            "agent": self.agent,
            "liked_mass": fmt(self.liked_mass),
            "spend": fmt(self.spend),
            "max_liked_mass": fmt(self.max_liked_mass),
            "min_cost": fmt(self.min_cost),
            "utility_maximal": self.utility_maximal,
            "cost_minimal": self.cost_minimal,
            "reason": self.reason,
        }


@dataclass
class HzCertificate:
    assignment: FractionalAssignment
    prices: PriceVector
    agents: list[AgentVerdict] = field(default_factory=list)
    balanced: bool = True
    reason: str = ""

    @property
    def overall(self) -> bool:
        return self.balanced and not self.reason and all(v.ok for v in self.agents)

    @property
    def first_failure(self) -> int | None:
        for v in self.agents:
            if not v.ok:
                return v.agent
        return None

    def to_json(self) -> dict:
        return {
            "certificate": "hz",
            "verdict": self.overall,
            "balanced": self.balanced,
            "first_failing_agent": self.first_failure,
            "reason": self.reason,
            "prices": [format_rational(p) for p in self.prices],
            "agents": [v.to_json() for v in self.agents],
        }


def verify_hz(inst: Instance, x: FractionalAssignment, prices: Sequence) -> HzCertificate:
    """Check that ``x`` with ``prices`` is an HZ equilibrium for ``inst``.

    Every agent must hold a utility-maximal size-1 bundle within budget 1 and
    pay the least possible for that utility.  Failures are reported in the
    certificate, never raised.
    """
    reduced = binary_reduce(inst)
    prices = tuple(Fraction(p) for p in prices)
    cert = HzCertificate(x, prices, balanced=x.balanced)
    if x.n != inst.n or x.m != inst.m or len(prices) != inst.m:
        cert.reason = "dimension mismatch"
        return cert
    if any(p < 0 for p in prices):
        cert.reason = "negative price"
        return cert
    for i, d in enumerate(reduced.liked):
        row = x.x[i]
        mass = sum((row[j] for j in d), ZERO)
        spend = sum((row[j] * prices[j] for j in range(inst.m) if row[j]), ZERO)
        try:
            best, cheapest = demand_dichotomous(d, prices)
        except errors.Infeasible:
            cert.agents.append(
                AgentVerdict(i, mass, spend, None, None, False, False, "no affordable bundle")
            )
            continue
        maximal = mass == best and spend <= 1
        minimal = spend == cheapest
        reason = ""
        if mass != best:
            reason = f"liked mass {mass} but {best} is affordable"
        elif spend > 1:
            reason = f"spends {spend} > budget"
        elif not minimal:
            reason = f"spends {spend} but {cheapest} suffices"
        cert.agents.append(AgentVerdict(i, mass, spend, best, cheapest, maximal, minimal, reason))
    return cert
