"""Leximin / MNW / CEEI under 1-0 utilities, and a KKT certificate for MNW.

No general Nash-welfare optimizer lives here.  Binary instances are solved by
uncapped bottleneck rounds; any other candidate optimum must be supplied and
is certified by :func:`mnw_kkt_check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from pseudomarket import errors
from pseudomarket.eps import balancing_operation
from pseudomarket.flow import bottleneck
from pseudomarket.hz import PriceVector
from pseudomarket.io import format_rational, matrix_to_json, vector_to_json
from pseudomarket.model import (
    BINARY,
    FractionalAssignment,
    Instance,
    binary_reduce,
    freeze,
    utility_vector,
    zero_matrix,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def leximin_unconstrained_binary(inst: Instance) -> tuple[FractionalAssignment, tuple[Fraction, ...]]:
    """Leximin assignment with no cap on how much any agent receives.

    Each round removes the largest bottleneck set X with its liked items,
    giving every member exactly v units.  Items nobody likes go to agents
    short of one unit (ascending index), any rest to agent 0.
    """
    if inst.utility_class.kind != BINARY:
        raise errors.NotBinary("unconstrained leximin needs 1-0 utilities")
    liked = inst.liked
    n, m = inst.n, inst.m
    x = zero_matrix(n, m)
    live = set(range(n))
    live_items = set(range(m))
    while live:
        b = bottleneck(liked, live, live_items)
        for (a, j), f in b.flow.flows.items():
            if a in b.agents:
                x[a][j] += f
        live -= b.agents
        live_items -= b.items
    for j in sorted(live_items):
        rest = ONE
        for i in range(n):
            room = ONE - sum(x[i])
            if room > 0:
                give = min(room, rest)
                x[i][j] += give
                rest -= give
            if rest == 0:
                break
        x[0][j] += rest
    assignment = FractionalAssignment(freeze(x))
    return assignment, utility_vector(inst, assignment)


def hz_via_reduction(inst: Instance) -> FractionalAssignment:
    """Binary-reduce, solve unconstrained leximin, then balance."""
    if not inst.square:
        raise errors.NotSquare(f"rule needs n = m, got {inst.n}x{inst.m}")
    if not inst.utility_class.dichotomous:
        raise errors.NotDichotomous("rule needs binary or bi-valued utilities")
    x, _ = leximin_unconstrained_binary(binary_reduce(inst))
    return balancing_operation(inst, x)


@dataclass
class KktReport:
    """First-order certificate that ``x`` maximizes the Nash product.

    ``residual[i][j] = u[i][j] * u_minus[i] - multipliers[j]`` must vanish on
    the support of ``x`` and be nonpositive elsewhere.
    """

    utilities: tuple[Fraction, ...]
    u_minus: tuple[Fraction, ...]
    gradient: tuple[tuple[Fraction, ...], ...]
    multipliers: tuple[Fraction, ...]
    residual: tuple[tuple[Fraction, ...], ...]
    verdict: bool
    violation: dict | None = None
    empty_columns: tuple[int, ...] = field(default_factory=tuple)

    @property
    def nash_welfare(self) -> Fraction:
        out = ONE
        for u in self.utilities:
            out *= u
        return out

    def to_json(self) -> dict:
        return {
            "certificate": "kkt",
            "verdict": self.verdict,
            "violation": self.violation,
            "utilities": vector_to_json(self.utilities),
            "u_minus": vector_to_json(self.u_minus),
            "multipliers": vector_to_json(self.multipliers),
            "gradient": matrix_to_json(self.gradient),
            "residual": matrix_to_json(self.residual),
            "empty_columns": list(self.empty_columns),
            "nash_welfare": format_rational(self.nash_welfare),
        }


def _products_without_self(values):
    n = len(values)
    prefix = [ONE] * (n + 1)
    for i, v in enumerate(values):
        prefix[i + 1] = prefix[i] * v
    suffix = [ONE] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] * values[i]
    return tuple(prefix[i] * suffix[i + 1] for i in range(n))


def mnw_kkt_check(inst: Instance, x: FractionalAssignment) -> KktReport:
    utilities = utility_vector(inst, x)
    for i, u in enumerate(utilities):
        if u <= 0:
            raise errors.ZeroUtilityAgent(f"agent {i} has zero utility", agent=i)
    u_minus = _products_without_self(utilities)
    n, m = inst.n, inst.m
    grad = tuple(tuple(inst.u[i][j] * u_minus[i] for j in range(m)) for i in range(n))
    mult = []
    empty = []
    violation = None
    for j in range(m):
        support = [i for i in range(n) if x.x[i][j] > 0]
        if not support:
            empty.append(j)
            mult.append(max(grad[i][j] for i in range(n)))
            continue
        mu = grad[support[0]][j]
        for i in support[1:]:
            if grad[i][j] != mu and violation is None:
                violation = {
                    "kind": "unequal-multiplier",
                    "item": j,
                    "agents": [support[0], i],
                    "values": [format_rational(mu), format_rational(grad[i][j])],
                }
        mult.append(mu)
    residual = tuple(tuple(grad[i][j] - mult[j] for j in range(m)) for i in range(n))
    if violation is None:
        for i in range(n):
            for j in range(m):
                if x.x[i][j] == 0 and residual[i][j] > 0:
                    violation = {
                        "kind": "positive-residual",
                        "agent": i,
                        "item": j,
                        "value": format_rational(residual[i][j]),
                    }
                    break
            if violation:
                break
    return KktReport(
        utilities, u_minus, grad, tuple(mult), residual, violation is None, violation, tuple(empty)
    )


def ceei_prices_from_mnw(inst: Instance, x: FractionalAssignment, report: KktReport | None = None) -> PriceVector:
    """Equilibrium prices p_j = mu_j / (Nash product) for a certified MNW point.

    With these prices every agent spends exactly her unit budget.
    """
    if report is None:
        report = mnw_kkt_check(inst, x)
    if not report.verdict:
        raise errors.CertificateInvalid("assignment fails the KKT check", violation=report.violation)
    welfare = report.nash_welfare
    prices = tuple(mu / welfare for mu in report.multipliers)
    for i in range(inst.n):
        spend = sum((x.x[i][j] * prices[j] for j in range(inst.m)), ZERO)
        if spend != 1:
            raise errors.CertificateInvalid(f"agent {i} spends {spend}, not 1", agent=i)
    return prices
