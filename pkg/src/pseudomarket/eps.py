"""Extended probabilistic serial for dichotomous preferences, and balancing.

EPS peels off bottleneck agent sets one round at a time.  Each round's agents
get exactly v_k units of their liked live items; once every remaining agent
can get a full unit, one flow serves them all, and whatever is left over
tops up the agents still short of a unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from pseudomarket import errors
from pseudomarket.flow import bottleneck
from pseudomarket.io import format_rational
from pseudomarket.model import (
    FractionalAssignment,
    Instance,
    binary_reduce,
    freeze,
    zero_matrix,
)

ONE = Fraction(1)


@dataclass(frozen=True)
class EpsRound:
    v: Fraction
    agents: frozenset[int]
    items: frozenset[int]


@dataclass
class EpsTrace:
    """What each phase of an EPS run did.

    ``matched`` are the agents served a full unit in the last phase;
    ``tight_agents``/``tight_items`` is the largest subset of them whose liked
    live items are exactly used up by that unit.  ``stranded`` lists agents
    whose liked items ran out before they exited (never expected).
    """

    rounds: list[EpsRound] = field(default_factory=list)
    matched: frozenset[int] = frozenset()
    tight_agents: frozenset[int] = frozenset()
    tight_items: frozenset[int] = frozenset()
    leftovers: list[tuple[int, int, Fraction]] = field(default_factory=list)
    stranded: frozenset[int] = frozenset()

    def round_of(self, agent: int) -> int | None:
        for k, r in enumerate(self.rounds):
            if agent in r.agents:
                return k
        return None

    def to_json(self) -> dict:
        return {
            "rounds": [
                {"v": format_rational(r.v), "X": sorted(r.agents), "O": sorted(r.items)}
                for r in self.rounds
            ],
            "matched": sorted(self.matched),
            "tight": {"X": sorted(self.tight_agents), "O": sorted(self.tight_items)},
            "leftovers": [
                {"item": j, "agent": i, "amount": format_rational(a)}
                for j, i, a in self.leftovers
            ],
            "stranded": sorted(self.stranded),
        }


def _require_square_dichotomous(inst: Instance) -> Instance:
    if not inst.square:
        raise errors.NotSquare(f"rule needs n = m, got {inst.n}x{inst.m}")
    if not inst.utility_class.dichotomous:
        raise errors.NotDichotomous("rule needs binary or bi-valued utilities")
    return binary_reduce(inst)


ASCENDING = "ascending"
PROPORTIONAL = "proportional"


def distribute_leftovers(x, trace=None, rule=ASCENDING):
    """Top up short rows with the unallocated column mass.

    ``ascending`` fills the lowest-index short agent first from the lowest
    index item.  ``proportional`` splits every leftover item across short
    agents in proportion to their deficits, so no agent's share depends on
    its index.  ``x`` is a mutable list-of-lists and is updated in place.
    """
    n, m = len(x), len(x[0])
    remaining = [ONE] * m
    deficit = {}
    for i, row in enumerate(x):
        total = Fraction(0)
        for j, v in enumerate(row):
            if v:
                remaining[j] -= v
                total += v
        if total < 1:
            deficit[i] = ONE - total
    if sum(remaining) != sum(deficit.values()):
        raise errors.MassMismatch("leftover mass does not match row deficits")
    if rule == PROPORTIONAL:
        total = sum(deficit.values())
        for j in range(m):
            if not remaining[j]:
                continue
            for i, d in deficit.items():
                give = remaining[j] * d / total
                x[i][j] += give
                if trace is not None:
                    trace.append((j, i, give))
        return
    if rule != ASCENDING:
        raise ValueError(f"unknown leftover rule {rule!r}")
    short = sorted(deficit)
    k = 0
    for j in range(m):
        r = remaining[j]
        while r > 0 and k < len(short):
            i = short[k]
            give = min(r, deficit[i])
            x[i][j] += give
            r -= give
            deficit[i] -= give
            if trace is not None:
                trace.append((j, i, give))
            if deficit[i] == 0:
                k += 1
        remaining[j] = r
    if any(remaining) or k < len(short):
        raise errors.MassMismatch("leftover mass does not match row deficits")


def eps_solve(inst: Instance, leftovers: str = PROPORTIONAL) -> tuple[FractionalAssignment, EpsTrace]:
    """Run EPS on the binary reduction of ``inst``; returns a balanced assignment.

    Leftovers default to the proportional split: with index-order filling a
    coalition can hide a liked item and win it back as a leftover.
    """
    reduced = _require_square_dichotomous(inst)
    liked = reduced.liked
    n, m = reduced.n, reduced.m
    x = zero_matrix(n, m)
    trace = EpsTrace()
    live = set(range(n))
    live_items = set(range(m))
    stranded = set()

    while live:
        empty = {a for a in live if not liked[a] & live_items}
        if empty:
            stranded |= empty
            live -= empty
            continue
        b = bottleneck(liked, live, live_items, cap=ONE)
        if b.v == ONE:
            # everyone fits a full unit; the flow at rate 1 is the matched phase
            for (a, j), f in b.flow.flows.items():
                x[a][j] += f
            trace.matched = frozenset(live)
            trace.tight_agents = b.agents
            trace.tight_items = b.items
            break
        for (a, j), f in b.flow.flows.items():
            if a in b.agents:
                x[a][j] += f
        trace.rounds.append(EpsRound(b.v, b.agents, b.items))
        live -= b.agents
        live_items -= b.items

    trace.stranded = frozenset(stranded)
    distribute_leftovers(x, trace.leftovers, leftovers)
    return FractionalAssignment(freeze(x)), trace


def balancing_operation(inst: Instance, x: FractionalAssignment) -> FractionalAssignment:
    """Make every row sum to 1.

    Over-full agents shed their least-preferred items first (ties: highest
    item index first); the shed mass goes to under-full agents in ascending
    agent order, items in ascending index.
    """
    if inst.n != x.n or inst.m != x.m:
        raise errors.DimensionMismatch("instance and assignment shapes differ")
    total = sum(x.row_sums)
    if total != inst.n:
        raise errors.MassMismatch(f"total mass {total} differs from n = {inst.n}")
    rows = [list(r) for r in x.x]
    pool = [Fraction(0)] * x.m
    for i, row in enumerate(rows):
        excess = sum(row) - 1
        if excess <= 0:
            continue
        order = sorted(range(x.m), key=lambda j: (inst.u[i][j], -j))
        for j in order:
            if excess == 0:
                break
            take = min(excess, row[j])
            if take:
                row[j] -= take
                pool[j] += take
                excess -= take
    for i, row in enumerate(rows):
        deficit = 1 - sum(row)
        for j in range(x.m):
            if deficit <= 0:
                break
            give = min(deficit, pool[j])
            if give:
                row[j] += give
                pool[j] -= give
                deficit -= give
    return FractionalAssignment(freeze(rows))
