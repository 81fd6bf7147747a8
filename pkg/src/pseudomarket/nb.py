"""Nash bargaining with the uniform disagreement point under 1-0 utilities.

Under 1-0 utilities an NB solution is any balanced assignment whose offsets
``liked mass - d_i`` are leximin optimal, so the solver water-fills offsets:
every unfrozen agent targets ``min(d_i + t, 1)`` liked units, ``t`` is raised
as far as a max-flow allows, and agents in a tight set (or at the unit cap)
freeze.  ``t`` is located exactly by cut-guided descent: an infeasible flow
exposes a violated agent set, and the largest ``t`` that set tolerates is the
next probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from pseudomarket import errors
from pseudomarket.eps import distribute_leftovers
from pseudomarket.flow import _FlowGraph
from pseudomarket.io import format_rational, vector_to_json
from pseudomarket.model import BINARY, FractionalAssignment, Instance, freeze, zero_matrix

ZERO = Fraction(0)
ONE = Fraction(1)


def uniform_disagreement(inst: Instance) -> tuple[Fraction, ...]:
    """d_i: what agent i gets from the uniform 1/n assignment."""
    if not inst.square:
        raise errors.NotSquare(f"NB needs n = m, got {inst.n}x{inst.m}")
    return tuple(sum(row, ZERO) / inst.n for row in inst.u)


def _require_binary(inst: Instance):
    if not inst.square:
        raise errors.NotSquare(f"NB needs n = m, got {inst.n}x{inst.m}")
    if inst.utility_class.kind != BINARY:
        raise errors.NotBinary("NB solver needs 1-0 utilities")


def _largest_shift(ds: Sequence[Fraction], budget: Fraction) -> Fraction | None:
    """Largest t with sum(min(d + t, 1) for d in ds) <= budget.

    None when the bound never binds (everyone capped still fits).
    """
    if len(ds) <= budget:
        return None
    ds = sorted(ds, reverse=True)  # largest d caps first
    k = len(ds)
    # with the first c agents capped: c + sum(ds[c:]) + (k - c) * t = budget
    rest = sum(ds, ZERO)
    for c in range(k):
        t = (budget - c - rest) / (k - c)
        lower = 1 - ds[c - 1] if c else None
        upper = 1 - ds[c]
        if t <= upper and (lower is None or t >= lower):
            return t
        rest -= ds[c]
    raise AssertionError("no crossing found")


def _water_fill(liked, d):
    n = len(d)
    graph = _FlowGraph(liked, range(n), range(n))
    frozen: dict[int, Fraction] = {}
    live = set(range(n))

    def targets(t):
        return {i: frozen[i] if i in frozen else min(d[i] + t, ONE) for i in range(n)}

    result = None
    while live:
        t = max(1 - d[i] for i in live)
        while True:
            result = graph.solve(targets(t))
            if result.saturating:
                break
            cut = result.cut_agents
            reach = set().union(*(liked[i] for i in cut))
            budget = len(reach) - sum((frozen[i] for i in cut if i in frozen), ZERO)
            t_new = _largest_shift([d[i] for i in cut if i in live], budget)
            if t_new is None or t_new >= t:
                raise AssertionError("violated cut does not bound t")
            t = t_new
        tight = result.cut_agents
        newly = {i for i in live if i in tight or d[i] + t >= 1}
        if not newly:
            raise AssertionError("water-filling made no progress")
        for i in newly:
            frozen[i] = min(d[i] + t, ONE)
        live -= newly
    return frozen, result


def nb_solve_binary(inst: Instance) -> tuple[FractionalAssignment, tuple[Fraction, ...]]:
    """NB solution and its offset vector (liked mass minus disagreement)."""
    _require_binary(inst)
    d = uniform_disagreement(inst)
    liked = inst.liked
    values, flow = _water_fill(liked, d)
    x = zero_matrix(inst.n, inst.m)
    for (a, j), f in flow.flows.items():
        x[a][j] += f
    distribute_leftovers(x)
    assignment = FractionalAssignment(freeze(x))
    offsets = offset_vector(inst, assignment, d)
    if any(offsets[i] != values[i] - d[i] for i in range(inst.n)):
        raise AssertionError("balanced completion changed a liked mass")
    return assignment, offsets


def offset_vector(inst: Instance, x: FractionalAssignment, d=None) -> tuple[Fraction, ...]:
    if d is None:
        d = uniform_disagreement(inst)
    out = []
    for i, items in enumerate(inst.liked):
        out.append(sum((x.x[i][j] for j in items), ZERO) - d[i])
    return tuple(out)


def leximin_bruteforce(liked, base: Sequence[Fraction], limit: int = 15) -> tuple[Fraction, ...]:
    """Leximin-optimal liked masses above ``base``, by subset enumeration.

    Each agent may take at most one liked unit and every item has one unit.
    A subset S with frozen part F constrains its live members through
    sum_{S live} min(base_i + t, 1) <= |N(S)| - sum_F values; clipping at 1
    is resolved by iterating the capped set to a fixpoint.  Returns the
    optimal liked masses (not offsets).
    """
    n = len(base)
    if n > limit:
        raise errors.TooLarge(f"{n} agents exceeds brute-force limit {limit}")
    reach = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        reach.append((members, len(set().union(*(liked[i] for i in members)))))
    values: dict[int, Fraction] = {}
    live = set(range(n))

    def level(members, t):
        return sum((values[i] if i in values else min(base[i] + t, ONE) for i in members), ZERO)

    def bound(live_base, budget):
        capped: set[int] = set()
        while True:
            free = [k for k in range(len(live_base)) if k not in capped]
            if not free:
                return None
            t = (budget - len(capped) - sum(live_base[k] for k in free)) / len(free)
            grown = {k for k in range(len(live_base)) if live_base[k] + t >= 1}
            if grown == capped:
                return t
            capped = grown

    while live:
        t_star = max(1 - base[i] for i in live)
        for members, size in reach:
            live_base = [base[i] for i in members if i in live]
            if not live_base:
                continue
            budget = size - sum((values[i] for i in members if i in values), ZERO)
            t = bound(live_base, budget)
            if t is not None and t < t_star:
                t_star = t
        newly = {i for i in live if base[i] + t_star >= 1}
        for members, size in reach:
            if any(i in live for i in members) and level(members, t_star) == size:
                newly.update(i for i in members if i in live)
        for i in newly:
            values[i] = min(base[i] + t_star, ONE)
        live -= newly
    return tuple(values[i] for i in range(n))


def nb_offsets_bruteforce(inst: Instance, limit: int = 15) -> tuple[Fraction, ...]:
    """Leximin-optimal NB offsets computed without any flow."""
    _require_binary(inst)
    d = uniform_disagreement(inst)
    masses = leximin_bruteforce(inst.liked, d, limit)
    return tuple(v - di for v, di in zip(masses, d))


def leximin_key(vector) -> tuple[Fraction, ...]:
    return tuple(sorted(vector))


@dataclass
class NbCertificate:
    assignment: FractionalAssignment
    disagreement: tuple[Fraction, ...]
    offsets: tuple[Fraction, ...]
    optimal_offsets: tuple[Fraction, ...]
    verdict: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "certificate": "nb",
            "verdict": self.verdict,
            "witness": self.witness,
            "disagreement": vector_to_json(self.disagreement),
            "offsets": vector_to_json(self.offsets),
            "optimal_sorted_offsets": vector_to_json(self.optimal_offsets),
        }


def nb_leximin_certificate(inst: Instance, x: FractionalAssignment) -> NbCertificate:
    """Accept ``x`` iff its sorted offsets equal the leximin optimum."""
    _require_binary(inst)
    d = uniform_disagreement(inst)
    _, best = nb_solve_binary(inst)
    best_sorted = leximin_key(best)
    if x.n != inst.n or x.m != inst.m:
        raise errors.DimensionMismatch("instance and assignment shapes differ")
    offsets = offset_vector(inst, x, d)
    cert = NbCertificate(x, d, offsets, best_sorted, True)
    if not x.balanced:
        cert.verdict = False
        cert.witness = {"kind": "unbalanced", "row_sums": vector_to_json(x.row_sums)}
        return cert
    mine = leximin_key(offsets)
    for k, (a, b) in enumerate(zip(mine, best_sorted)):
        if a == b:
            continue
        if a > b:
            raise AssertionError("assignment beats the computed leximin optimum")
        agent = min(i for i in range(inst.n) if offsets[i] == a)
        cert.verdict = False
        cert.witness = {
            "kind": "leximin-dominated",
            "position": k,
            "agent": agent,
            "offset": format_rational(a),
            "optimal": format_rational(b),
        }
        break
    return cert
