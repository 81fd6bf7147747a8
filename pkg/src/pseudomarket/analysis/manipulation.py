"""Search for profitable misreports, individually or in small coalitions.

Misreports are dichotomous: a manipulator announces a nonempty liked set,
i.e. a 0/1 row.  Numeric misreports are only possible through an explicit
``reports`` mapping, typically paired with a :class:`FixtureRule` that looks
outcomes up instead of solving.

Rule outputs are memoized per reported profile, so the cost of a search is the
number of distinct profiles it touches.  Truth-profile sweeps can be spread
over worker processes; chunks are merged in profile order, so the output does
not depend on the worker count.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from pseudomarket import errors, rules
from pseudomarket.io import instance_to_json, vector_to_json
from pseudomarket.model import FractionalAssignment, Instance, to_fraction, utility_vector

INDIVIDUAL = "individual"
GROUP = "group"
EXHAUSTIVE_LIMIT = 5
WORKERS_ENV = "PSEUDOMARKET_WORKERS"


@dataclass
class ManipulationWitness:
    manipulators: tuple[int, ...]
    true_instance: Instance
    reported_instance: Instance
    rule: str
    before: tuple[Fraction, ...]
    after: tuple[Fraction, ...]

    def gain(self, agent: int) -> Fraction:
        return self.after[agent] - self.before[agent]

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "manipulators": list(self.manipulators),
            "true_instance": instance_to_json(self.true_instance),
            "reported_instance": instance_to_json(self.reported_instance),
            "true_utilities_before": vector_to_json(self.before),
            "true_utilities_after": vector_to_json(self.after),
        }


class FixtureRule:
    """A rule given by a table: reported profile -> assignment."""

    def __init__(self, outputs: Mapping[Instance, FractionalAssignment], name: str = "fixture"):
        self.outputs = dict(outputs)
        self.name = name

    def __call__(self, inst: Instance) -> FractionalAssignment:
        try:
            return self.outputs[inst]
        except KeyError:
            raise errors.RuleUnavailable(f"fixture rule has no outcome for {inst!r}") from None


def _rule_name(rule) -> str:
    return rule if isinstance(rule, str) else getattr(rule, "name", repr(rule))


def _solver(rule, cache=None) -> Callable[[Instance], FractionalAssignment]:
    if isinstance(rule, str):
        rules.get_rule(rule)
        fn = lambda inst: rules.assign(rule, inst)
    elif callable(rule):
        fn = rule
    else:
        raise errors.RuleUnavailable(f"{rule!r} is not a rule")
    if cache is None:
        cache = {}

    def solve(inst):
        if inst not in cache:
            cache[inst] = fn(inst)
        return cache[inst]

    return solve


def liked_set_rows(m: int) -> list[tuple[Fraction, ...]]:
    """Every nonempty 0/1 row of length m, in increasing bitmask order."""
    one, zero = Fraction(1), Fraction(0)
    return [
        tuple(one if mask >> j & 1 else zero for j in range(m)) for mask in range(1, 1 << m)
    ]


def _candidate_reports(inst, agents, reports):
    out = {}
    default = None
    for i in agents:
        if reports is not None and i in reports:
            rows = [tuple(to_fraction(v) for v in row) for row in reports[i]]
        else:
            if default is None:
                default = liked_set_rows(inst.m)
            rows = default
        out[i] = [r for r in rows if r != inst.u[i]]
    return out


def _coalitions(agents, mode, group_size):
    if mode == INDIVIDUAL:
        sizes = [1]
    elif mode == GROUP:
        if group_size < 1:
            raise ValueError("group size must be positive")
        sizes = range(1, group_size + 1)
    else:
        raise ValueError(f"mode must be {INDIVIDUAL!r} or {GROUP!r}")
    for k in sizes:
        yield from itertools.combinations(agents, k)


def _replace_rows(inst, coalition, rows):
    u = list(inst.u)
    for i, row in zip(coalition, rows):
        u[i] = row
    return Instance(tuple(u))


def _profitable(before, after, coalition):
    weak = all(after[i] >= before[i] for i in coalition)
    return weak and any(after[i] > before[i] for i in coalition)


def find_manipulation(
    inst: Instance,
    rule,
    mode: str = INDIVIDUAL,
    group_size: int = 2,
    manipulators: Sequence[int] | None = None,
    reports: Mapping[int, Iterable[Sequence]] | None = None,
    exhaustive: bool = True,
    seed: int = 0,
    samples: int = 200,
    cache: dict | None = None,
) -> ManipulationWitness | None:
    """First profitable misreport in deterministic search order, or None.

    Exhaustive order: coalitions by size then lexicographically, report
    tuples in product order of the per-agent candidate lists.  Otherwise
    ``samples`` random (coalition, reports) draws seeded by ``seed``.
    """
    solve = _solver(rule, cache)
    agents = list(range(inst.n)) if manipulators is None else sorted(set(manipulators))
    if any(not 0 <= i < inst.n for i in agents):
        raise errors.DimensionMismatch("manipulator index out of range")
    if exhaustive and reports is None and inst.n > EXHAUSTIVE_LIMIT:
        raise errors.TooLarge(f"exhaustive search is limited to n <= {EXHAUSTIVE_LIMIT}")
    candidates = _candidate_reports(inst, agents, reports)
    before = utility_vector(inst, solve(inst))
    name = _rule_name(rule)

    def attempt(coalition, rows):
        reported = _replace_rows(inst, coalition, rows)
        after = utility_vector(inst, solve(reported))
        if _profitable(before, after, coalition):
            return ManipulationWitness(tuple(coalition), inst, reported, name, before, after)
        return None

    coalitions = list(_coalitions(agents, mode, group_size))
    if exhaustive:
        for coalition in coalitions:
            for rows in itertools.product(*(candidates[i] for i in coalition)):
                found = attempt(coalition, rows)
                if found:
                    return found
        return None
    rng = random.Random(seed)
    coalitions = [c for c in coalitions if all(candidates[i] for i in c)]
    if not coalitions:
        return None
    for _ in range(samples):
        coalition = rng.choice(coalitions)
        rows = tuple(rng.choice(candidates[i]) for i in coalition)
        found = attempt(coalition, rows)
        if found:
            return found
    return None


def truth_profiles(n: int, m: int | None = None) -> Iterable[Instance]:
    """Every binary n x m profile in which each agent likes something."""
    rows = liked_set_rows(n if m is None else m)
    for profile in itertools.product(rows, repeat=n):
        yield Instance(profile)


def random_truth_profile(rng: random.Random, n: int, m: int | None = None) -> Instance:
    m = n if m is None else m
    rows = []
    for _ in range(n):
        mask = rng.randrange(1, 1 << m)
        rows.append(tuple(Fraction(mask >> j & 1) for j in range(m)))
    return Instance(tuple(rows))


@dataclass
class FuzzReport:
    rule: str
    n: int
    mode: str
    exhaustive: bool
    profiles_checked: int = 0
    witnesses: list[ManipulationWitness] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "n": self.n,
            "mode": self.mode,
            "exhaustive": self.exhaustive,
            "profiles_checked": self.profiles_checked,
            "witness_count": len(self.witnesses),
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def worker_count(requested: int | None = None) -> int:
    if requested is None:
        env = os.environ.get(WORKERS_ENV)
        requested = int(env) if env else 1
    return max(1, requested)


def _sweep(args):
    rule_id, profiles, mode, group_size, exhaustive, seed, samples = args
    cache: dict = {}
    found = []
    for k, inst in profiles:
        w = find_manipulation(
            inst,
            rule_id,
            mode=mode,
            group_size=group_size,
            exhaustive=exhaustive,
            seed=seed + k,
            samples=samples,
            cache=cache,
        )
        if w is not None:
            found.append((k, w))
    return found


def fuzz(
    rule_id: str,
    n: int,
    mode: str = INDIVIDUAL,
    group_size: int = 2,
    exhaustive: bool = True,
    seed: int = 0,
    profiles: int = 100,
    samples: int = 200,
    workers: int | None = None,
) -> FuzzReport:
    """Run :func:`find_manipulation` over many truth profiles.

    Exhaustive mode visits every binary n x n profile with exhaustive report
    search; otherwise ``profiles`` random profiles with ``samples`` random
    misreports each.  Profile k uses seed ``seed + k``.
    """
    rules.get_rule(rule_id)
    if exhaustive:
        if n > 3:
            raise errors.TooLarge("exhaustive truth-profile sweeps are limited to n <= 3")
        todo = list(enumerate(truth_profiles(n)))
    else:
        rng = random.Random(seed)
        todo = [(k, random_truth_profile(rng, n)) for k in range(profiles)]
    workers = worker_count(workers)
    chunks = [todo[k::workers] for k in range(workers)] if workers > 1 else [todo]
    jobs = [(rule_id, c, mode, group_size, exhaustive, seed, samples) for c in chunks if c]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep, jobs))
    else:
        results = [_sweep(job) for job in jobs]
    merged = sorted((pair for part in results for pair in part), key=lambda p: p[0])
    report = FuzzReport(rule_id, n, mode, exhaustive, len(todo))
    report.witnesses = [w for _, w in merged]
    return report
