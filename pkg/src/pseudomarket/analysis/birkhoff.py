"""Birkhoff decomposition of a doubly stochastic matrix into matchings.

Each step finds the lexicographically first perfect matching on the positive
support (Kuhn's augmenting paths, agents and items in ascending order) and
subtracts its smallest entry.  Every step empties at least one cell and lowers
the cycle rank of the support, which caps the term count at n^2 - 2n + 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from pseudomarket import errors
from pseudomarket.io import format_rational
from pseudomarket.model import FractionalAssignment, freeze

Permutation = tuple[int, ...]


@dataclass
class LotteryOverMatchings:
    """Weighted perfect matchings; ``perm[i]`` is the item agent i receives."""

    n: int
    terms: list[tuple[Fraction, Permutation]] = field(default_factory=list)

    def __len__(self):
        return len(self.terms)

    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        out = [[Fraction(0)] * self.n for _ in range(self.n)]
        for w, perm in self.terms:
            for i, j in enumerate(perm):
                out[i][j] += w
        return freeze(out)

    def reconstructs(self, x: FractionalAssignment) -> bool:
        return self.matrix() == x.x

    def to_json(self) -> dict:
        return {
            "agents": self.n,
            "lottery": [
                {"weight": format_rational(w), "matching": list(perm)} for w, perm in self.terms
            ],
        }


def _lex_matching(support: list[list[int]], n: int) -> list[int] | None:
    match_item: list[int | None] = [None] * n

    def augment(i, seen):
        for j in support[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_item[j] is None or augment(match_item[j], seen):
                match_item[j] = i
                return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return None
    perm = [0] * n
    for j, i in enumerate(match_item):
        perm[i] = j
    return perm


def birkhoff_decompose(x: FractionalAssignment) -> LotteryOverMatchings:
    if x.n != x.m or not x.doubly_stochastic:
        raise errors.NotDoublyStochastic("rows and columns must all sum to 1")
    n = x.n
    rest = [list(r) for r in x.x]
    lottery = LotteryOverMatchings(n)
    remaining = Fraction(1)
    while remaining > 0:
        support = [[j for j in range(n) if rest[i][j] > 0] for i in range(n)]
        perm = _lex_matching(support, n)
        if perm is None:
            raise errors.NoPerfectMatching("support has no perfect matching")
        w = min(rest[i][perm[i]] for i in range(n))
        for i in range(n):
            rest[i][perm[i]] -= w
        remaining -= w
        lottery.terms.append((w, tuple(perm)))
    if any(v for row in rest for v in row):
        raise AssertionError("decomposition left residual mass")
    return lottery
