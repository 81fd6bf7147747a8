"""Exact bipartite max-flow and bottleneck sets.

The network is always source -> agents -> items -> sink.  Source arcs carry a
per-agent supply, agent->item arcs (liked items only) are uncapacitated, and
every item arc into the sink has capacity 1.  All capacities are cleared to a
common denominator so Dinic's algorithm runs on plain integers.

A *bottleneck* of a live market (N', O') is the value

    v = min over nonempty C of |union of D_i & O' for i in C| / |C|

together with the largest set X attaining it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from pseudomarket import errors



@dataclass(frozen=True)
class BipartiteFlowNetwork:
    """Agents with supplies, the items they may draw from, and liked sets.

    ``liked`` is indexed by global agent id; only ``liked[i] & items`` is used.
    """

    liked: Sequence[frozenset[int]]
    supply: Mapping[int, Fraction]
    items: frozenset[int]

    @classmethod
    def uniform(cls, liked, agents: Iterable[int], items: Iterable[int], rate) -> BipartiteFlowNetwork:
        rate = Fraction(rate)
        return cls(liked, {i: rate for i in agents}, frozenset(items))


@dataclass
class FlowResult:
    """A maximum flow with its maximal minimum cut.

    ``cut_agents``/``cut_items`` form the source side of the minimum cut with
    the largest source side (nodes that cannot reach the sink in the residual
    graph).
    """

    value: Fraction
    flows: dict[tuple[int, int], Fraction]
    cut_agents: frozenset[int]
    cut_items: frozenset[int]
    demand: Fraction = Fraction(0)

    @property
    def saturating(self) -> bool:
        """True when every source arc is saturated."""
        return self.value == self.demand

    def agent_flow(self, agent: int) -> dict[int, Fraction]:
        return {j: f for (i, j), f in self.flows.items() if i == agent}


class _FlowGraph:
    """Residual graph for one (agents, items, liked) structure.

    Built once; :meth:`solve` resets capacities for each supply vector, so a
    parametric search re-uses the adjacency lists.
    """

    SOURCE = 0
    SINK = 1

    def __init__(self, liked, agents, items):
        self.agents = sorted(agents)
        items = frozenset(items)
        self.items = sorted(items)
        self.agent_node = {a: 2 + k for k, a in enumerate(self.agents)}
        base = 2 + len(self.agents)
        self.item_node = {j: base + k for k, j in enumerate(self.items)}
        self.num_nodes = base + len(self.items)
        self.to: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        self.source_edge = {}
        self.sink_edge = {}
        self.middle_edges: list[tuple[int, int, int]] = []
        for a in self.agents:
            self.source_edge[a] = self._add(self.SOURCE, self.agent_node[a])
        for a in self.agents:
            for j in sorted(liked[a] & items):
                e = self._add(self.agent_node[a], self.item_node[j])
                self.middle_edges.append((a, j, e))
        for j in self.items:
            self.sink_edge[j] = self._add(self.item_node[j], self.SINK)
        self.cap = [0] * len(self.to)

    def _add(self, u, v):
        e = len(self.to)
        self.to.append(v)
        self.adj[u].append(e)
        self.to.append(u)
        self.adj[v].append(e + 1)
        return e

    def solve(self, supply: Mapping[int, Fraction]) -> FlowResult:
        den = 1
        for a in self.agents:
            den = lcm(den, Fraction(supply[a]).denominator)
        cap = [0] * len(self.to)
        total = 0
        for a in self.agents:
            s = Fraction(supply[a])
            if s < 0:
                raise ValueError(f"negative supply for agent {a}")
            c = s.numerator * (den // s.denominator)
            cap[self.source_edge[a]] = c
            total += c
        inf = total + 1
        for _, _, e in self.middle_edges:
            cap[e] = inf
        for j in self.items:
            cap[self.sink_edge[j]] = den
        self.cap = cap
        value = self._dinic()
        reach = self._reaches_sink()
        flows = {}
        for a, j, e in self.middle_edges:
            f = cap[e ^ 1]
            if f:
                flows[(a, j)] = Fraction(f, den)
        cut_agents = frozenset(a for a in self.agents if not reach[self.agent_node[a]])
        cut_items = frozenset(j for j in self.items if not reach[self.item_node[j]])
        return FlowResult(Fraction(value, den), flows, cut_agents, cut_items, Fraction(total, den))

    def _bfs(self, level):
        for k in range(len(level)):
            level[k] = -1
        level[self.SOURCE] = 0
        queue = deque([self.SOURCE])
        to, cap, adj = self.to, self.cap, self.adj
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = to[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level[self.SINK] >= 0

    def _dinic(self) -> int:
        to, cap, adj = self.to, self.cap, self.adj
        s, t = self.SOURCE, self.SINK
        level = [-1] * self.num_nodes
        total = 0
        while self._bfs(level):
            it = [0] * self.num_nodes
            path: list[int] = []
            u = s
            while True:
                if u == t:
                    f = min(cap[e] for e in path)
                    for e in path:
                        cap[e] -= f
                        cap[e ^ 1] += f
                    total += f
                    k = next(k for k, e in enumerate(path) if cap[e] == 0)
                    del path[k:]
                    u = to[path[-1]] if path else s
                    continue
                edges = adj[u]
                lu = level[u] + 1
                while it[u] < len(edges):
                    e = edges[it[u]]
                    if cap[e] > 0 and level[to[e]] == lu:
                        break
                    it[u] += 1
                else:
                    if u == s:
                        break
                    level[u] = -1
                    e = path.pop()
                    u = to[e ^ 1]
                    it[u] += 1
                    continue
                path.append(edges[it[u]])
                u = to[edges[it[u]]]
        return total

    def _reaches_sink(self):
        to, cap, adj = self.to, self.cap, self.adj
        reach = [False] * self.num_nodes
        reach[self.SINK] = True
        queue = deque([self.SINK])
        while queue:
            w = queue.popleft()
            for e in adj[w]:
                u = to[e]
                if not reach[u] and cap[e ^ 1] > 0:
                    reach[u] = True
                    queue.append(u)
        return reach


def max_flow(net: BipartiteFlowNetwork) -> FlowResult:
    """Exact maximum flow of ``net`` plus its maximal minimum cut."""
    graph = _FlowGraph(net.liked, net.supply.keys(), net.items)
    return graph.solve(net.supply)


def feasible_rate(liked, agents, items, rate) -> tuple[bool, FlowResult]:
    """Can every agent receive ``rate`` units of liked live items at once?"""
    rate = Fraction(rate)
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    result = max_flow(BipartiteFlowNetwork.uniform(liked, agents, items, rate))
    return result.saturating, result


@dataclass
class BottleneckResult:
    v: Fraction
    agents: frozenset[int]
    items: frozenset[int]
    flow: FlowResult | None = field(default=None, compare=False, repr=False)


def _check_market(liked, agents, items):
    if not agents:
        raise errors.EmptyMarket("no live agents")
    for a in agents:
        if not liked[a] & items:
            raise errors.EmptyMarket(f"agent {a} likes no live item", agent=a)


def bottleneck(liked, agents, items, cap: Fraction | None = None) -> BottleneckResult:
    """Bottleneck value and the maximum-cardinality bottleneck set.

    Cut-guided descent: probe a rate that some agent set attains; if the flow
    falls short, the maximal min cut is a set A with |N(A)| < rate * |A|, so
    its own ratio is the next, strictly smaller probe.  The first feasible
    probe is the bottleneck value, and the maximal min cut there is X.

    With ``cap`` the search starts no higher than ``cap``; if that rate is
    feasible the result has ``v == cap`` and X is the (possibly empty) set of
    agents that are exactly tight at ``cap``.
    """
    agents = sorted(agents)
    items = frozenset(items)
    _check_market(liked, agents, items)
    live = [liked[a] & items for a in agents]
    union = frozenset().union(*live)
    rate = min(Fraction(len(union), len(agents)), min(Fraction(len(d)) for d in live))
    capped = cap is not None and Fraction(cap) < rate
    if capped:
        rate = Fraction(cap)
    graph = _FlowGraph(liked, agents, items)
    first = True
    while True:
        result = graph.solve({a: rate for a in agents})
        if result.saturating:
            break
        first = False
        cut = result.cut_agents
        reach = frozenset().union(*(liked[a] & items for a in cut))
        lower = Fraction(len(reach), len(cut))
        if not cut or lower >= rate:
            raise AssertionError("violated cut does not lower the rate")
        rate = lower
    x = result.cut_agents
    o = frozenset().union(*(liked[a] & items for a in x)) if x else frozenset()
    if capped and first:
        if x and Fraction(len(o), len(x)) != rate:
            raise AssertionError("tight set at the cap has the wrong ratio")
        return BottleneckResult(rate, x, o, result)
    if not x or Fraction(len(o), len(x)) != rate:
        raise AssertionError("min-cut extraction disagrees with the bottleneck value")
    return BottleneckResult(rate, x, o, result)


def bottleneck_bruteforce(liked, agents, items, limit: int = 16) -> BottleneckResult:
    """Reference bottleneck by enumerating every nonempty subset of agents."""
    agents = sorted(agents)
    items = frozenset(items)
    if len(agents) > limit:
        raise errors.TooLarge(f"{len(agents)} agents exceeds brute-force limit {limit}")
    _check_market(liked, agents, items)
    bits = []
    for a in agents:
        mask = 0
        for j in liked[a] & items:
            mask |= 1 << j
        bits.append(mask)
    k = len(agents)
    union = [0] * (1 << k)
    best = None
    minimizers = []
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        union[mask] = union[mask & (mask - 1)] | bits[low]
        ratio = Fraction(bin(union[mask]).count("1"), bin(mask).count("1"))
        if best is None or ratio < best:
            best, minimizers = ratio, [mask]
        elif ratio == best:
            minimizers.append(mask)
    full = 0
    for mask in minimizers:
        full |= mask
    if Fraction(bin(union[full]).count("1"), bin(full).count("1")) != best:
        raise AssertionError("union of minimizers is not a minimizer")
    x = frozenset(agents[b] for b in range(k) if full >> b & 1)
    o = frozenset(j for a in x for j in liked[a] & items)
    return BottleneckResult(best, x, o)
