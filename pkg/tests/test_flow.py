from fractions import Fraction as F
from math import lcm

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import binary_instances, binary_from_masks
from pseudomarket import errors
from pseudomarket.flow import (
    BipartiteFlowNetwork,
    bottleneck,
    bottleneck_bruteforce,
    feasible_rate,
    max_flow,
)
from pseudomarket.model import Instance, binary_reduce

rates = st.fractions(min_value=0, max_value=3, max_denominator=7)


def networkx_value(liked, supply, items):
    den = 1
    for s in supply.values():
        den = lcm(den, s.denominator)
    g = nx.DiGraph()
    g.add_node("s")
    g.add_node("t")
    for a, s in supply.items():
        g.add_edge("s", ("a", a), capacity=int(s * den))
        for j in liked[a] & items:
            g.add_edge(("a", a), ("o", j))  # no capacity attribute: unbounded
    for j in items:
        g.add_edge(("o", j), "t", capacity=den)
    return F(nx.maximum_flow_value(g, "s", "t"), den)


def min_cut_oracle(liked, supply, items):
    """Union of every agent set A minimizing supply(outside A) + |N(A)|."""
    agents = sorted(supply)
    best, union = None, set()
    for mask in range(1 << len(agents)):
        chosen = [a for k, a in enumerate(agents) if mask >> k & 1]
        reach = set().union(*(liked[a] & items for a in chosen)) if chosen else set()
        value = sum((supply[a] for a in agents if a not in chosen), F(0)) + len(reach)
        if best is None or value < best:
            best, union = value, set(chosen)
        elif value == best:
            union |= set(chosen)
    return best, frozenset(union)


@st.composite
def networks(draw):
    inst = draw(binary_instances(max_n=6))
    supply = {a: draw(rates) for a in range(inst.n)}
    items = frozenset(j for j in range(inst.m) if draw(st.booleans()) or j == 0)
    return inst.liked, supply, items


@given(networks())
def test_max_flow_matches_networkx(net):
    liked, supply, items = net
    result = max_flow(BipartiteFlowNetwork(liked, supply, items))
    assert result.value == networkx_value(liked, supply, items)


@given(networks())
def test_flow_is_feasible_and_cut_is_maximal(net):
    liked, supply, items = net
    result = max_flow(BipartiteFlowNetwork(liked, supply, items))
    inflow = {a: F(0) for a in supply}
    load = {j: F(0) for j in items}
    for (a, j), f in result.flows.items():
        assert f > 0 and j in liked[a] & items
        inflow[a] += f
        load[j] += f
    assert all(inflow[a] <= supply[a] for a in supply)
    assert all(v <= 1 for v in load.values())
    assert sum(inflow.values()) == result.value
    value, cut = min_cut_oracle(liked, supply, items)
    assert value == result.value
    assert result.cut_agents == cut
    reach = set()
    for a in cut:
        reach |= liked[a] & items
    assert result.cut_items == reach


def test_feasible_rate_examples():
    liked = [frozenset({0, 1})] * 3
    ok, flow = feasible_rate(liked, range(3), range(3), F(2, 3))
    assert ok and flow.value == 2
    ok, flow = feasible_rate(liked, range(3), range(3), F(3, 4))
    assert not ok and flow.value == 2
    two = binary_reduce(Instance([[3, 2], [1, 0]])).liked
    assert feasible_rate(two, range(2), range(2), F(1, 2))[0]
    assert not feasible_rate(two, range(2), range(2), F(2, 3))[0]


def test_bottleneck_examples():
    liked = [frozenset({0, 1})] * 3
    b = bottleneck(liked, range(3), range(3))
    assert (b.v, b.agents, b.items) == (F(2, 3), frozenset({0, 1, 2}), frozenset({0, 1}))
    two = binary_reduce(Instance([[3, 2], [1, 0]])).liked
    b = bottleneck(two, range(2), range(2))
    assert (b.v, b.agents, b.items) == (F(1, 2), frozenset({0, 1}), frozenset({0}))
    mnw = binary_reduce(Instance([
        [10, 1, 1, 1, 1], [6, 6, 10, 6, 6], [4, 10, 4, 10, 4], [0, 0, 0, 0, 1], [0, 0, 0, 0, 1],
    ])).liked
    b = bottleneck(mnw, range(5), range(5))
    assert (b.v, b.agents, b.items) == (F(1, 2), frozenset({3, 4}), frozenset({4}))
    assert bottleneck_bruteforce(mnw, range(5), range(5)) == b


def test_bottleneck_cap():
    liked = [frozenset({0, 1}), frozenset({2})]
    b = bottleneck(liked, range(2), range(3), cap=1)
    assert b.v == 1 and b.flow.saturating
    assert b.agents == frozenset({1})


def test_bottleneck_errors():
    with pytest.raises(errors.EmptyMarket):
        bottleneck([frozenset({0})], [], range(1))
    with pytest.raises(errors.EmptyMarket):
        bottleneck([frozenset({0})], [0], [1])
    with pytest.raises(errors.TooLarge):
        bottleneck_bruteforce([frozenset({0})] * 17, range(17), range(1))


@given(binary_instances(max_n=7, max_m=7), st.data())
def test_bottleneck_matches_bruteforce(inst, data):
    agents = data.draw(st.sets(st.integers(0, inst.n - 1), min_size=1))
    items = frozenset(range(inst.m))
    got = bottleneck(inst.liked, agents, items)
    want = bottleneck_bruteforce(inst.liked, agents, items)
    assert (got.v, got.agents, got.items) == (want.v, want.agents, want.items)
