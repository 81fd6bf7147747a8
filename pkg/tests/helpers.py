"""Shared generators and fixture data for the test suite."""

import itertools
import random
from fractions import Fraction as F

from hypothesis import strategies as st

from pseudomarket.model import FractionalAssignment, Instance

H = F(1, 2)

TWO_AGENT = [[3, 2], [1, 0]]
TWO_AGENT_HZ = [[H, H], [H, H]]
TWO_AGENT_CEEI = [[F(1, 6), 1], [F(5, 6), 0]]
TWO_AGENT_SWAP = [[0, 1], [1, 0]]

MNW_TRUTH = [
    [10, 1, 1, 1, 1],
    [6, 6, 10, 6, 6],
    [4, 10, 4, 10, 4],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1],
]
MNW_LIE = [[10, 8, 8, 8, 8]] + MNW_TRUTH[1:]
MNW_X = [
    [1, 0, 0, 0, 0],
    [0, F(1, 12), 1, F(1, 12), 0],
    [0, F(11, 12), 0, F(11, 12), 0],
    [0, 0, 0, 0, H],
    [0, 0, 0, 0, H],
]
MNW_Y = [
    [1, F(3, 16), 0, F(3, 16), 0],
    [0, 0, 1, 0, 0],
    [0, F(13, 16), 0, F(13, 16), 0],
    [0, 0, 0, 0, H],
    [0, 0, 0, 0, H],
]

NB_TRUTH = [
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 1, 1],
]
NB_LIE = [NB_TRUTH[0], [1, 1, 0, 0, 0]] + NB_TRUTH[2:]
NB_X = [
    [H, 0, 0, H, 0],
    [H, 0, 0, H, 0],
    [0, H, 0, 0, H],
    [0, H, 0, 0, H],
    [0, 0, 1, 0, 0],
]
_a, _b, _c, _d = F(9, 20), F(11, 20), F(1, 10), F(7, 20)
NB_XSTAR = [
    [_a, 0, 0, _b, 0],
    [_b, _c, 0, _d, 0],
    [0, _a, 0, _c, _a],
    [0, _a, 0, 0, _b],
    [0, 0, 1, 0, 0],
]


def inst(rows):
    return Instance(rows)


def assignment(rows):
    return FractionalAssignment(rows)


def binary_from_masks(masks, m):
    return Instance(tuple(tuple(F(mask >> j & 1) for j in range(m)) for mask in masks))


def all_binary_square(n):
    """Every n x n 0/1 profile with nonempty rows."""
    for masks in itertools.product(range(1, 1 << n), repeat=n):
        yield binary_from_masks(masks, n)


def random_binary(rng, n, m=None, density=0.4):
    m = n if m is None else m
    rows = []
    for _ in range(n):
        row = [int(rng.random() < density) for _ in range(m)]
        if not any(row):
            row[rng.randrange(m)] = 1
        rows.append(row)
    return Instance(rows)


def random_bivalued(rng, n, m=None, top=9):
    """Each row uses two values alpha > beta >= 0 on a random liked set."""
    m = n if m is None else m
    rows = []
    for _ in range(n):
        beta = F(rng.randint(0, top), rng.randint(1, 4))
        alpha = beta + F(rng.randint(1, top), rng.randint(1, 4))
        liked = {j for j in range(m) if rng.random() < 0.4} or {rng.randrange(m)}
        rows.append([alpha if j in liked else beta for j in range(m)])
    return Instance(rows)


def random_doubly_stochastic(rng, n, terms=None, max_weight=6):
    terms = terms if terms is not None else rng.randint(1, n * n)
    weights = [rng.randint(1, max_weight) for _ in range(terms)]
    total = sum(weights)
    x = [[F(0)] * n for _ in range(n)]
    for w in weights:
        perm = list(range(n))
        rng.shuffle(perm)
        for i, j in enumerate(perm):
            x[i][j] += F(w, total)
    return FractionalAssignment(x)


@st.composite
def binary_instances(draw, max_n=6, max_m=None, square=False):
    n = draw(st.integers(1, max_n))
    m = n if square else draw(st.integers(1, max_m or max_n))
    masks = draw(st.lists(st.integers(1, (1 << m) - 1), min_size=n, max_size=n))
    return binary_from_masks(masks, m)


@st.composite
def bivalued_instances(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    rows = []
    for _ in range(n):
        mask = draw(st.integers(1, (1 << n) - 1))
        beta = draw(st.fractions(min_value=0, max_value=5, max_denominator=6))
        gap = draw(st.fractions(min_value=F(1, 6), max_value=5, max_denominator=6))
        rows.append([beta + gap if mask >> j & 1 else beta for j in range(n)])
    return Instance(rows)


