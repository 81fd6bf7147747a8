from fractions import Fraction as F

import pytest
from hypothesis import given

from helpers import (
    MNW_LIE,
    MNW_TRUTH,
    MNW_X,
    MNW_Y,
    TWO_AGENT,
    TWO_AGENT_CEEI,
    TWO_AGENT_HZ,
    TWO_AGENT_SWAP,
    binary_instances,
    bivalued_instances,
)
from pseudomarket import errors
from pseudomarket.hz import hz_solve
from pseudomarket.model import FractionalAssignment, Instance, binary_reduce, utility_vector
from pseudomarket.welfare import (
    ceei_prices_from_mnw,
    hz_via_reduction,
    leximin_unconstrained_binary,
    mnw_kkt_check,
)

q = F

TRUTH_GRADIENT = (
    (q(3025, 6), q(605, 12), q(605, 12), q(605, 12), q(605, 12)),
    (275, 275, q(1375, 3), 275, 275),
    (110, 275, 110, 275, 110),
    (0, 0, 0, 0, q(3025, 3)),
    (0, 0, 0, 0, q(3025, 3)),
)
TRUTH_RESIDUAL = (
    (0, q(-2695, 12), q(-4895, 12), q(-2695, 12), q(-11495, 12)),
    (q(-1375, 6), 0, 0, 0, q(-2200, 3)),
    (q(-2365, 6), 0, q(-1045, 3), 0, q(-2695, 3)),
    (q(-3025, 6), -275, q(-1375, 3), -275, 0),
    (q(-3025, 6), -275, q(-1375, 3), -275, 0),
)
LIE_GRADIENT = (
    (q(1625, 4), 325, 325, 325, 325),
    (q(2535, 8), q(2535, 8), q(4225, 8), q(2535, 8), q(2535, 8)),
    (130, 325, 130, 325, 130),
    (0, 0, 0, 0, q(4225, 4)),
    (0, 0, 0, 0, q(4225, 4)),
)
LIE_RESIDUAL = (
    (0, 0, q(-1625, 8), 0, q(-2925, 4)),
    (q(-715, 8), q(-65, 8), 0, q(-65, 8), q(-5915, 8)),
    (q(-1105, 4), 0, q(-3185, 8), 0, q(-3705, 4)),
    (q(-1625, 4), -325, q(-4225, 8), -325, 0),
    (q(-1625, 4), -325, q(-4225, 8), -325, 0),
)


def test_kkt_truthful_profile():
    report = mnw_kkt_check(Instance(MNW_TRUTH), FractionalAssignment(MNW_X))
    assert report.verdict and report.violation is None
    assert report.u_minus == (q(605, 12), q(275, 6), q(55, 2), q(3025, 3), q(3025, 3))
    assert report.multipliers == (q(3025, 6), 275, q(1375, 3), 275, q(3025, 3))
    assert report.gradient == TRUTH_GRADIENT
    assert report.residual == TRUTH_RESIDUAL
    assert report.utilities[0] == 10


def test_kkt_misreported_profile():
    report = mnw_kkt_check(Instance(MNW_LIE), FractionalAssignment(MNW_Y))
    assert report.verdict
    assert report.u_minus == (q(325, 8), q(845, 16), q(65, 2), q(4225, 4), q(4225, 4))
    assert report.multipliers == (q(1625, 4), 325, q(4225, 8), 325, q(4225, 4))
    assert report.gradient == LIE_GRADIENT
    assert report.residual == LIE_RESIDUAL
    truthful = utility_vector(Instance(MNW_TRUTH), FractionalAssignment(MNW_Y))
    assert truthful[0] == 10 + q(3, 8)


def test_ceei_prices_two_agent():
    inst = Instance(TWO_AGENT)
    x = FractionalAssignment(TWO_AGENT_CEEI)
    assert mnw_kkt_check(inst, x).verdict
    assert ceei_prices_from_mnw(inst, x) == (q(6, 5), q(4, 5))


def test_kkt_rejections():
    inst = Instance(TWO_AGENT)
    swap = mnw_kkt_check(inst, FractionalAssignment(TWO_AGENT_SWAP))
    assert not swap.verdict
    assert swap.violation == {"kind": "positive-residual", "agent": 0, "item": 0, "value": "1"}
    half = mnw_kkt_check(inst, FractionalAssignment(TWO_AGENT_HZ))
    assert half.violation["kind"] == "unequal-multiplier"
    with pytest.raises(errors.CertificateInvalid):
        ceei_prices_from_mnw(inst, FractionalAssignment(TWO_AGENT_SWAP))
    with pytest.raises(errors.ZeroUtilityAgent):
        mnw_kkt_check(inst, FractionalAssignment([[1, 0], [0, 1]]))


def test_kkt_json_has_welfare():
    out = mnw_kkt_check(Instance(TWO_AGENT), FractionalAssignment(TWO_AGENT_CEEI)).to_json()
    assert out["nash_welfare"] == "25/12"
    assert out["verdict"] is True
    assert out["multipliers"] == ["5/2", "5/3"]
    assert out["residual"] == [["0", "0"], ["0", "-5/3"]]


def test_leximin_unconstrained_two_agent():
    x, utilities = leximin_unconstrained_binary(binary_reduce(Instance(TWO_AGENT)))
    assert utilities == (q(1, 2), q(1, 2))
    assert x.x == ((q(1, 2), q(1, 2)), (q(1, 2), q(1, 2)))
    with pytest.raises(errors.NotBinary):
        leximin_unconstrained_binary(Instance(TWO_AGENT))


def test_leximin_unconstrained_can_exceed_one():
    x, utilities = leximin_unconstrained_binary(Instance.from_liked_sets([{0, 1, 2}, {2}], 3))
    assert utilities == (2, 1)


@given(binary_instances(max_n=6, max_m=6))
def test_unconstrained_leximin_is_mnw(inst):
    # under 1-0 utilities the leximin allocation also maximizes Nash welfare
    x, utilities = leximin_unconstrained_binary(inst)
    assert all(u > 0 for u in utilities)
    report = mnw_kkt_check(inst, x)
    assert report.verdict
    prices = ceei_prices_from_mnw(inst, x, report)
    assert all(p >= 0 for p in prices)


@given(binary_instances(max_n=6, square=True))
def test_capped_unconstrained_leximin_equals_hz(inst):
    _, free = leximin_unconstrained_binary(inst)
    x, _, _ = hz_solve(inst)
    assert tuple(min(u, 1) for u in free) == utility_vector(inst, x)


def test_reduction_examples():
    for rows in (TWO_AGENT, MNW_TRUTH):
        inst = Instance(rows)
        reduced = binary_reduce(inst)
        x = hz_via_reduction(inst)
        assert x.balanced
        assert utility_vector(reduced, x) == utility_vector(reduced, hz_solve(inst)[0])
    with pytest.raises(errors.NotSquare):
        hz_via_reduction(Instance([[1, 0, 1]]))
    with pytest.raises(errors.NotDichotomous):
        hz_via_reduction(Instance([[1, 2, 3], [1, 1, 1], [3, 2, 1]]))


@given(bivalued_instances())
def test_reduction_matches_hz_utilities(inst):
    reduced = binary_reduce(inst)
    assert utility_vector(reduced, hz_via_reduction(inst)) == utility_vector(reduced, hz_solve(inst)[0])
