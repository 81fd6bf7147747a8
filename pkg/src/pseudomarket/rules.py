"""Registry of assignment rules addressable by string id.

Each entry maps an instance to a JSON-ready report; :func:`assign` keeps only
the assignment, which is what the manipulation fuzzer compares.
"""

from __future__ import annotations

from typing import Callable

from pseudomarket import errors
from pseudomarket.eps import eps_solve
from pseudomarket.hz import hz_solve, verify_hz
from pseudomarket.io import assignment_to_json, vector_to_json
from pseudomarket.model import FractionalAssignment, Instance, utility_vector
from pseudomarket.nb import nb_solve_binary, uniform_disagreement
from pseudomarket.welfare import hz_via_reduction, leximin_unconstrained_binary


def _eps(inst):
    x, trace = eps_solve(inst)
    return x, {"trace": trace.to_json()}


def _hz(inst):
    x, prices, trace = hz_solve(inst)
    return x, {
        "prices": vector_to_json(prices),
        "trace": trace.to_json(),
        "certificate": verify_hz(inst, x, prices).to_json(),
    }


def _leximin_u(inst):
    x, _ = leximin_unconstrained_binary(inst)
    return x, {}


def _hz_reduction(inst):
    return hz_via_reduction(inst), {}


def _nb(inst):
    x, offsets = nb_solve_binary(inst)
    return x, {
        "disagreement": vector_to_json(uniform_disagreement(inst)),
        "offsets": vector_to_json(offsets),
    }


RULES: dict[str, Callable] = {
    "eps": _eps,
    "hz": _hz,
    "leximin-u": _leximin_u,
    "hz-reduction": _hz_reduction,
    "nb": _nb,
}


def get_rule(rule_id: str) -> Callable:
    try:
        return RULES[rule_id]
    except KeyError:
        raise errors.RuleUnavailable(
            f"unknown rule {rule_id!r}; choose from {', '.join(RULES)}", rule=rule_id
        ) from None


def assign(rule_id: str, inst: Instance) -> FractionalAssignment:
    x, _ = get_rule(rule_id)(inst)
    return x


def solve_report(rule_id: str, inst: Instance) -> dict:
    x, extra = get_rule(rule_id)(inst)
    out = {"rule": rule_id}
    out.update(assignment_to_json(x))
    out["utilities"] = vector_to_json(utility_vector(inst, x))
    out.update(extra)
    return out
