"""Property checkers, manipulation search and Birkhoff decomposition."""

from pseudomarket.analysis.birkhoff import LotteryOverMatchings, birkhoff_decompose
from pseudomarket.analysis.manipulation import (
    FixtureRule,
    FuzzReport,
    ManipulationWitness,
    find_manipulation,
    fuzz,
)
from pseudomarket.analysis.properties import check_envy_free, check_pareto_balanced

__all__ = [
    "FixtureRule",
    "FuzzReport",
    "LotteryOverMatchings",
    "ManipulationWitness",
    "birkhoff_decompose",
    "check_envy_free",
    "check_pareto_balanced",
    "find_manipulation",
    "fuzz",
]
