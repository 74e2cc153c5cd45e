"""Leximin allocation of mixed goods and chores under {-1, 0, c}
order-neutral submodular valuations, with brute-force certification oracles
and fairness property checkers."""

from .core import (
    Allocation,
    Instance,
    lex_compare,
    pareto_dominates,
    sorted_utilities,
    utility_vector,
)
from .fairness import check_ef1, check_mms, check_prop1, lorenz_geq, p_mean_welfare
from .instgen import (
    ExPDMInstance,
    SplitMix64,
    fixtures,
    gen_capped_groups,
    gen_hardness,
    gen_random_additive,
    parse_instance,
    serialize_instance,
)
from .oracle import (
    brute_leximin,
    brute_lorenz_dominating,
    brute_max_usw,
    brute_mms,
    compare_domination,
)
from .solver import SolveReport, solve
from .threshold import TriDecomposition, decompose3, verify_tridecomposition
from .valuations import (
    Additive,
    CappedGroups,
    Explicit,
    GeneralAdditive,
    Group,
    telescoping_vector,
    validate_order_neutral,
    validate_range,
    validate_submodular,
)
from .yankee import yankee_swap

__version__ = "0.1.0"

__all__ = [
    "Additive",
    "Allocation",
    "CappedGroups",
    "ExPDMInstance",
    "Explicit",
    "GeneralAdditive",
    "Group",
    "Instance",
    "SolveReport",
    "SplitMix64",
    "TriDecomposition",
    "brute_leximin",
    "brute_lorenz_dominating",
    "brute_max_usw",
    "brute_mms",
    "check_ef1",
    "check_mms",
    "check_prop1",
    "compare_domination",
    "decompose3",
    "fixtures",
    "gen_capped_groups",
    "gen_hardness",
    "gen_random_additive",
    "lex_compare",
    "lorenz_geq",
    "p_mean_welfare",
    "pareto_dominates",
    "parse_instance",
    "serialize_instance",
    "solve",
    "sorted_utilities",
    "telescoping_vector",
    "utility_vector",
    "validate_order_neutral",
    "validate_range",
    "validate_submodular",
    "verify_tridecomposition",
    "yankee_swap",
]
