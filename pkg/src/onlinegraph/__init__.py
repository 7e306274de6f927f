"""Exact adversary-game engine for online graph problems in the vertex-arrival model."""

from .analysis import (
    BijectiveReport,
    FreckleCertificate,
    ReductionOutput,
    bijective_compare,
    freckle_check,
    reduce_is_to_online_ds,
    reduce_mmis_to_online_is,
    theorem_report,
)
from .canon import BACKEND, MarkedGraph, Mark, adversary_moves, canonical_key, isomorphic
from .errors import BudgetExceededError, GraphFormatError, OnlineGraphError, SetSystemError, SizeLimitError
from .game import (
    INFEASIBLE,
    GameResult,
    Problem,
    online_matching_number,
    policy_worst_case,
    replay,
    solve_conservative_is,
    solve_value,
)
from .graph_core import (
    FamilySpec,
    Graph,
    add_isolated,
    encode_graph6,
    family,
    line_graph,
    load_graph,
    make_family,
    split_isolated,
)
from .policies import OracleKind, Policy, complement, make_policy, offline_oracle
from .setsystem import SetSystem, gmos_worst, load_setsystem, mso_value, setsystem_from_graph, setsystem_stats
from .state import RevealedState

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BijectiveReport",
    "BudgetExceededError",
    "FamilySpec",
    "FreckleCertificate",
    "GameResult",
    "Graph",
    "GraphFormatError",
    "INFEASIBLE",
    "Mark",
    "MarkedGraph",
    "OnlineGraphError",
    "OracleKind",
    "Policy",
    "Problem",
    "ReductionOutput",
    "RevealedState",
    "SetSystem",
    "SetSystemError",
    "SizeLimitError",
    "add_isolated",
    "adversary_moves",
    "bijective_compare",
    "canonical_key",
    "complement",
    "encode_graph6",
    "family",
    "freckle_check",
    "gmos_worst",
    "isomorphic",
    "line_graph",
    "load_graph",
    "load_setsystem",
    "make_family",
    "make_policy",
    "mso_value",
    "offline_oracle",
    "online_matching_number",
    "policy_worst_case",
    "reduce_is_to_online_ds",
    "reduce_mmis_to_online_is",
    "replay",
    "setsystem_from_graph",
    "setsystem_stats",
    "solve_conservative_is",
    "solve_value",
    "split_isolated",
    "theorem_report",
]
