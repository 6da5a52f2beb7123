"""Atomic selfish routing with bulk-discount edge pricing."""

from .braess import (
    BraessReport,
    build_classic_braess,
    build_priced_braess,
    edge_addition_experiment,
    rho_formula,
)
from .engine import (
    DynamicsConfig,
    DynamicsResult,
    EquilibriumReport,
    StrategyProfile,
    best_response,
    edge_loads,
    is_equilibrium,
    potential,
    run_best_response_dynamics,
    social_cost,
    unit_path_cost,
)
from .model import (
    Commodity,
    EdgeSpec,
    GameInstance,
    PathEnumerationError,
    ScenarioError,
    enumerate_paths,
    parse_scenario,
    prepare,
    serialize_scenario,
    validate_instance,
)
from .oracle import (
    POA_BOUND,
    PoAReport,
    find_all_equilibria,
    optimal_profile,
    price_of_anarchy,
    profile_count,
)
from .pricing import (
    PRICE_FAMILIES,
    PriceSpec,
    check_price_properties,
    eval_F,
    eval_u,
)

__all__ = [
    "BraessReport",
    "Commodity",
    "DynamicsConfig",
    "DynamicsResult",
    "EdgeSpec",
    "EquilibriumReport",
    "GameInstance",
    "POA_BOUND",
    "PRICE_FAMILIES",
    "PathEnumerationError",
    "PoAReport",
    "PriceSpec",
    "ScenarioError",
    "StrategyProfile",
    "best_response",
    "build_classic_braess",
    "build_priced_braess",
    "check_price_properties",
    "edge_addition_experiment",
    "edge_loads",
    "enumerate_paths",
    "eval_F",
    "eval_u",
    "find_all_equilibria",
    "is_equilibrium",
    "optimal_profile",
    "parse_scenario",
    "potential",
    "prepare",
    "price_of_anarchy",
    "profile_count",
    "rho_formula",
    "run_best_response_dynamics",
    "serialize_scenario",
    "social_cost",
    "unit_path_cost",
    "validate_instance",
]
