"""Risk-sensitive average-cost CTMDP solver."""

from ._core import (
    CtmdpModel,
    brute_force_optimal,
    estimate_average_cost,
    estimate_first_passage,
    extract_policy,
    first_passage_value,
    irreducible_under,
    load_model,
    optimal_first_passage,
    parse_model,
    policy_value_risk_neutral,
    policy_value_spectral,
    q_factor,
    serialize_model,
    simulate_trajectory,
    solve,
    validate_model,
)

__all__ = [
    "CtmdpModel",
    "brute_force_optimal",
    "estimate_average_cost",
    "estimate_first_passage",
    "extract_policy",
    "first_passage_value",
    "irreducible_under",
    "load_model",
    "optimal_first_passage",
    "parse_model",
    "policy_value_risk_neutral",
    "policy_value_spectral",
    "q_factor",
    "serialize_model",
    "simulate_trajectory",
    "solve",
    "validate_model",
]
