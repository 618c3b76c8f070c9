"""Exact analysis of elicitability under aggregation of agent outputs."""

from .aggregate import (
    MechanismReport,
    aggregate_addition,
    aggregate_intersection,
    mechanisms,
)
from .elicit import (
    Elicitable,
    Inelicitable,
    best_response,
    construct_reward,
    decide_elicitable,
    is_best_response,
    verify_improving_direction,
    verify_kkt,
)
from .linsys import LinearSystem, Row, decide_feasible, optimize, project, verify_certificate
from .model import (
    AggregationOperation,
    Instance,
    LinearReward,
    OutputVector,
    alpha_q,
    is_feasible,
    sufficient_statistic,
    validate_instance,
)
from .power import (
    check_weak_necessity,
    construct_separating_alpha,
    corollary_special_case,
    decide_expansion_existential,
    decide_power_alternate,
    expansion_fixed_alpha,
    verify_power_witness,
)

__version__ = "0.1.0"
