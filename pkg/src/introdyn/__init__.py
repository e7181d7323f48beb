"""Introspection dynamics with mutation on binary-action N-player games.

One player per step reconsiders their own action by comparing the payoff they
get now with the payoff the flipped action would earn, everything else held
fixed; a Fermi function of that difference, mixed with action-dependent
mutation rates, gives the switching probability.  The package computes the
stationary outcome three independent ways — a per-player product formula for
additive games, an exact stationary distribution of the full chain, and Monte
Carlo simulation — and ships a small CLI that drives them from JSON configs.
"""

from .additivity import (
    Additive,
    AdditivityReport,
    NotAdditive,
    check_additivity,
    pgg_delta,
)
from .closed_form import (
    BalanceLine,
    MutationSelectionBalance,
    PlayerClosedForm,
    ThresholdCheck,
    group_cooperation,
    mutation_selection_balance,
    neutral_drift,
    pgg_cooperation_probability,
    player_cooperation_probability,
    product_measure,
    strong_selection_limit,
    threshold_check,
)
from .exact import (
    ConvergenceError,
    TransitionMatrix,
    build_transition_matrix,
    cooperation_probability,
    marginal,
    stationary_distribution,
    write_stationary_csv,
)
from .model import (
    INFINITE_BETA,
    ActionState,
    BimatrixGame,
    DonationGame,
    Game,
    PlayerParams,
    Population,
    PublicGoodsGame,
    TableGame,
    all_state_bits,
    cooperator_counts,
    display_order,
    fermi,
    payoff,
    payoff_difference,
    payoff_difference_vector,
    state_label,
)
from .simulate import (
    SimulationConfig,
    SimulationResult,
    run_chain,
    switch_probability,
    switch_probability_table,
    write_replicates_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ActionState",
    "Additive",
    "AdditivityReport",
    "BalanceLine",
    "BimatrixGame",
    "ConvergenceError",
    "DonationGame",
    "Game",
    "INFINITE_BETA",
    "MutationSelectionBalance",
    "NotAdditive",
    "PlayerClosedForm",
    "PlayerParams",
    "Population",
    "PublicGoodsGame",
    "SimulationConfig",
    "SimulationResult",
    "TableGame",
    "ThresholdCheck",
    "TransitionMatrix",
    "all_state_bits",
    "build_transition_matrix",
    "check_additivity",
    "cooperation_probability",
    "cooperator_counts",
    "display_order",
    "fermi",
    "group_cooperation",
    "marginal",
    "mutation_selection_balance",
    "neutral_drift",
    "payoff",
    "payoff_difference",
    "payoff_difference_vector",
    "pgg_cooperation_probability",
    "pgg_delta",
    "player_cooperation_probability",
    "product_measure",
    "run_chain",
    "state_label",
    "stationary_distribution",
    "strong_selection_limit",
    "switch_probability",
    "switch_probability_table",
    "threshold_check",
    "write_replicates_csv",
    "write_stationary_csv",
]
