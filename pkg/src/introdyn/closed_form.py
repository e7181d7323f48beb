"""Analytic route: per-player cooperation probabilities and what follows from
them.

For additive games the chain's stationary distribution factorizes, so a single
per-player probability p_i determines everything.  This module computes those
probabilities, assembles the product distribution, specialises to the public
goods game, and exposes the structural consequences: neutral drift, the
strong-selection endpoints, the majority threshold, and the mutation-selection
balance line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .additivity import pgg_delta
from .model import PlayerParams, PublicGoodsGame, fermi


@dataclass(frozen=True)
class PlayerClosedForm:
    """One player's stationary behaviour: p = phi * (1 - mu_c - mu_d) + mu_c."""

    p: float
    delta: float
    phi: float


@dataclass(frozen=True)
class BalanceLine:
    """The affine law p_C(mu) = (1 - 2*mu) * phi_bar + mu."""

    phi_bar: float
    slope: float


@dataclass(frozen=True)
class MutationSelectionBalance:
    p_C: float
    line: BalanceLine


@dataclass(frozen=True)
class ThresholdCheck:
    """Whether the player cooperates more often than not, with the log-odds
    bound that decides it."""

    exceeds_half: bool
    log_odds_bound: float


def player_cooperation_probability(delta: float,
                                   params: PlayerParams) -> PlayerClosedForm:
    """Long-run probability that a player with switching cost ``delta``
    cooperates.

    For finite beta this is fermi(beta, delta) * (1 - mu_c - mu_d) + mu_c.
    The infinite-beta sentinel routes to the strong-selection endpoint (and
    keeps the same identity with phi saturated at 0 or 1).
    """
    if not isinstance(params, PlayerParams):
        raise TypeError(f"params must be PlayerParams, got {type(params)!r}")
    if not math.isfinite(delta):
        raise ValueError(f"switching cost must be finite, got {delta}")
    if params.beta_is_infinite:
        phi = 0.0 if delta > 0 else 1.0
        return PlayerClosedForm(p=strong_selection_limit(delta, params),
                                delta=delta, phi=phi)
    phi = fermi(params.beta, delta)
    keep = 1.0 - params.mu_c - params.mu_d
    return PlayerClosedForm(p=phi * keep + params.mu_c, delta=delta, phi=phi)


def product_measure(ps) -> np.ndarray:
    """Stationary distribution of independent players: the state with bitmask
    ``a`` gets probability prod_i p_i^(a_i) * (1 - p_i)^(1 - a_i)."""
    ps = [float(p) for p in ps]
    if not ps:
        raise ValueError("need at least one player probability")
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probabilities must lie in [0, 1], got {p}")
    # each kron step prepends the next player's bit above the existing ones,
    # which is exactly the bitmask indexing (player 1 least significant)
    return reduce(lambda acc, p: np.kron([1.0 - p, p], acc), ps,
                  np.array([1.0]))


def group_cooperation(ps) -> float:
    """Aggregate cooperation probability: the mean of the per-player p_i."""
    ps = [float(p) for p in ps]
    if not ps:
        raise ValueError("need at least one player probability")
    return sum(ps) / len(ps)


def pgg_cooperation_probability(pgg: PublicGoodsGame, players) -> float:
    """Group cooperation probability of a public goods population, composed
    from the per-player switching costs alpha_i * (1 - r_i / N)."""
    if not isinstance(pgg, PublicGoodsGame):
        raise TypeError(f"expected a PublicGoodsGame, got {type(pgg)!r}")
    players = list(players)
    if len(players) != pgg.n_players:
        raise ValueError(
            f"got {len(players)} parameter sets for {pgg.n_players} players")
    ps = []
    for i, params in enumerate(players, start=1):
        delta = pgg_delta(pgg.alphas[i - 1], pgg.multipliers[i - 1],
                          pgg.n_players)
        ps.append(player_cooperation_probability(delta, params).p)
    return group_cooperation(ps)


def neutral_drift(params: PlayerParams) -> float:
    """Cooperation probability when payoffs play no role: (1 + mu_c - mu_d)/2."""
    return (1.0 + params.mu_c - params.mu_d) / 2.0


def strong_selection_limit(delta: float, params: PlayerParams) -> float:
    """Endpoint of p as beta grows without bound: mu_c for a positive switching
    cost, 1 - mu_d for a negative one.  delta = 0 has no strong-selection
    story and is rejected; use the finite-beta probability instead."""
    if not math.isfinite(delta):
        raise ValueError(f"switching cost must be finite, got {delta}")
    if delta == 0.0:
        raise ValueError(
            "the strong-selection limit is only defined for delta != 0; "
            "at delta = 0 use player_cooperation_probability with finite beta")
    return params.mu_c if delta > 0 else 1.0 - params.mu_d


def threshold_check(delta: float, params: PlayerParams) -> ThresholdCheck:
    """Decide p > 1/2 through the log-odds bound.

    The player cooperates more often than not iff

        beta * delta < ln((1/2 - mu_d) / (1/2 - mu_c)),

    with the boundary counted as "no" (the inequality is strict).  When a
    mutation rate reaches 1/2 the bound saturates: mu_c >= 1/2 forces the
    verdict to yes (bound +inf), mu_d >= 1/2 forces no (bound -inf).
    """
    if not math.isfinite(delta):
        raise ValueError(f"switching cost must be finite, got {delta}")
    up = 0.5 - params.mu_c
    down = 0.5 - params.mu_d
    if up <= 0.0:
        bound = math.inf
    elif down <= 0.0:
        bound = -math.inf
    else:
        bound = math.log(down / up)
    return ThresholdCheck(exceeds_half=bool(params.beta * delta < bound),
                          log_odds_bound=bound)


def mutation_selection_balance(deltas, betas, mu: float) -> MutationSelectionBalance:
    """Aggregate cooperation under one symmetric mutation rate.

    With mu_c = mu_d = mu the group probability is affine in mu:
    p_C = (1 - 2*mu) * phi_bar + mu, where phi_bar averages the mutation-free
    switching propensities fermi(beta_i, delta_i).
    """
    deltas = [float(d) for d in deltas]
    betas = [float(b) for b in betas]
    if len(deltas) != len(betas):
        raise ValueError(
            f"got {len(deltas)} switching costs but {len(betas)} intensities")
    if not deltas:
        raise ValueError("need at least one player")
    if not 0.0 <= mu <= 0.5:
        raise ValueError(f"symmetric mutation rate must lie in [0, 1/2], got {mu}")
    phi_bar = sum(fermi(b, d) for b, d in zip(betas, deltas)) / len(deltas)
    return MutationSelectionBalance(
        p_C=(1.0 - 2.0 * mu) * phi_bar + mu,
        line=BalanceLine(phi_bar=phi_bar, slope=1.0 - 2.0 * phi_bar),
    )
