"""Per-player additivity detection and the public-goods switching cost.

A game is additive for player i when the payoff difference between their two
actions does not depend on what the co-players do.  Additivity is what makes
the stationary distribution factorize, so everything downstream of the
closed-form route starts with the verdict produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ActionState, Game, payoff_difference_vector

# 2^(N-1) contexts per player are enumerated exhaustively; beyond this the scan
# is refused rather than silently sampled.
MAX_EXHAUSTIVE_PLAYERS = 20


@dataclass(frozen=True)
class Additive:
    """Verdict for one player: the difference is the constant ``delta``."""

    delta: float


@dataclass(frozen=True)
class NotAdditive:
    """Verdict for one player, witnessed by two co-player contexts.

    Both contexts have the player's own bit cleared; ``diff_a`` and ``diff_b``
    are the payoff differences there, and they disagree beyond tolerance.
    ``context_a`` is always the all-defect profile, ``context_b`` the context
    whose difference strays furthest from it.
    """

    context_a: ActionState
    context_b: ActionState
    diff_a: float
    diff_b: float


@dataclass(frozen=True)
class AdditivityReport:
    """Per-player additivity verdicts for one game."""

    per_player: tuple
    game_additive: bool

    @property
    def deltas(self) -> tuple:
        """The per-player constants; only available when the game is additive."""
        if not self.game_additive:
            bad = [i + 1 for i, v in enumerate(self.per_player)
                   if isinstance(v, NotAdditive)]
            raise ValueError(f"game is not additive for players {bad}")
        return tuple(v.delta for v in self.per_player)


def check_additivity(game: Game, tol: float = 1e-9) -> AdditivityReport:
    """Scan every co-player context and classify each player.

    For player i all 2^(N-1) contexts with a_i = 0 are enumerated and the
    payoff difference evaluated at each; the player is additive iff the spread
    (max - min) stays within ``tol * max(1, max |difference|)``.  The constant
    delta_i is read off at the all-defect context.  The a_i = 1 half of the
    state space needs no scan because the difference is antisymmetric under
    flipping the own bit.
    """
    if not (math.isfinite(tol) and tol >= 0.0):
        raise ValueError(f"tolerance must be finite and >= 0, got {tol}")
    n = game.n_players
    if n > MAX_EXHAUSTIVE_PLAYERS:
        raise ValueError(
            f"exhaustive additivity check is capped at {MAX_EXHAUSTIVE_PLAYERS} "
            f"players, got {n}")

    verdicts = []
    ctx = np.arange(1 << (n - 1), dtype=np.int64)
    for i in range(1, n + 1):
        # splice a zero bit into position i-1 so the own action stays "defect"
        low = ctx & ((1 << (i - 1)) - 1)
        contexts = ((ctx ^ low) << 1) | low
        diffs = payoff_difference_vector(game, i, contexts)

        scale = max(1.0, float(np.max(np.abs(diffs))))
        spread = float(np.max(diffs) - np.min(diffs))
        if spread <= tol * scale:
            verdicts.append(Additive(delta=float(diffs[0])))
        else:
            j = int(np.argmax(np.abs(diffs - diffs[0])))
            verdicts.append(NotAdditive(
                context_a=ActionState(int(contexts[0]), n),
                context_b=ActionState(int(contexts[j]), n),
                diff_a=float(diffs[0]),
                diff_b=float(diffs[j]),
            ))

    return AdditivityReport(
        per_player=tuple(verdicts),
        game_additive=all(isinstance(v, Additive) for v in verdicts),
    )


def pgg_delta(alpha_i: float, r_i: float, n: int) -> float:
    """Switching cost of a public-goods contributor: alpha_i * (1 - r_i / n).

    Positive when the multiplied contribution comes back smaller than it went
    in (r_i < n), zero at r_i = n, negative when cooperation pays for itself.
    """
    if not alpha_i > 0.0:
        raise ValueError(f"contribution must be > 0, got {alpha_i}")
    if n < 1:
        raise ValueError(f"group size must be >= 1, got {n}")
    return alpha_i * (1.0 - r_i / n)
