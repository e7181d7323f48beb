"""Domain types for binary-action N-player games and the payoff primitives.

States are bitmasks: player 1 sits in the least-significant bit and a set bit
means "cooperate".  The bitmask value doubles as the state index everywhere in
this package, so index 0 is the all-defect profile.  String renderings print
player 1 leftmost ("DDC" = only player 3 cooperates = bitmask 0b100).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INFINITE_BETA = math.inf


def fermi(beta: float, x):
    """Switching probability 1 / (1 + exp(beta * x)).

    Decreasing in x: a payoff advantage of the current action (x > 0) makes a
    switch unlikely.  Overflow-safe for any finite beta >= 0 and any x; accepts
    a scalar or an ndarray of payoff differences.
    """
    if not beta >= 0.0:
        raise ValueError(f"selection intensity must be >= 0, got {beta}")
    if math.isinf(beta):
        raise ValueError("fermi requires finite beta; the infinite sentinel is "
                         "handled by the closed-form limit operations")
    if np.ndim(x) == 0:
        x = float(x)
        t = math.exp(-beta * abs(x))
        return t / (1.0 + t) if x >= 0.0 else 1.0 / (1.0 + t)
    x = np.asarray(x, dtype=float)
    t = np.exp(-beta * np.abs(x))
    return np.where(x >= 0.0, t / (1.0 + t), 1.0 / (1.0 + t))


@dataclass(frozen=True)
class ActionState:
    """Joint action profile packed into a bitmask of width ``n_players``."""

    bits: int
    n_players: int

    def __post_init__(self):
        if self.n_players < 1:
            raise ValueError(f"need at least one player, got {self.n_players}")
        if not 0 <= self.bits < (1 << self.n_players):
            raise ValueError(
                f"bitmask {self.bits:#x} out of range for {self.n_players} players")

    def action(self, i: int) -> int:
        """Action of player i (1-based): 1 = cooperate, 0 = defect."""
        self._check_player(i)
        return (self.bits >> (i - 1)) & 1

    def flip(self, i: int) -> "ActionState":
        """The state with player i's action switched."""
        self._check_player(i)
        return ActionState(self.bits ^ (1 << (i - 1)), self.n_players)

    @property
    def n_cooperators(self) -> int:
        return self.bits.bit_count()

    @property
    def label(self) -> str:
        """C/D string, player 1 leftmost."""
        return "".join("C" if self.action(i) else "D"
                       for i in range(1, self.n_players + 1))

    @classmethod
    def from_label(cls, label: str) -> "ActionState":
        bits = 0
        for i, ch in enumerate(label):
            if ch == "C":
                bits |= 1 << i
            elif ch != "D":
                raise ValueError(f"state labels use only C and D, got {label!r}")
        return cls(bits, len(label))

    @classmethod
    def all_defect(cls, n_players: int) -> "ActionState":
        return cls(0, n_players)

    @classmethod
    def all_cooperate(cls, n_players: int) -> "ActionState":
        return cls((1 << n_players) - 1, n_players)

    def _check_player(self, i: int):
        if not 1 <= i <= self.n_players:
            raise ValueError(f"player index {i} out of range 1..{self.n_players}")

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class PlayerParams:
    """Per-player learning/noise parameters.

    beta is the selection intensity (``math.inf`` is accepted as a sentinel but
    only the closed-form limit operations take it); mu_c and mu_d are the
    payoff-independent probabilities of adopting C respectively D when
    selected, with mu_c + mu_d < 1.
    """

    beta: float
    mu_c: float = 0.0
    mu_d: float = 0.0

    def __post_init__(self):
        if math.isnan(self.beta) or not self.beta >= 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        for name, mu in (("mu_c", self.mu_c), ("mu_d", self.mu_d)):
            if not 0.0 <= mu < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {mu}")
        if self.mu_c + self.mu_d >= 1.0:
            raise ValueError(
                f"mutation probabilities must satisfy mu_c + mu_d < 1, "
                f"got {self.mu_c} + {self.mu_d}")

    @property
    def beta_is_infinite(self) -> bool:
        return math.isinf(self.beta)


class Game:
    """Payoff oracle f_i over bitmask states; subclasses supply the rule."""

    n_players: int

    def payoff(self, i: int, state: ActionState) -> float:
        """Payoff to player i (1-based) in the given state."""
        self._check_player(i)
        self._check_state(state)
        return self._payoff(i, state.bits)

    def _payoff(self, i: int, bits: int) -> float:
        raise NotImplementedError

    def payoff_vector(self, i: int, bits: np.ndarray) -> np.ndarray:
        """Vectorized payoff to player i over an int array of state bitmasks."""
        self._check_player(i)
        return np.array([self._payoff(i, int(b)) for b in np.ravel(bits)],
                        dtype=float).reshape(np.shape(bits))

    def payoff_table(self) -> np.ndarray:
        """Full (2^N, N) payoff array, rows indexed by state bitmask."""
        states = np.arange(1 << self.n_players, dtype=np.int64)
        return np.column_stack(
            [self.payoff_vector(i, states) for i in range(1, self.n_players + 1)])

    def _check_player(self, i: int):
        if not 1 <= i <= self.n_players:
            raise ValueError(f"player index {i} out of range 1..{self.n_players}")

    def _check_state(self, state: ActionState):
        if state.n_players != self.n_players:
            raise ValueError(
                f"state is {state.n_players} players wide, game has {self.n_players}")


class PublicGoodsGame(Game):
    """Heterogeneous linear public goods game.

    Player j contributes alphas[j-1] when cooperating; each contribution is
    scaled by that player's multiplier and the pool is shared equally:

        f_i(a) = (1/N) * sum_j multipliers[j] * alphas[j] * a_j  -  alphas[i] * a_i
    """

    def __init__(self, alphas, multipliers):
        alphas = np.asarray(alphas, dtype=float)
        multipliers = np.asarray(multipliers, dtype=float)
        if alphas.ndim != 1 or multipliers.shape != alphas.shape:
            raise ValueError("alphas and multipliers must be 1-d and equal length")
        if alphas.size < 1:
            raise ValueError("need at least one player")
        if not (np.all(np.isfinite(alphas)) and np.all(alphas > 0.0)):
            raise ValueError("contributions must be finite and > 0")
        if not (np.all(np.isfinite(multipliers)) and np.all(multipliers > 0.0)):
            raise ValueError("multipliers must be finite and > 0")
        self.alphas = alphas
        self.multipliers = multipliers
        self.n_players = int(alphas.size)
        self._weights = alphas * multipliers

    def _payoff(self, i, bits):
        pool = 0.0
        for j in range(self.n_players):
            if (bits >> j) & 1:
                pool += self._weights[j]
        own = (bits >> (i - 1)) & 1
        return pool / self.n_players - self.alphas[i - 1] * own

    def payoff_vector(self, i, bits):
        self._check_player(i)
        bits = np.asarray(bits)
        pool = np.zeros(bits.shape, dtype=float)
        for j in range(self.n_players):
            pool += self._weights[j] * ((bits >> j) & 1)
        own = (bits >> (i - 1)) & 1
        return pool / self.n_players - self.alphas[i - 1] * own


class BimatrixGame(Game):
    """Two-player game given by a pair of 2x2 payoff matrices.

    Rows are player 1's action and columns player 2's, cooperate first:
    ``payoffs_1[0][1]`` is player 1's payoff when they cooperate against a
    defector.  ``payoffs_2`` uses the same row/column orientation.
    """

    n_players = 2

    def __init__(self, payoffs_1, payoffs_2):
        p1 = np.asarray(payoffs_1, dtype=float)
        p2 = np.asarray(payoffs_2, dtype=float)
        if p1.shape != (2, 2) or p2.shape != (2, 2):
            raise ValueError("both payoff matrices must be 2x2")
        if not (np.all(np.isfinite(p1)) and np.all(np.isfinite(p2))):
            raise ValueError("payoff entries must be finite")
        self.payoffs_1 = p1
        self.payoffs_2 = p2

    def _payoff(self, i, bits):
        row = 1 - (bits & 1)
        col = 1 - ((bits >> 1) & 1)
        m = self.payoffs_1 if i == 1 else self.payoffs_2
        return float(m[row, col])

    def payoff_vector(self, i, bits):
        self._check_player(i)
        bits = np.asarray(bits)
        m = self.payoffs_1 if i == 1 else self.payoffs_2
        return m[1 - (bits & 1), 1 - ((bits >> 1) & 1)]

    @classmethod
    def donation(cls, benefit: float, cost_1: float, cost_2: float) -> "BimatrixGame":
        """Donation-form prisoner's dilemma: cooperating costs c_i and hands the
        co-player the benefit."""
        b, c1, c2 = benefit, cost_1, cost_2
        return cls([[b - c1, -c1], [b, 0.0]],
                   [[b - c2, b], [-c2, 0.0]])

    @classmethod
    def stag_hunt(cls, benefit: float, cost_1: float, cost_2: float) -> "BimatrixGame":
        """Stag hunt: the benefit is produced only if both cooperate."""
        b, c1, c2 = benefit, cost_1, cost_2
        return cls([[b - c1, -c1], [0.0, 0.0]],
                   [[b - c2, 0.0], [-c2, 0.0]])

    @classmethod
    def from_rpst(cls, reward: float, punishment: float, sucker: float,
                  temptation: float) -> "BimatrixGame":
        """Symmetric 2x2 game in reward/punishment/sucker/temptation form."""
        r, p, s, t = reward, punishment, sucker, temptation
        return cls([[r, s], [t, p]],
                   [[r, t], [s, p]])


class DonationGame(Game):
    """Equal-split donation game for N >= 2 players.

    A cooperator i pays costs[i-1] and grants benefit/(N-1) to every co-player;
    for N = 2 this is the pairwise donation game.
    """

    def __init__(self, benefit: float, costs):
        costs = np.asarray(costs, dtype=float)
        if costs.ndim != 1 or costs.size < 2:
            raise ValueError("donation game needs at least two players")
        if not (math.isfinite(benefit) and np.all(np.isfinite(costs))):
            raise ValueError("benefit and costs must be finite")
        self.benefit = float(benefit)
        self.costs = costs
        self.n_players = int(costs.size)

    def _payoff(self, i, bits):
        own = (bits >> (i - 1)) & 1
        received = bits.bit_count() - own
        return (self.benefit * received / (self.n_players - 1)
                - self.costs[i - 1] * own)

    def payoff_vector(self, i, bits):
        self._check_player(i)
        bits = np.asarray(bits)
        own = (bits >> (i - 1)) & 1
        received = np.bitwise_count(bits) - own
        return (self.benefit * received / (self.n_players - 1)
                - self.costs[i - 1] * own)


class TableGame(Game):
    """Explicit payoff table: a (2^N, N) array with rows indexed by bitmask."""

    def __init__(self, payoffs):
        payoffs = np.asarray(payoffs, dtype=float)
        if payoffs.ndim != 2:
            raise ValueError("payoff table must be 2-d (states x players)")
        n = payoffs.shape[1]
        if payoffs.shape[0] != (1 << n):
            raise ValueError(
                f"payoff table for {n} players needs {1 << n} rows, "
                f"got {payoffs.shape[0]}")
        if not np.all(np.isfinite(payoffs)):
            raise ValueError("payoff entries must be finite")
        self.payoffs = payoffs
        self.n_players = int(n)

    def _payoff(self, i, bits):
        return float(self.payoffs[bits, i - 1])

    def payoff_vector(self, i, bits):
        self._check_player(i)
        return self.payoffs[np.asarray(bits), i - 1]

    def payoff_table(self):
        return self.payoffs.copy()


@dataclass(frozen=True)
class Population:
    """A game together with one PlayerParams per player."""

    game: Game
    players: tuple

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if len(self.players) != self.game.n_players:
            raise ValueError(
                f"got {len(self.players)} parameter sets for a "
                f"{self.game.n_players}-player game")
        for p in self.players:
            if not isinstance(p, PlayerParams):
                raise TypeError(f"players must be PlayerParams, got {type(p)!r}")

    @property
    def n_players(self) -> int:
        return self.game.n_players


def payoff(game: Game, i: int, state: ActionState) -> float:
    """Payoff f_i(a) to player i in state a."""
    return game.payoff(i, state)


def payoff_difference(game: Game, i: int, state: ActionState) -> float:
    """f_i(a) - f_i(a with player i's action flipped).

    Positive values mean the current action out-earns the switch; the value is
    antisymmetric under flipping player i's bit.
    """
    return game.payoff(i, state) - game.payoff(i, state.flip(i))


def payoff_difference_vector(game: Game, i: int, bits: np.ndarray) -> np.ndarray:
    """Vectorized payoff difference for player i over an array of bitmasks."""
    bits = np.asarray(bits)
    return game.payoff_vector(i, bits) - game.payoff_vector(i, bits ^ (1 << (i - 1)))


def all_state_bits(n_players: int) -> np.ndarray:
    """All 2^N bitmasks in index order."""
    if n_players < 1:
        raise ValueError("need at least one player")
    return np.arange(1 << n_players, dtype=np.int64)


def cooperator_counts(bits: np.ndarray) -> np.ndarray:
    """Popcount of each bitmask."""
    return np.bitwise_count(np.asarray(bits, dtype=np.int64))


def state_label(bits: int, n_players: int) -> str:
    return ActionState(int(bits), n_players).label


def display_order(n_players: int) -> np.ndarray:
    """State indices ordered the way tables print them: by label read as a
    binary numeral with player 1 the most significant letter (DDD, DDC, ...)."""
    n = n_players
    order = np.empty(1 << n, dtype=np.int64)
    for v in range(1 << n):
        s = 0
        for k in range(n):
            if (v >> k) & 1:
                s |= 1 << (n - 1 - k)
        order[v] = s
    return order
