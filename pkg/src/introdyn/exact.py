"""Full 2^N transition matrix of the introspection-with-mutation chain and its
stationary distribution.

This is the ground-truth route: it only ever evaluates game payoffs, so the
closed forms elsewhere in the package can be validated against it rather than
share code with it.  One chain step selects a player uniformly at random; with
probability 1 - mu_c - mu_d the selected player compares payoffs through the
Fermi rule, otherwise they adopt C (probability mu_c) or D (mu_d) outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Population,
    all_state_bits,
    cooperator_counts,
    fermi,
    payoff_difference_vector,
    state_label,
    display_order,
)

MAX_DENSE_PLAYERS = 14
MAX_BUILD_PLAYERS = 24


class ConvergenceError(RuntimeError):
    """Power iteration ran out of sweeps before reaching tolerance."""


@dataclass(frozen=True)
class TransitionMatrix:
    """Sparse row-major transition matrix.

    Row ``a`` has exactly N off-diagonal entries, one per player: moving to
    ``neighbors[a, i-1]`` (state ``a`` with player i's bit flipped) with
    probability ``probs[a, i-1]``.  ``diag`` is the complementary self-loop,
    computed as one minus the row sum so rows are stochastic by construction.
    """

    n_players: int
    neighbors: np.ndarray   # (2^N, N) int
    probs: np.ndarray       # (2^N, N) float
    diag: np.ndarray        # (2^N,) float

    @property
    def n_states(self) -> int:
        return 1 << self.n_players

    def left_multiply(self, pi: np.ndarray) -> np.ndarray:
        """Row-vector product pi @ T without materialising the dense matrix."""
        out = pi * self.diag
        out += np.bincount(self.neighbors.ravel(),
                           weights=(pi[:, None] * self.probs).ravel(),
                           minlength=self.n_states)
        return out

    def to_dense(self) -> np.ndarray:
        if self.n_players > MAX_DENSE_PLAYERS:
            raise ValueError(
                f"dense form is capped at {MAX_DENSE_PLAYERS} players, "
                f"got {self.n_players}")
        dense = np.zeros((self.n_states, self.n_states))
        rows = np.arange(self.n_states)
        dense[rows, rows] = self.diag
        for j in range(self.n_players):
            dense[rows, self.neighbors[:, j]] = self.probs[:, j]
        return dense


def build_transition_matrix(pop: Population) -> TransitionMatrix:
    """Assemble the chain for one population.

    The off-diagonal entry from ``a`` to ``a`` with player i's bit flipped is

        (1/N) * [ (1 - mu_c_i - mu_d_i) * fermi(beta_i, df_i(a)) + mu_target ]

    where ``df_i`` is the payoff difference of the current action over the
    switch and ``mu_target`` is mu_c when the switch adopts C, mu_d when D.
    Payoff differences come from evaluating the game itself, never from a
    game-specific shortcut.
    """
    n = pop.n_players
    if n > MAX_BUILD_PLAYERS:
        raise ValueError(
            f"transition matrix is capped at {MAX_BUILD_PLAYERS} players, got {n}")
    for idx, params in enumerate(pop.players, start=1):
        if params.beta_is_infinite:
            raise ValueError(
                f"player {idx} has infinite selection intensity; the chain is "
                f"only built for finite beta")

    bits = all_state_bits(n)
    neighbors = np.empty((1 << n, n), dtype=np.int64)
    probs = np.empty((1 << n, n), dtype=float)
    for i in range(1, n + 1):
        params = pop.players[i - 1]
        keep = 1.0 - params.mu_c - params.mu_d
        diffs = payoff_difference_vector(pop.game, i, bits)
        switches_to_c = ((bits >> (i - 1)) & 1) == 0
        mu_target = np.where(switches_to_c, params.mu_c, params.mu_d)
        probs[:, i - 1] = (keep * fermi(params.beta, diffs) + mu_target) / n
        neighbors[:, i - 1] = bits ^ (1 << (i - 1))
    diag = 1.0 - probs.sum(axis=1)
    return TransitionMatrix(n_players=n, neighbors=neighbors, probs=probs,
                            diag=diag)


def stationary_distribution(t: TransitionMatrix, method: str = "direct",
                            tolerance: float = 1e-13,
                            max_iterations: int = 1_000_000) -> np.ndarray:
    """Solve pi @ T = pi, returning the normalised probability vector.

    ``direct`` solves the linear system (T' - I) with one equation replaced by
    the normalisation constraint; ``power`` repeats pi <- pi @ T from the
    uniform vector until the successive-iterate L1 distance drops below
    ``tolerance``, raising ConvergenceError after ``max_iterations`` sweeps.
    """
    if method == "direct":
        if t.n_players > MAX_DENSE_PLAYERS:
            raise ValueError(
                f"direct solve is capped at {MAX_DENSE_PLAYERS} players, "
                f"got {t.n_players}; use method='power'")
        a = t.to_dense().T - np.eye(t.n_states)
        a[0, :] = 1.0
        b = np.zeros(t.n_states)
        b[0] = 1.0
        return np.linalg.solve(a, b)

    if method == "power":
        pi = np.full(t.n_states, 1.0 / t.n_states)
        for _ in range(max_iterations):
            nxt = t.left_multiply(pi)
            nxt /= nxt.sum()
            if float(np.abs(nxt - pi).sum()) < tolerance:
                return nxt
            pi = nxt
        raise ConvergenceError(
            f"power iteration did not reach L1 tolerance {tolerance} within "
            f"{max_iterations} sweeps")

    raise ValueError(f"unknown method {method!r}; expected 'direct' or 'power'")


def _infer_players(pi: np.ndarray) -> int:
    size = len(pi)
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise ValueError(f"distribution length {size} is not a power of two")
    return n


def cooperation_probability(pi: np.ndarray) -> float:
    """Expected fraction of cooperators under the distribution."""
    pi = np.asarray(pi, dtype=float)
    n = _infer_players(pi)
    counts = cooperator_counts(all_state_bits(n))
    return float(pi @ counts) / n


def marginal(pi: np.ndarray, i: int) -> float:
    """Long-run probability that player i cooperates: mass on states with
    that player's bit set."""
    pi = np.asarray(pi, dtype=float)
    n = _infer_players(pi)
    if not 1 <= i <= n:
        raise ValueError(f"player index {i} out of range 1..{n}")
    bits = all_state_bits(n)
    return float(pi[((bits >> (i - 1)) & 1) == 1].sum())


def write_stationary_csv(path, pi: np.ndarray, metadata: dict | None = None):
    """Write the distribution as CSV with columns state_label, state_index,
    probability.  Rows follow table display order (all-defect first); optional
    metadata is emitted as leading ``# key=value`` lines."""
    pi = np.asarray(pi, dtype=float)
    n = _infer_players(pi)
    with open(path, "w") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write("state_label,state_index,probability\n")
        for s in display_order(n):
            fh.write(f"{state_label(int(s), n)},{int(s)},{float(pi[s])!r}\n")
