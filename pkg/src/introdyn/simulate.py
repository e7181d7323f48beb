"""Monte Carlo realisation of the introspection-with-mutation chain.

One simulation step selects a single player uniformly at random and lets them
reconsider: with probability (1 - mu_c - mu_d) * fermi(beta, df) + mu_target
the player switches action.  Replicates are independent chains seeded from a
counter-based generator (Philox), with the child stream for replicate r
derived from (base_seed, r), so runs are reproducible regardless of how they
are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import (
    ActionState,
    Population,
    all_state_bits,
    fermi,
    payoff_difference,
    payoff_difference_vector,
)

RNG_ALGORITHM = "philox4x64"

# precompute the per-state switch probabilities up to this many players; the
# table for N=16 already holds 2^16 * 16 entries
MAX_TABLE_PLAYERS = 16

INITIAL_STATES = ("all_defect", "all_cooperate", "uniform_random")

_BLOCK = 1 << 15


@dataclass(frozen=True)
class SimulationConfig:
    """Run shape: total player selections, warm-up discard, replicate count,
    base seed, and the initial condition."""

    steps: int
    warmup: int = 0
    replicates: int = 1
    seed: int = 0
    initial_state: str = "uniform_random"
    batches: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not 0 <= self.warmup < self.steps:
            raise ValueError(
                f"warmup must satisfy 0 <= warmup < steps, got {self.warmup}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must be an unsigned 64-bit int, got {self.seed}")
        if self.initial_state not in INITIAL_STATES:
            raise ValueError(
                f"initial_state must be one of {INITIAL_STATES}, "
                f"got {self.initial_state!r}")
        if self.batches:
            if self.batches < 2:
                raise ValueError(f"need at least 2 batches, got {self.batches}")
            if (self.steps - self.warmup) % self.batches != 0:
                raise ValueError(
                    f"measured steps ({self.steps - self.warmup}) must divide "
                    f"evenly into {self.batches} batches")


@dataclass(frozen=True)
class SimulationResult:
    """Replicate-level cooperation estimates plus their box-plot statistics."""

    per_replicate_pC: tuple
    mean: float
    quartiles: tuple        # (q1, median, q3), linear interpolation
    min: float
    max: float
    player_frequencies: tuple = ()   # per replicate: per-player a_i = 1 rates
    child_seeds: tuple = ()          # first derived seed word per replicate
    batch_means: tuple = ()          # per replicate: per-batch averages


def summarize(per_replicate, player_frequencies=(), child_seeds=(),
              batch_means=()) -> SimulationResult:
    """Order statistics over replicate estimates.

    Quartiles use the linear-interpolation rule on the sorted values.
    """
    values = [float(v) for v in per_replicate]
    if not values:
        raise ValueError("need at least one replicate value")
    q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
    return SimulationResult(
        per_replicate_pC=tuple(values),
        mean=sum(values) / len(values),
        quartiles=(float(q1), float(median), float(q3)),
        min=min(values),
        max=max(values),
        player_frequencies=tuple(player_frequencies),
        child_seeds=tuple(child_seeds),
        batch_means=tuple(batch_means),
    )


def switch_probability(pop: Population, i: int, state_bits: int) -> float:
    """Probability that player i switches action when selected in this state.

    This is the conditional switch probability; the chain's transition entry
    divides it by N for the uniform player draw.
    """
    params = pop.players[i - 1]
    diff = payoff_difference(pop.game, i, ActionState(state_bits, pop.n_players))
    mu_target = params.mu_d if (state_bits >> (i - 1)) & 1 else params.mu_c
    keep = 1.0 - params.mu_c - params.mu_d
    return keep * fermi(params.beta, diff) + mu_target


def switch_probability_table(pop: Population) -> list:
    """switch_probability for every (state, player), as nested lists indexed
    [state_bits][i-1].  Only built for N <= 16."""
    n = pop.n_players
    if n > MAX_TABLE_PLAYERS:
        raise ValueError(
            f"switch table is only built up to {MAX_TABLE_PLAYERS} players, "
            f"got {n}")
    bits = all_state_bits(n)
    table = np.empty((1 << n, n))
    for i in range(1, n + 1):
        params = pop.players[i - 1]
        keep = 1.0 - params.mu_c - params.mu_d
        diffs = payoff_difference_vector(pop.game, i, bits)
        mu_target = np.where((bits >> (i - 1)) & 1, params.mu_d, params.mu_c)
        table[:, i - 1] = keep * fermi(params.beta, diffs) + mu_target
    return table.tolist()


def _child_seed_word(seed: int, replicate: int) -> int:
    return int(np.random.SeedSequence((seed, replicate)).generate_state(
        1, np.uint64)[0])


def _run_replicate(pop: Population, cfg: SimulationConfig, replicate: int,
                   table):
    n = pop.n_players
    rng = np.random.Generator(
        np.random.Philox(seed=np.random.SeedSequence((cfg.seed, replicate))))

    if cfg.initial_state == "all_defect":
        state = 0
    elif cfg.initial_state == "all_cooperate":
        state = (1 << n) - 1
    else:
        state = int(rng.integers(0, 1 << n))

    count = state.bit_count()
    co_total = 0
    measured = cfg.steps - cfg.warmup
    marks = [cfg.warmup] * n
    times = [0] * n
    batch_size = measured // cfg.batches if cfg.batches else 0
    batch_sums = []
    batch_acc = 0
    left_in_batch = batch_size

    warmup = cfg.warmup
    t = 0
    while t < cfg.steps:
        block = min(_BLOCK, cfg.steps - t)
        players = rng.integers(0, n, size=block).tolist()
        draws = rng.random(block).tolist()
        for k in range(block):
            i = players[k]
            if table is not None:
                q = table[state][i]
            else:
                q = switch_probability(pop, i + 1, state)
            if draws[k] < q:
                bit = 1 << i
                if t >= warmup:
                    if state & bit:
                        times[i] += t - marks[i]
                    marks[i] = t
                state ^= bit
                count += 1 if state & bit else -1
            if t >= warmup:
                co_total += count
                if batch_size:
                    batch_acc += count
                    left_in_batch -= 1
                    if left_in_batch == 0:
                        batch_sums.append(batch_acc / (batch_size * n))
                        batch_acc = 0
                        left_in_batch = batch_size
            t += 1

    for i in range(n):
        if (state >> i) & 1:
            times[i] += cfg.steps - marks[i]

    return (co_total / (measured * n),
            tuple(v / measured for v in times),
            tuple(batch_sums))


def run_chain(pop: Population, cfg: SimulationConfig,
              threads: int = 1) -> SimulationResult:
    """Simulate the chain and summarise the replicate estimates.

    Each replicate r runs an independent chain seeded from (cfg.seed, r); the
    post-step cooperator fraction is averaged over the steps after warm-up.
    Results are bit-identical for a given config no matter how many worker
    threads are used, because every replicate owns its full random stream.
    """
    for idx, params in enumerate(pop.players, start=1):
        if params.beta_is_infinite:
            raise ValueError(
                f"player {idx} has infinite selection intensity; simulation "
                f"requires finite beta")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")

    table = (switch_probability_table(pop)
             if pop.n_players <= MAX_TABLE_PLAYERS else None)
    replicates = range(cfg.replicates)
    if threads == 1 or cfg.replicates == 1:
        outcomes = [_run_replicate(pop, cfg, r, table) for r in replicates]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(
                lambda r: _run_replicate(pop, cfg, r, table), replicates))

    return summarize(
        [o[0] for o in outcomes],
        player_frequencies=[o[1] for o in outcomes],
        child_seeds=[_child_seed_word(cfg.seed, r) for r in replicates],
        batch_means=[o[2] for o in outcomes],
    )


def write_replicates_csv(path, result: SimulationResult,
                         metadata: dict | None = None):
    """Per-replicate CSV with columns replicate, seed, p_hat_C; optional
    metadata as leading ``# key=value`` lines."""
    seeds = result.child_seeds or [""] * len(result.per_replicate_pC)
    with open(path, "w") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write("replicate,seed,p_hat_C\n")
        for r, (seed, value) in enumerate(zip(seeds, result.per_replicate_pC)):
            fh.write(f"{r},{seed},{float(value)!r}\n")
