"""Tests for the transition matrix and its stationary distribution."""

import math

import numpy as np
import pytest

from introdyn.additivity import check_additivity
from introdyn.closed_form import player_cooperation_probability, product_measure
from introdyn.exact import (
    ConvergenceError,
    TransitionMatrix,
    build_transition_matrix,
    cooperation_probability,
    marginal,
    stationary_distribution,
    write_stationary_csv,
)
from introdyn.model import (
    ActionState,
    BimatrixGame,
    PlayerParams,
    Population,
    PublicGoodsGame,
    TableGame,
    all_state_bits,
)


def table_population():
    game = PublicGoodsGame(alphas=[1.0, 2.0, 3.0], multipliers=[1.0, 3.0, 9.0])
    return Population(game, [PlayerParams(beta=2.0, mu_c=0.1, mu_d=0.1)] * 3)


def donation_population():
    game = BimatrixGame.donation(benefit=1.0, cost_1=0.6, cost_2=0.1)
    return Population(game, [PlayerParams(beta=5.0, mu_c=0.05, mu_d=0.15)] * 2)


def stag_hunt_population(mu=0.05):
    game = BimatrixGame.stag_hunt(benefit=1.0, cost_1=0.6, cost_2=0.1)
    return Population(game, [PlayerParams(beta=5.0, mu_c=mu, mu_d=mu)] * 2)


def random_pgg_population(rng, n):
    game = PublicGoodsGame(alphas=rng.uniform(0.2, 4.0, n),
                           multipliers=rng.uniform(0.3, 3.0 * n, n))
    players = []
    for _ in range(n):
        mu_c = rng.uniform(0.0, 0.45)
        mu_d = rng.uniform(0.0, min(0.45, 0.95 - mu_c))
        players.append(PlayerParams(beta=rng.uniform(0.0, 10.0),
                                    mu_c=mu_c, mu_d=mu_d))
    return Population(game, players)


FIXTURES = [
    table_population(),
    donation_population(),
    stag_hunt_population(),
    Population(TableGame([[0.0, 0.0, 0.0], [2.0, 3.0, 3.0],
                          [3.0, 2.0, 3.0], [1.0, 1.0, 4.0],
                          [3.0, 3.0, 2.0], [1.0, 4.0, 1.0],
                          [4.0, 1.0, 1.0], [2.5, 2.5, 2.5]]),
               [PlayerParams(beta=1.0, mu_c=0.2, mu_d=0.05),
                PlayerParams(beta=0.0, mu_c=0.0, mu_d=0.0),
                PlayerParams(beta=3.0, mu_c=0.3, mu_d=0.3)]),
]


class TestBuild:
    def test_single_player_neutral_chain(self):
        pop = Population(PublicGoodsGame([1.0], [1.0]), [PlayerParams(beta=0.0)])
        t = build_transition_matrix(pop)
        assert t.n_states == 2
        # with beta = 0 and no mutation every switch happens with probability 1/2
        assert t.probs[0, 0] == 0.5
        assert t.probs[1, 0] == 0.5
        assert t.diag.tolist() == [0.5, 0.5]

    def test_reference_entry(self):
        t = build_transition_matrix(table_population())
        ddd = ActionState.from_label("DDD").bits
        cdd = ActionState.from_label("CDD").bits
        assert t.neighbors[ddd, 0] == cdd
        # (1/3) * [0.8 * fermi(2, 2/3) + 0.1], worked out by hand
        assert t.probs[ddd, 0] == pytest.approx(0.088962273953612, abs=1e-15)

    def test_mutation_direction_follows_target_action(self):
        t = build_transition_matrix(donation_population())
        dd = ActionState.from_label("DD").bits
        cc = ActionState.from_label("CC").bits
        # switching D->C mixes in mu_c, C->D mixes in mu_d
        assert t.probs[dd, 0] == pytest.approx(0.043970349271026714, abs=1e-15)
        assert t.probs[cc, 0] == pytest.approx(0.4560296507289734, abs=1e-15)

    def test_rows_are_stochastic_with_hamming_one_support(self):
        for pop in FIXTURES:
            t = build_transition_matrix(pop)
            n = pop.n_players
            rows = t.probs.sum(axis=1) + t.diag
            assert np.all(np.abs(rows - 1.0) < 1e-12)
            assert np.all(t.probs >= 0.0) and np.all(t.probs <= 1.0)
            assert np.all(t.diag >= 0.0) and np.all(t.diag <= 1.0)
            assert t.probs.shape == (1 << n, n)
            bits = all_state_bits(n)
            for j in range(n):
                assert np.all((bits ^ t.neighbors[:, j]) == (1 << j))

    def test_dense_agrees_with_sparse_rows(self):
        t = build_transition_matrix(table_population())
        dense = t.to_dense()
        assert np.allclose(dense.sum(axis=1), 1.0, atol=1e-12)
        ddd = 0
        assert dense[ddd, 0] == t.diag[0]
        for j in range(3):
            assert dense[ddd, t.neighbors[ddd, j]] == t.probs[ddd, j]

    def test_rejects_infinite_beta(self):
        pop = Population(PublicGoodsGame([1.0, 1.0], [1.0, 1.0]),
                         [PlayerParams(beta=math.inf), PlayerParams(beta=1.0)])
        with pytest.raises(ValueError):
            build_transition_matrix(pop)

    def test_rejects_oversized_population(self):
        n = 25
        pop = Population(PublicGoodsGame(np.ones(n), np.ones(n)),
                         [PlayerParams(beta=1.0)] * n)
        with pytest.raises(ValueError):
            build_transition_matrix(pop)


class TestStationary:
    def test_two_state_birth_death_balance(self):
        pop = Population(PublicGoodsGame([2.0], [0.5]),
                         [PlayerParams(beta=1.3, mu_c=0.02, mu_d=0.3)])
        t = build_transition_matrix(pop)
        up, down = t.probs[0, 0], t.probs[1, 0]
        expected = np.array([down, up]) / (up + down)
        for method in ("direct", "power"):
            pi = stationary_distribution(t, method=method)
            assert pi == pytest.approx(expected, abs=1e-13)

    def test_reference_population_to_four_decimals(self):
        t = build_transition_matrix(table_population())
        pi = stationary_distribution(t, method="direct")
        by_label = {ActionState(s, 3).label: round(float(pi[s]), 4)
                    for s in range(8)}
        assert by_label == {
            "DDD": 0.0367, "DDC": 0.3299, "DCD": 0.0367, "DCC": 0.3299,
            "CDD": 0.0133, "CDC": 0.1201, "CCD": 0.0133, "CCC": 0.1201,
        }

    def test_reference_population_marginals(self):
        t = build_transition_matrix(table_population())
        pi = stationary_distribution(t, method="direct")
        assert marginal(pi, 1) == pytest.approx(0.266886821860836, abs=1e-10)
        assert marginal(pi, 2) == pytest.approx(0.5, abs=1e-10)
        assert marginal(pi, 3) == pytest.approx(0.8999950846603183, abs=1e-10)
        assert cooperation_probability(pi) == pytest.approx(
            0.555627302173718, abs=1e-10)

    def test_asymmetric_mutation_donation_game(self):
        t = build_transition_matrix(donation_population())
        pi = stationary_distribution(t, method="direct")
        labels = {lab: round(float(pi[ActionState.from_label(lab).bits]), 3)
                  for lab in ("CC", "CD", "DC", "DD")}
        assert labels == {"CC": 0.031, "CD": 0.057, "DC": 0.321, "DD": 0.591}

    def test_methods_agree(self):
        rng = np.random.default_rng(20240811)
        pops = FIXTURES + [random_pgg_population(rng, n) for n in (2, 4, 7, 10)]
        for pop in pops:
            t = build_transition_matrix(pop)
            direct = stationary_distribution(t, method="direct")
            power = stationary_distribution(t, method="power")
            assert np.max(np.abs(direct - power)) < 1e-9

    def test_stationarity_residual(self):
        rng = np.random.default_rng(7)
        pops = FIXTURES + [random_pgg_population(rng, 12)]
        for pop in pops:
            t = build_transition_matrix(pop)
            for method in ("direct", "power"):
                pi = stationary_distribution(t, method=method)
                assert np.abs(t.left_multiply(pi) - pi).sum() < 1e-11
                assert pi.sum() == pytest.approx(1.0, abs=1e-12)
                assert np.all(pi > 0.0)

    def test_additive_games_factorize(self):
        # solved distribution equals the product of closed-form marginals
        rng = np.random.default_rng(99)
        for n in (2, 3, 5, 8, 10):
            pop = random_pgg_population(rng, n)
            report = check_additivity(pop.game)
            assert report.game_additive
            ps = [player_cooperation_probability(d, q).p
                  for d, q in zip(report.deltas, pop.players)]
            pi = stationary_distribution(build_transition_matrix(pop),
                                         method="direct")
            assert np.max(np.abs(pi - product_measure(ps))) < 1e-10

    def test_stag_hunt_does_not_factorize(self):
        t = build_transition_matrix(stag_hunt_population())
        pi = stationary_distribution(t, method="direct")
        ps = [marginal(pi, 1), marginal(pi, 2)]
        gap = np.max(np.abs(pi - product_measure(ps)))
        assert gap > 1e-3

    def test_power_non_convergence_raises(self):
        t = build_transition_matrix(table_population())
        with pytest.raises(ConvergenceError):
            stationary_distribution(t, method="power", max_iterations=3)

    def test_direct_cap(self):
        t = TransitionMatrix(n_players=15,
                             neighbors=np.zeros((2, 1), dtype=np.int64),
                             probs=np.zeros((2, 1)), diag=np.ones(2))
        with pytest.raises(ValueError):
            stationary_distribution(t, method="direct")

    def test_unknown_method(self):
        t = build_transition_matrix(table_population())
        with pytest.raises(ValueError):
            stationary_distribution(t, method="fastest")


class TestDistributionSummaries:
    def test_point_mass_on_full_cooperation(self):
        pi = np.zeros(8)
        pi[0b111] = 1.0
        assert cooperation_probability(pi) == 1.0
        for i in (1, 2, 3):
            assert marginal(pi, i) == 1.0

    def test_uniform_distribution(self):
        pi = np.full(16, 1.0 / 16.0)
        assert cooperation_probability(pi) == pytest.approx(0.5)
        for i in range(1, 5):
            assert marginal(pi, i) == pytest.approx(0.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            cooperation_probability(np.full(6, 1.0 / 6.0))
        with pytest.raises(ValueError):
            marginal(np.full(8, 1.0 / 8.0), 4)
        with pytest.raises(ValueError):
            marginal(np.full(8, 1.0 / 8.0), 0)


class TestCsvExport:
    def test_round_trip(self, tmp_path):
        t = build_transition_matrix(donation_population())
        pi = stationary_distribution(t)
        path = tmp_path / "stationary.csv"
        write_stationary_csv(path, pi, metadata={"method": "direct", "n": 2})
        lines = path.read_text().splitlines()
        assert lines[0] == "# method=direct"
        assert lines[1] == "# n=2"
        assert lines[2] == "state_label,state_index,probability"
        rows = [line.split(",") for line in lines[3:]]
        assert [r[0] for r in rows] == ["DD", "DC", "CD", "CC"]
        for label, index, prob in rows:
            s = ActionState.from_label(label)
            assert int(index) == s.bits
            assert float(prob) == pi[s.bits]

    def test_no_metadata_header(self, tmp_path):
        pi = np.full(4, 0.25)
        path = tmp_path / "uniform.csv"
        write_stationary_csv(path, pi)
        assert path.read_text().startswith("state_label,state_index,probability")
