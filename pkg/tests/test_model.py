"""Tests for the domain types and payoff primitives."""

import math

import numpy as np
import pytest

from introdyn.model import (
    ActionState,
    BimatrixGame,
    DonationGame,
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

# Three-player public goods population used throughout: contributions (1, 2, 3),
# multipliers (1, 3, 9).  Hand-computed reference numbers below come from
# evaluating the payoff formula directly.
TABLE_GAME = PublicGoodsGame(alphas=[1.0, 2.0, 3.0], multipliers=[1.0, 3.0, 9.0])


class TestFermi:
    def test_frozen_values(self):
        # 1/(1 + e^3) and 1/(1 + e^-12), evaluated by hand
        assert fermi(5.0, 0.6) == pytest.approx(0.04742587317756678, abs=1e-15)
        assert fermi(2.0, -6.0) == pytest.approx(0.9999938558253978, abs=1e-15)

    def test_zero_argument_is_one_half(self):
        for beta in (0.0, 0.5, 2.0, 50.0):
            assert fermi(beta, 0.0) == 0.5
        assert fermi(3.0, -0.0) == 0.5

    def test_zero_beta_ignores_payoffs(self):
        for x in (-100.0, -1.0, 0.0, 2.5, 1e6):
            assert fermi(0.0, x) == 0.5

    def test_complement_identity(self):
        for beta in (0.1, 1.0, 7.0):
            for x in (-20.0, -3.0, -0.4, 0.0, 0.7, 5.0, 30.0):
                assert fermi(beta, x) + fermi(beta, -x) == pytest.approx(1.0, abs=1e-15)

    def test_strictly_decreasing(self):
        xs = [-50.0, -5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0, 50.0]
        vals = [fermi(1.5, x) for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_saturates_without_overflow(self):
        # exp(beta*x) would overflow a double well before these
        assert fermi(10.0, 1000.0) == 0.0
        assert fermi(10.0, -1000.0) == 1.0
        assert fermi(1e8, 5.0) == 0.0
        assert fermi(1e8, -5.0) == 1.0

    def test_vectorized_matches_scalar(self):
        xs = np.array([-12.0, -0.3, 0.0, 0.3, 12.0, 800.0])
        out = fermi(2.5, xs)
        assert out.shape == xs.shape
        for x, v in zip(xs, out):
            assert v == fermi(2.5, float(x))

    def test_rejects_bad_beta(self):
        with pytest.raises(ValueError):
            fermi(-0.5, 1.0)
        with pytest.raises(ValueError):
            fermi(math.nan, 1.0)
        with pytest.raises(ValueError):
            fermi(math.inf, 1.0)


class TestActionState:
    def test_bit_convention(self):
        # player 1 is the least-significant bit; labels print player 1 first
        s = ActionState.from_label("DDC")
        assert s.bits == 0b100
        assert s.n_players == 3
        assert (s.action(1), s.action(2), s.action(3)) == (0, 0, 1)

    def test_label_round_trip(self):
        for bits in range(8):
            s = ActionState(bits, 3)
            assert ActionState.from_label(s.label) == s
        assert ActionState(5, 3).label == "CDC"
        assert str(ActionState(5, 3)) == "CDC"

    def test_flip(self):
        s = ActionState.from_label("DCD")
        assert s.flip(1).label == "CCD"
        assert s.flip(2).label == "DDD"
        assert s.flip(3).label == "DCC"
        assert s.flip(2).flip(2) == s

    def test_homogeneous_states(self):
        assert ActionState.all_defect(4).bits == 0
        assert ActionState.all_cooperate(4).bits == 0b1111
        assert ActionState.all_cooperate(4).label == "CCCC"

    def test_cooperator_count(self):
        assert ActionState.all_defect(6).n_cooperators == 0
        assert ActionState.from_label("CDCCD").n_cooperators == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            ActionState(8, 3)
        with pytest.raises(ValueError):
            ActionState(-1, 3)
        with pytest.raises(ValueError):
            ActionState(0, 0)
        with pytest.raises(ValueError):
            ActionState.from_label("DCX")
        with pytest.raises(ValueError):
            ActionState(0, 2).action(3)
        with pytest.raises(ValueError):
            ActionState(0, 2).flip(0)

    def test_display_order(self):
        # states sorted by label read as binary, player 1 most significant
        assert display_order(3).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]
        assert display_order(2).tolist() == [0, 2, 1, 3]
        labels = [state_label(s, 3) for s in display_order(3)]
        assert labels == ["DDD", "DDC", "DCD", "DCC", "CDD", "CDC", "CCD", "CCC"]


class TestPlayerParams:
    def test_defaults(self):
        p = PlayerParams(beta=2.0)
        assert p.mu_c == 0.0 and p.mu_d == 0.0
        assert not p.beta_is_infinite

    def test_infinite_beta_sentinel(self):
        assert PlayerParams(beta=math.inf).beta_is_infinite

    def test_validation(self):
        with pytest.raises(ValueError):
            PlayerParams(beta=-1.0)
        with pytest.raises(ValueError):
            PlayerParams(beta=math.nan)
        with pytest.raises(ValueError):
            PlayerParams(beta=1.0, mu_c=-0.01)
        with pytest.raises(ValueError):
            PlayerParams(beta=1.0, mu_d=1.0)
        with pytest.raises(ValueError):
            PlayerParams(beta=1.0, mu_c=0.6, mu_d=0.4)
        # boundary: mu_c + mu_d just below one is fine
        PlayerParams(beta=1.0, mu_c=0.6, mu_d=0.39)


class TestPublicGoodsGame:
    def test_payoffs_by_hand(self):
        g = TABLE_GAME
        ccc = ActionState.from_label("CCC")
        ddd = ActionState.from_label("DDD")
        ddc = ActionState.from_label("DDC")
        # pool at CCC is (1 + 6 + 27)/3 = 34/3
        assert g.payoff(1, ccc) == pytest.approx(34.0 / 3.0 - 1.0)
        assert g.payoff(1, ccc) == pytest.approx(10.333333333333334, abs=1e-12)
        assert g.payoff(2, ccc) == pytest.approx(34.0 / 3.0 - 2.0)
        assert g.payoff(3, ccc) == pytest.approx(34.0 / 3.0 - 3.0)
        # nobody contributes, nobody earns
        for i in (1, 2, 3):
            assert g.payoff(i, ddd) == 0.0
        # only player 3 contributes: pool is 27/3 = 9
        assert g.payoff(1, ddc) == pytest.approx(9.0)
        assert g.payoff(3, ddc) == pytest.approx(9.0 - 3.0)

    def test_payoff_vector_matches_scalar(self):
        g = TABLE_GAME
        bits = all_state_bits(3)
        for i in (1, 2, 3):
            vec = g.payoff_vector(i, bits)
            for b in bits:
                assert vec[b] == g.payoff(i, ActionState(int(b), 3))

    def test_payoff_table_shape(self):
        table = TABLE_GAME.payoff_table()
        assert table.shape == (8, 3)
        assert table[0b111, 0] == pytest.approx(34.0 / 3.0 - 1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            PublicGoodsGame(alphas=[1.0, 2.0], multipliers=[1.0])
        with pytest.raises(ValueError):
            PublicGoodsGame(alphas=[1.0, 0.0], multipliers=[1.0, 1.0])
        with pytest.raises(ValueError):
            PublicGoodsGame(alphas=[1.0, 2.0], multipliers=[1.0, -3.0])
        with pytest.raises(ValueError):
            PublicGoodsGame(alphas=[], multipliers=[])
        with pytest.raises(ValueError):
            TABLE_GAME.payoff(4, ActionState.all_defect(3))
        with pytest.raises(ValueError):
            TABLE_GAME.payoff(1, ActionState.all_defect(4))


class TestBimatrixGame:
    def test_donation_payoffs(self):
        g = BimatrixGame.donation(benefit=1.0, cost_1=0.6, cost_2=0.1)
        expected = {
            "CC": (0.4, 0.9),
            "CD": (-0.6, 1.0),
            "DC": (1.0, -0.1),
            "DD": (0.0, 0.0),
        }
        for lab, (f1, f2) in expected.items():
            s = ActionState.from_label(lab)
            assert g.payoff(1, s) == pytest.approx(f1)
            assert g.payoff(2, s) == pytest.approx(f2)

    def test_stag_hunt_payoffs(self):
        g = BimatrixGame.stag_hunt(benefit=1.0, cost_1=0.6, cost_2=0.1)
        expected = {
            "CC": (0.4, 0.9),
            "CD": (-0.6, 0.0),
            "DC": (0.0, -0.1),
            "DD": (0.0, 0.0),
        }
        for lab, (f1, f2) in expected.items():
            s = ActionState.from_label(lab)
            assert g.payoff(1, s) == pytest.approx(f1)
            assert g.payoff(2, s) == pytest.approx(f2)

    def test_rpst_payoffs(self):
        g = BimatrixGame.from_rpst(reward=3.0, punishment=1.0, sucker=0.0,
                                   temptation=5.0)
        expected = {
            "CC": (3.0, 3.0),
            "CD": (0.0, 5.0),
            "DC": (5.0, 0.0),
            "DD": (1.0, 1.0),
        }
        for lab, (f1, f2) in expected.items():
            s = ActionState.from_label(lab)
            assert g.payoff(1, s) == f1
            assert g.payoff(2, s) == f2

    def test_rpst_is_symmetric(self):
        g = BimatrixGame.from_rpst(3.0, 1.0, 0.0, 5.0)
        for lab, mirrored in (("CD", "DC"), ("DC", "CD"), ("CC", "CC"), ("DD", "DD")):
            s = ActionState.from_label(lab)
            m = ActionState.from_label(mirrored)
            assert g.payoff(1, s) == g.payoff(2, m)

    def test_payoff_vector_matches_scalar(self):
        g = BimatrixGame.donation(1.0, 0.6, 0.1)
        bits = all_state_bits(2)
        for i in (1, 2):
            vec = g.payoff_vector(i, bits)
            for b in bits:
                assert vec[b] == g.payoff(i, ActionState(int(b), 2))

    def test_validation(self):
        with pytest.raises(ValueError):
            BimatrixGame([[1.0, 2.0]], [[1.0, 2.0]])
        with pytest.raises(ValueError):
            BimatrixGame([[1.0, 2.0], [3.0, math.inf]], np.zeros((2, 2)))


class TestDonationGame:
    def test_two_player_case_matches_bimatrix(self):
        pair = BimatrixGame.donation(benefit=1.0, cost_1=0.6, cost_2=0.1)
        general = DonationGame(benefit=1.0, costs=[0.6, 0.1])
        for bits in range(4):
            s = ActionState(bits, 2)
            for i in (1, 2):
                assert general.payoff(i, s) == pytest.approx(pair.payoff(i, s))

    def test_four_player_payoffs_by_hand(self):
        g = DonationGame(benefit=3.0, costs=[0.5, 1.0, 1.5, 2.0])
        s = ActionState.from_label("CDCD")
        # players 1 and 3 cooperate; each co-player of a cooperator gets 3/3 = 1
        assert g.payoff(1, s) == pytest.approx(1.0 - 0.5)   # receives from 3
        assert g.payoff(2, s) == pytest.approx(2.0)          # receives from 1 and 3
        assert g.payoff(3, s) == pytest.approx(1.0 - 1.5)
        assert g.payoff(4, s) == pytest.approx(2.0)

    def test_payoff_vector_matches_scalar(self):
        g = DonationGame(benefit=3.0, costs=[0.5, 1.0, 1.5, 2.0])
        bits = all_state_bits(4)
        for i in range(1, 5):
            vec = g.payoff_vector(i, bits)
            for b in bits:
                assert vec[b] == pytest.approx(g.payoff(i, ActionState(int(b), 4)))

    def test_validation(self):
        with pytest.raises(ValueError):
            DonationGame(benefit=1.0, costs=[0.5])
        with pytest.raises(ValueError):
            DonationGame(benefit=math.nan, costs=[0.5, 0.5])


class TestTableGame:
    def test_round_trip_from_payoff_table(self):
        g = TableGame(TABLE_GAME.payoff_table())
        assert g.n_players == 3
        for bits in range(8):
            s = ActionState(bits, 3)
            for i in (1, 2, 3):
                assert g.payoff(i, s) == TABLE_GAME.payoff(i, s)

    def test_validation(self):
        with pytest.raises(ValueError):
            TableGame(np.zeros((7, 3)))     # needs 8 rows for 3 players
        with pytest.raises(ValueError):
            TableGame(np.zeros(8))
        with pytest.raises(ValueError):
            TableGame(np.full((4, 2), math.inf))


class TestPopulation:
    def test_builds_and_freezes(self):
        pop = Population(TABLE_GAME, [PlayerParams(beta=2.0, mu_c=0.1, mu_d=0.1)] * 3)
        assert pop.n_players == 3
        assert isinstance(pop.players, tuple)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            Population(TABLE_GAME, [PlayerParams(beta=2.0)] * 2)

    def test_type_check(self):
        with pytest.raises(TypeError):
            Population(TABLE_GAME, [PlayerParams(beta=2.0), (1.0, 0.0, 0.0),
                                    PlayerParams(beta=2.0)])


class TestPayoffDifferences:
    GAMES = [
        TABLE_GAME,
        DonationGame(benefit=3.0, costs=[0.5, 1.0, 1.5, 2.0]),
        BimatrixGame.stag_hunt(1.0, 0.6, 0.1),
        BimatrixGame.from_rpst(3.0, 1.0, 0.0, 5.0),
    ]

    def test_reference_values(self):
        g = TABLE_GAME
        ddd = ActionState.all_defect(3)
        # switching to C from the all-defect state: gains alpha_i * (r_i/N - 1)
        assert payoff_difference(g, 1, ddd) == pytest.approx(2.0 / 3.0)
        assert payoff_difference(g, 2, ddd) == pytest.approx(0.0)
        assert payoff_difference(g, 3, ddd) == pytest.approx(-6.0)

    def test_antisymmetric_under_own_flip(self):
        for g in self.GAMES:
            n = g.n_players
            for bits in range(1 << n):
                s = ActionState(bits, n)
                for i in range(1, n + 1):
                    assert payoff_difference(g, i, s) == -payoff_difference(
                        g, i, s.flip(i))

    def test_vector_matches_scalar(self):
        for g in self.GAMES:
            n = g.n_players
            bits = all_state_bits(n)
            for i in range(1, n + 1):
                vec = payoff_difference_vector(g, i, bits)
                for b in bits:
                    assert vec[b] == payoff_difference(g, i, ActionState(int(b), n))

    def test_additive_game_has_state_independent_difference(self):
        # for the public goods game the difference only depends on the own bit
        g = TABLE_GAME
        deltas = {1: 2.0 / 3.0, 2: 0.0, 3: -6.0}
        for bits in range(8):
            s = ActionState(bits, 3)
            for i in (1, 2, 3):
                sign = 1.0 - 2.0 * s.action(i)
                assert payoff_difference(g, i, s) == pytest.approx(sign * deltas[i])

    def test_module_level_payoff_helper(self):
        s = ActionState.from_label("CCC")
        assert payoff(TABLE_GAME, 1, s) == TABLE_GAME.payoff(1, s)


class TestStateHelpers:
    def test_all_state_bits(self):
        assert all_state_bits(3).tolist() == list(range(8))
        with pytest.raises(ValueError):
            all_state_bits(0)

    def test_cooperator_counts(self):
        assert cooperator_counts(all_state_bits(3)).tolist() == [0, 1, 1, 2, 1, 2, 2, 3]

    def test_state_label(self):
        assert state_label(4, 3) == "DDC"
        assert state_label(0, 5) == "DDDDD"
