"""Reproduce the eight-state stationary table for the heterogeneous
three-player pool, comparing the per-player product formula against the
exact chain solve.

Run:  python3 demos/reference_table.py
"""

from introdyn import (
    PlayerParams,
    Population,
    PublicGoodsGame,
    build_transition_matrix,
    check_additivity,
    display_order,
    group_cooperation,
    player_cooperation_probability,
    product_measure,
    state_label,
    stationary_distribution,
)


def main():
    # Three players with stakes 1, 2, 3 and personal multipliers 1, 3, 9:
    # player 1's contribution is shrunk, player 2's is returned exactly,
    # player 3's is tripled.
    game = PublicGoodsGame(alphas=[1.0, 2.0, 3.0], multipliers=[1.0, 3.0, 9.0])
    players = [PlayerParams(beta=2.0, mu_c=0.1, mu_d=0.1)] * 3

    report = check_additivity(game)
    print("switching costs (positive favours defection):")
    for i, delta in enumerate(report.deltas, start=1):
        print(f"  player {i}: delta = {delta:+.6f}")

    ps = [player_cooperation_probability(d, q).p
          for d, q in zip(report.deltas, players)]
    formula = product_measure(ps)
    exact = stationary_distribution(build_transition_matrix(
        Population(game, players)))

    print("\nstate     formula     exact       |diff|")
    for s in display_order(3):
        diff = abs(float(formula[s]) - float(exact[s]))
        print(f"{state_label(int(s), 3)}       {formula[s]:.6f}    "
              f"{exact[s]:.6f}    {diff:.1e}")

    print(f"\nmean cooperation p_C = {group_cooperation(ps):.6f}")
    print("per-player:", ", ".join(f"{p:.4f}" for p in ps))


if __name__ == "__main__":
    main()
