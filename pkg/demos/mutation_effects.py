"""Show how payoff-independent switching reshapes the stationary outcome:
the affine balance line in mu, the log-odds threshold for majority
cooperation, and what asymmetric rates do to a neutral population.

Run:  python3 demos/mutation_effects.py
"""

import numpy as np

from introdyn import (
    PlayerParams,
    mutation_selection_balance,
    neutral_drift,
    player_cooperation_probability,
    threshold_check,
)

BETAS = (0.5, 1.0, 2.0, 3.0, 4.0)
DELTAS = (0.7, -0.3, 1.2, 0.0, -2.0)


def main():
    print("symmetric mutation interpolates linearly between selection and")
    print("coin flipping (p_C = (1-2mu)*Phi + mu):\n")
    print("  mu     p_C       balance-line")
    for mu in (0.0, 0.1, 0.2, 0.3, 0.4, 0.45):
        ps = [player_cooperation_probability(d, PlayerParams(b, mu, mu)).p
              for d, b in zip(DELTAS, BETAS)]
        line = mutation_selection_balance(DELTAS, BETAS, mu)
        print(f"  {mu:.2f}   {np.mean(ps):.6f}  {line.p_C:.6f}"
              f"   (slope {line.line.slope:+.4f})")

    print("\nwhen does a single player cooperate more often than not?")
    params = PlayerParams(beta=1.0, mu_c=0.3, mu_d=0.1)
    for delta in (-1.0, 0.0, 0.5, 0.6931471805599453, 0.7, 2.0):
        check = threshold_check(delta, params)
        p = player_cooperation_probability(delta, params).p
        marker = ">" if check.exceeds_half else "<="
        print(f"  delta={delta:+.4f}: p={p:.6f} {marker} 1/2 "
              f"(bound on beta*delta: {check.log_odds_bound:+.4f})")

    print("\nasymmetric rates bias even a payoff-blind population:")
    for mu_c, mu_d in ((0.1, 0.1), (0.3, 0.1), (0.1, 0.3), (0.0, 0.5)):
        params = PlayerParams(beta=0.0, mu_c=mu_c, mu_d=mu_d)
        print(f"  mu_c={mu_c:.1f}, mu_d={mu_d:.1f}: "
              f"resting point {neutral_drift(params):.3f}")


if __name__ == "__main__":
    main()
