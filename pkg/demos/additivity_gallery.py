"""Walk a gallery of two-player games through the additivity checker and
show which ones admit the product-form stationary distribution.

Run:  python3 demos/additivity_gallery.py
"""

from introdyn import Additive, BimatrixGame, DonationGame, check_additivity

GALLERY = [
    ("gift exchange (b=1, costs 0.6 / 0.1)",
     BimatrixGame.donation(1.0, 0.6, 0.1)),
    ("coordination hunt (b=1, costs 0.6 / 0.1)",
     BimatrixGame.stag_hunt(1.0, 0.6, 0.1)),
    ("classic dilemma T=5 R=3 P=1 S=0",
     BimatrixGame.from_rpst(reward=3, punishment=1, sucker=0, temptation=5)),
    ("equal-gains dilemma T=5 R=3 P=1 S=-1",
     BimatrixGame.from_rpst(reward=3, punishment=1, sucker=-1, temptation=5)),
    ("four-player gift circle (b=3, mixed costs)",
     DonationGame(benefit=3.0, costs=[0.2, 0.5, 1.0, 1.5])),
]


def main():
    for title, game in GALLERY:
        report = check_additivity(game)
        print(title)
        for i, verdict in enumerate(report.per_player, start=1):
            if isinstance(verdict, Additive):
                print(f"  player {i}: additive, delta = {verdict.delta:+.4f}")
            else:
                print(f"  player {i}: NOT additive "
                      f"({verdict.context_a.label}: {verdict.diff_a:+.4f} vs "
                      f"{verdict.context_b.label}: {verdict.diff_b:+.4f})")
        status = "product form applies" if report.game_additive \
            else "needs the exact solver"
        print(f"  => {status}\n")


if __name__ == "__main__":
    main()
