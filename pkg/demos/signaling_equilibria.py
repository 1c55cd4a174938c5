"""Mixed strategies never beat the best pure strategy in cooperative talk.

Three heights, two words. A pure sender splits the states into a
partition ({180,185} -> "short", {190} -> "tall"); a sender who flips a
coin at 185 produces overlapping word meanings (a cover) instead. The
coin-flipper is a genuine Nash equilibrium, yet the payoff table shows it
gains nothing over the best pure equilibrium. We verify that here, then
run the same dominance check over a batch of random games, and finish
with the question-relativity example: a strategy can be informative yet
vague about the question on the table, and a message relabeling fixes it.

Run: python3 demos/signaling_equilibria.py
"""

import numpy as np

from vaguetalk import (MixedProfile, dominance_batch, enumerate_pure_equilibria,
                       expected_payoff, is_nash, load_game, mixed_dominance_check,
                       precisify, question_precision, speaker_meaning)


def main():
    game, profiles = load_game("demos/data/heights3.json")
    print("states 180/185/190, words 'short'/'tall', payoff 1 iff the guess matches")
    pure = profiles["pure"]
    mixed = profiles["mixed"]

    for name, p in (("pure", pure), ("mixed", mixed)):
        meaning = speaker_meaning(game, p)
        cells = ", ".join(f"{msg}:{{{','.join(states)}}}" for msg, states in meaning.cells)
        print(f"  {name}: {meaning.kind:<9} {cells}")
    print()

    equilibria = enumerate_pure_equilibria(game)
    print(f"exhaustive pure enumeration: {len(equilibria)} equilibria, "
          f"best payoff {equilibria[0][1]:.4f}")
    print(f"mixed profile: Nash={is_nash(game, mixed).ok}, "
          f"payoff {expected_payoff(game, mixed):.4f}")
    report = mixed_dominance_check(game, [mixed])
    entry = report.entries[0]
    print(f"dominance verdict: {entry.verdict} "
          f"(mixed {entry.payoff:.4f} <= best pure {report.best_pure_payoff:.4f}, "
          f"support spread {entry.support_spread:.1e})")
    print()

    print("same check over 100 random cooperative games:")
    batch = dominance_batch(100, seed=7)
    print(f"  {batch.n_verified} verified mixed equilibria out of "
          f"{batch.n_candidates} candidates; "
          f"{'all dominated by pure' if batch.all_pass else 'COUNTEREXAMPLE FOUND'}")
    print()

    qgame, qprofiles = load_game("demos/data/question_game.json")
    strategy = qprofiles["vague"]
    rep = question_precision(qgame, strategy)
    print("question game: is h3 the case? cells {h3} and {h1,h2}")
    print(f"  sender sends 'm' for h1 and h3, 'mprime' for h2 -> {rep.verdict}")
    after_m = dict(rep.cell_posteriors)["m"]
    print(f"  hearing 'm' moves P({{h1,h2}}) from {rep.cell_priors[1]:.4f} "
          f"to {after_m[1]:.4f}: the answer got LESS settled")
    fixed = precisify(qgame)
    frep = question_precision(qgame, fixed)
    print(f"  relabeled strategy: cells line up with messages -> {frep.verdict}, "
          f"Nash={is_nash(qgame, fixed).ok}, "
          f"payoff {expected_payoff(qgame, fixed):.4f}")


if __name__ == "__main__":
    main()
