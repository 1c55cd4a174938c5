"""Acceptance suite: nine headline checks, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the verdict lines.
Every check carries its stated numeric tolerance and a wall-clock budget;
a budget overrun fails the check even when the numbers agree.
"""

import math
import time

import numpy as np

from vaguetalk import (Around, Between, Dist, Game, IndependentPrior, TALL,
                       around_closed_form, attendance_scenario, best_index,
                       check_fixed_point, closed_form_posterior,
                       concentration_pairs_ok, denotation, dominance_batch,
                       is_nash, iterate, kl_divergence, literal_update,
                       precise_alternatives, precisify, pure_profile,
                       question_precision, ratio_inequality_pairs_ok,
                       scenario_tall_gaussian, scenario_tall_uniform,
                       tall_closed_form, uniform, utility_table,
                       vague_alternatives)

GRID = np.arange(0.0, 81.0, 10.0)
P_O = (0.0, 0.01, 0.01, 0.16, 0.64, 0.16, 0.01, 0.01, 0.0)
TENT = [0.04, 0.08, 0.12, 0.16, 0.20, 0.16, 0.12, 0.08, 0.04]


def table_prior():
    return IndependentPrior(
        uniform(GRID),
        {"around": uniform(np.arange(0.0, 41.0, 10.0))},
    )


def verdict(n: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def enumerate_joint(x_prior, t_prior, m):
    weights = []
    for x, px in zip(x_prior.support, x_prior.probs):
        total = 0.0
        for t, pt in zip(t_prior.support, t_prior.probs):
            if denotation(m, float(x), float(t)):
                total += px * pt
        weights.append(total)
    z = sum(weights)
    return [w / z for w in weights]


def test_criterion_1_posterior_table():
    t0 = time.perf_counter()
    prior = table_prior()
    between = literal_update(prior, Between(10.0, 70.0))
    want_between = np.array([0.0] + [1.0 / 7.0] * 7 + [0.0])
    ok_between = float(np.max(np.abs(between.probs - want_between))) <= 1e-12
    closed = closed_form_posterior(prior, Around(40.0))
    ok_closed = closed.probs.tolist() == TENT  # exact decimal match
    brute = literal_update(prior, Around(40.0))
    ok_brute = float(np.max(np.abs(brute.probs - np.array(TENT)))) <= 1e-12
    elapsed = time.perf_counter() - t0
    verdict(1, "posterior table reproduced",
            ok_between and ok_closed and ok_brute and elapsed < 1.0,
            f"between<=1e-12, tent exact, brute<=1e-12, {elapsed:.3f}s")


def test_criterion_2_kl_figures():
    t0 = time.perf_counter()
    prior = table_prior()
    p_o = Dist(GRID, P_O)
    kl_between = kl_divergence(p_o, literal_update(prior, Between(10.0, 70.0)))
    kl_around = kl_divergence(p_o, closed_form_posterior(prior, Around(40.0)))
    ok = (abs(kl_between - 0.89) <= 0.005 and abs(kl_around - 0.65) <= 0.005
          and round(kl_between, 2) == 0.89 and round(kl_around, 2) == 0.65)
    elapsed = time.perf_counter() - t0
    verdict(2, "divergence pair 0.89 / 0.65 (natural log)",
            ok and elapsed < 1.0,
            f"got {kl_between:.4f} / {kl_around:.4f}, {elapsed:.3f}s")


def test_criterion_3_strict_win():
    t0 = time.perf_counter()
    precise = precise_alternatives(GRID)
    arounds = vague_alternatives(GRID, "around")
    menu = precise + arounds
    assert len(precise) == 45 and len(arounds) == 9
    sc = attendance_scenario("bruteforce")
    o = sc.observation("o1")
    u = utility_table(o, menu, sc.interpreter())
    target = menu.index(Around(40.0))
    others = np.delete(u, target)
    ok = bool(np.all(u[target] > others))  # strict, all 53 rivals
    ok = ok and best_index(o, menu, sc.interpreter()) == target
    elapsed = time.perf_counter() - t0
    margin = float(u[target] - others[np.isfinite(others)].max())
    verdict(3, "vague message strictly beats all 53 alternatives",
            ok and elapsed < 1.0, f"margin {margin:.4f}, {elapsed:.3f}s")


def test_criterion_4_closed_forms_vs_enumeration():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(13):
        around_grid = np.arange(2 * n + 1, dtype=float)
        oracle = enumerate_joint(uniform(around_grid),
                                 uniform(np.arange(n + 1, dtype=float)),
                                 Around(float(n)))
        worst = max(worst, float(np.max(np.abs(
            around_closed_form(n).probs - oracle))))
        tall_grid = np.arange(n + 1, dtype=float)
        oracle = enumerate_joint(uniform(tall_grid), uniform(tall_grid), TALL)
        worst = max(worst, float(np.max(np.abs(
            tall_closed_form(n).probs - oracle))))
    elapsed = time.perf_counter() - t0
    verdict(4, "closed forms match joint enumeration for n <= 12",
            worst <= 1e-12 and elapsed < 5.0,
            f"max err {worst:.2e}, {elapsed:.3f}s")


def test_criterion_5_ratio_inequality_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260815)
    failures = 0
    for trial in range(1000):
        n = int(rng.integers(3, 14))
        grid = np.arange(n, dtype=float)
        probs = rng.uniform(0.01, 1.0, n)
        x = Dist(grid, probs / probs.sum())
        prior = IndependentPrior(x, {"threshold": uniform(grid)})
        post = literal_update(prior, TALL)
        if not ratio_inequality_pairs_ok(x, post):
            failures += 1
    for trial in range(1000):
        half = int(rng.integers(1, 7))
        n = 2 * half + 1
        grid = np.arange(n, dtype=float)
        probs = rng.uniform(0.01, 1.0, n)
        x = Dist(grid, probs / probs.sum())
        t = uniform(np.arange(half + 1, dtype=float))
        prior = IndependentPrior(x, {"around": t})
        post = literal_update(prior, Around(float(half)))
        if not concentration_pairs_ok(x, post, half):
            failures += 1
    elapsed = time.perf_counter() - t0
    verdict(5, "ratio and concentration inequalities on 1000+1000 random priors",
            failures == 0 and elapsed < 30.0,
            f"{failures} failures, {elapsed:.1f}s")


def test_criterion_6_mixed_dominance_batch():
    t0 = time.perf_counter()
    batch = dominance_batch(500, seed=0)
    elapsed = time.perf_counter() - t0
    ok = batch.all_pass and batch.n_verified > 0 and batch.n_games == 500
    verdict(6, "no verified mixed equilibrium beats pure over 500 games",
            ok and elapsed < 300.0,
            f"{batch.n_verified} verified of {batch.n_candidates} candidates, "
            f"{elapsed:.1f}s")


def test_criterion_7_question_example():
    t0 = time.perf_counter()
    g = Game(
        states=("h1", "h2", "h3"),
        prior=[1 / 3, 1 / 3, 1 / 3],
        messages=("m", "mprime"),
        actions=("act_h3", "act_h12"),
        payoff=[[0.0, 1.0], [0.0, 1.0], [1.0, 0.0]],
        question=((2,), (0, 1)),
    )
    crossing = pure_profile(g, [0, 1, 0], [0, 1])
    rep = question_precision(g, crossing)
    after_m = dict(rep.cell_posteriors)["m"]
    ok = (rep.verdict == "VagueWrtQuestion"
          and rep.cell_priors[1] == 2 / 3      # exact
          and after_m == (0.5, 0.5))           # exact
    fixed = precisify(g)
    ok = ok and fixed.is_pure and is_nash(g, fixed).ok \
        and question_precision(g, fixed).verdict == "Precise"
    elapsed = time.perf_counter() - t0
    verdict(7, "question example: 2/3 -> 1/2 exactly, then precisified",
            ok and elapsed < 1.0, f"{elapsed:.3f}s")


def test_criterion_8_recursion_fixed_point():
    sc = attendance_scenario()
    trace = iterate(sc.prior, sc.menu, sc.observations, sc.weights,
                    mode="hardmax", max_levels=20, tol=1e-9)
    ok = trace.converged and len(trace.levels) - 1 <= 20
    S, L = trace.final
    rep = check_fixed_point(S, L, sc.prior, sc.menu, sc.observations,
                            sc.weights, tol=1e-9)
    ok = ok and rep.speaker_residual < 1e-9 and rep.listener_residual < 1e-9
    ok = ok and S.is_pure
    sent = sc.menu[S.message_index("o1")]
    ok = ok and sent.vague
    verdict(8, "hard-max recursion: pure vague-sending fixed point",
            ok, f"level {trace.fixed_point_level}, sends '{sent}', "
                f"residuals {rep.speaker_residual:.1e}/{rep.listener_residual:.1e}")


def test_criterion_9_curve_properties():
    t0 = time.perf_counter()
    uniform_rep = scenario_tall_uniform()
    gauss_rep = scenario_tall_gaussian()
    ok = True
    # every emitted posterior curve is a genuine distribution
    for rep in (uniform_rep, gauss_rep):
        for m in rep["messages"]:
            probs = np.array(m["posterior"])
            ok = ok and bool(np.all(probs >= 0))
            ok = ok and abs(float(probs.sum()) - 1.0) <= 1e-12
    # uniform-prior threshold posterior is exactly linear in the index
    ok = ok and uniform_rep["linear_form_max_diff"] == 0.0
    # the Gaussian-prior posterior tilts odds upward at every grid pair
    ok = ok and gauss_rep["ratio_inequality_ok"] is True
    elapsed = time.perf_counter() - t0
    verdict(9, "posterior curves: normalized, exactly linear, ratio-tilted",
            ok and elapsed < 5.0, f"{elapsed:.3f}s")
