"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear in
the terminal summary. Criterion 7 plays 400 games at n=200 and dominates the
runtime (about four minutes on one core).
"""

import math
import random
import time
from collections import Counter

import pytest
from scipy.stats import chisquare

from conftest import ACCEPTANCE_LINES
from hamgame.board import BREAKER, MAKER, Board
from hamgame.engine import GameConfig, play_game, replay_verify
from hamgame.experiment import ExperimentConfig, run_experiment
from hamgame.properties import run_property_suite
from hamgame.solver import bias_monotonicity_check, hamilton_winning_sets, solve
from hamgame.strategies import MAKERS, StrategyProfile, StrategyState
from hamgame.theory import EPSILON_ONE_LN_N, constants, failure_bound, g_term, asymptotic_bias
from oracles import theory_oracle as oracle

ADVERSARIES = ("breaker.random", "breaker.isolator", "breaker.mindeg", "breaker.blocker")
N7, MASTER_SEED, GAMES = 200, 0, 100


def report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_c01_asymptotic_bias_not_reproducible():
    c = constants(ln_n=EPSILON_ONE_LN_N)
    largest = 1.7e308
    ok = (
        c.epsilon == pytest.approx(1.0)
        and constants(ln_n=EPSILON_ONE_LN_N - 1).epsilon > 1
        and all(asymptotic_bias(n) <= 0 for n in (1e3, 1e6, 1e9, 1e100, largest))
    )
    report(1, ok, f"epsilon=1 at ln n={EPSILON_ONE_LN_N:.0f}; stated bias <= 0 for every double n (ln n <= {math.log(largest):.1f})")


def test_c02_lemma2_suite():
    rep = run_property_suite("lemma2", 1000, seed=0)
    ok = rep.passed and rep.samples >= 1000 and rep.seconds < 60
    report(2, ok, rep.summary())


def test_c03_lemma1_suite():
    rep = run_property_suite("lemma1", 200, seed=0)
    ok = rep.passed and rep.checked >= 200 and rep.seconds < 300
    report(3, ok, rep.summary())


def test_c04_booster_soundness():
    rep = run_property_suite("booster-soundness", 500, seed=0)
    ok = rep.passed and rep.samples >= 500
    report(4, ok, rep.summary())


def _rules_ok(cfg, tr) -> bool:
    board = Board(cfg.n)
    for i, rec in enumerate(tr):
        if rec.mover is not (BREAKER if i % 2 == 0 else MAKER):
            return False
        want = min(cfg.bias, board.unclaimed) if rec.mover is BREAKER else 1
        if len(rec.edges) != want:
            return False
        board.claim_many(rec.edges, rec.mover)
    return True


def test_c05_rules_fidelity():
    rep = run_property_suite("replay", 50, seed=0)
    rng = random.Random(5)
    rules = replays = 0
    for i in range(60):
        cfg = GameConfig(n=rng.randint(4, 24), bias=rng.randint(1, 40), breaker=rng.choice(ADVERSARIES), seed=i)
        res, tr = play_game(cfg)
        rules += _rules_ok(cfg, tr)
        replays += replay_verify(tr, cfg) == res
    agree = []
    for n in (4, 5):
        for b in (1, 2, 3):
            predicted = solve(hamilton_winning_sets(n), b).winner
            res, tr = play_game(GameConfig(n=n, bias=b, maker="maker.opt", breaker="breaker.opt"))
            agree.append(res.winner == predicted and _rules_ok(GameConfig(n=n, bias=b), tr))
    ok = rep.passed and rules == 60 and replays == 60 and all(agree)
    report(5, ok, f"{rep.summary()}; rules {rules}/60, replays {replays}/60; solver agreement {sum(agree)}/6")


def test_c06_bias_monotonicity():
    ok4 = bias_monotonicity_check(hamilton_winning_sets(4), 6)
    ok5 = bias_monotonicity_check(hamilton_winning_sets(5), 4)
    report(6, ok4 and ok5, f"K4 bMax=6 {ok4}, K5 bMax=4 {ok5}")


@pytest.fixture(scope="module")
def staged_runs():
    t0 = time.perf_counter()
    runs = {}
    for breaker in ADVERSARIES:
        cfg = ExperimentConfig(n=N7, bias_coeff=0.3, maker="maker.ham", breaker=breaker, games=GAMES, seed=MASTER_SEED)
        runs[breaker] = run_experiment(cfg)
    return runs, time.perf_counter() - t0


def test_c07_staged_strategy_performance(staged_runs):
    runs, seconds = staged_runs
    parts = []
    ok = seconds < 600
    for breaker, (row, results, _) in runs.items():
        wins = [r for r in results if r.winner == "maker" and r.maker_moves <= 14 * N7]
        fb = sum(r.fallbacks.get("stage1", 0) for r in wins)
        ok &= row.bias == 11 and len(wins) >= 90 and fb == 0
        parts.append(f"{breaker.split('.')[1]} {len(wins)}/{GAMES} fb1={fb}")
    report(7, ok, f"n={N7} b=11 master seed {MASTER_SEED}: " + ", ".join(parts) + f"; {seconds:.0f}s")


def test_c08_stage_accounting(staged_runs):
    runs, _ = staged_runs
    worst = [0, 0, 0]
    bad = 0
    for _, results, _ in runs.values():
        for r in results:
            if r.winner != "maker":
                continue
            s = r.stage_moves
            worst = [max(a, b) for a, b in zip(worst, s)]
            bad += not (s[0] <= 12 * N7 and s[1] <= N7 and s[2] <= N7)
    report(8, bad == 0, f"max stage moves {tuple(worst)} vs caps ({12 * N7}, {N7}, {N7}); violations {bad}")


def test_c09_theory_numerics():
    errs = []
    grid = [(i, n, d) for n in (1000, 10**4, 10**5) for d in (0.25, 0.5, 0.9) for i in (1, 5, 17, n // 128)]
    for i, n, d in grid:
        errs.append(abs(g_term(i, n, d) - float(oracle.g_term(i, n, d))) / abs(float(oracle.g_term(i, n, d))))
    vals = []
    for n in (10**3, 10**4, 10**5, 10**6):
        got = failure_bound(n, 0.5, n // 128)
        ref = float(oracle.failure_bound(n, 0.5, n // 128))
        errs.append(abs(got - ref) / abs(ref))
        vals.append(got)
    dec = all(a > b for a, b in zip(vals, vals[1:]))
    worst = max(errs)
    report(9, worst < 1e-9 and dec, f"max rel err {worst:.1e} over {len(errs)} values; bound strictly decreasing {dec}")


def test_c10_sprime_uniformity():
    board = Board(12)
    board.claim_many([(0, 4), (0, 7), (2, 5)], BREAKER)
    board.claim((3, 6), MAKER)
    profile = StrategyProfile.desk(12, tie_break="index")
    support = board.unclaimed_incident(0)
    rng = random.Random(10)
    counts = Counter(
        MAKERS["maker.sprime"](StrategyState("maker.sprime", profile, 1), board, rng) for _ in range(20_000)
    )
    inside = set(counts) <= set(support)
    p = chisquare([counts[e] for e in support]).pvalue
    report(10, inside and p > 1e-3, f"20000 draws over {len(support)} edges at vertex 0, chi-square p={p:.3f}")
