import random
from collections import Counter

import pytest
from scipy.stats import chisquare

from hamgame.board import BREAKER, MAKER, Board
from hamgame.strategies import (
    BREAKERS,
    MAKERS,
    Stage,
    StrategyProfile,
    StrategyState,
    get_strategy,
)
from hamgame.theory import ParameterDomain


def _state(kind, n=10, bias=2, **kw):
    return StrategyState(kind, StrategyProfile.desk(n, **kw), bias)


def test_registry():
    assert {"maker.s", "maker.sprime", "maker.ham"} <= set(MAKERS)
    assert {"breaker.random", "breaker.isolator", "breaker.mindeg", "breaker.blocker"} <= set(BREAKERS)
    with pytest.raises(KeyError):
        get_strategy("maker.nope")


def test_profiles():
    p = StrategyProfile.desk(160)
    assert p.k == 10 and p.d_target == 12 and p.monitor_meaningful
    paper = StrategyProfile.paper(10**6)
    assert paper.preset == "paper" and not paper.monitor_meaningful
    with pytest.raises(ValueError):
        StrategyProfile(tie_break="random")
    with pytest.raises(ValueError):
        StrategyProfile.preset_for("lab", 10)
    with pytest.raises(ParameterDomain):
        StrategyProfile.paper(1)


def test_stage_is_monotone():
    s = _state("maker.ham")
    s.advance(Stage.BOOSTER)
    with pytest.raises(ValueError):
        s.advance(Stage.CONNECT)


def test_maker_s_takes_lowest_edge_at_min_degree_vertex():
    b = Board(5)
    b.claim((0, 1), MAKER)
    s = StrategyState("maker.s", StrategyProfile.desk(5, tie_break="index"), 1)
    assert MAKERS["maker.s"](s, b, random.Random(0)) == (0, 2)
    assert s.annotation == "stage1"


def test_breaker_tie_break_prefers_breaker_heavy_vertex():
    b = Board(6)
    b.claim_many([(0, 4), (1, 4), (2, 4)], BREAKER)
    s = StrategyState("maker.s", StrategyProfile.desk(6), 1)
    assert MAKERS["maker.s"](s, b, random.Random(0)) == (3, 4)


def test_skipping_a_blocked_vertex_is_a_fallback():
    b = Board(4)
    b.claim_many([(0, 1), (0, 2), (0, 3)], BREAKER)
    s = StrategyState("maker.s", StrategyProfile.desk(4, tie_break="index"), 1)
    e = MAKERS["maker.s"](s, b, random.Random(0))
    assert e == (1, 2)
    assert s.annotation == "stage1:fallback" and s.fallbacks["stage1"] == 1


@pytest.mark.parametrize("name", ["breaker.random", "breaker.isolator", "breaker.mindeg", "breaker.blocker"])
def test_breakers_respect_quota_and_remainder(name):
    rng = random.Random(3)
    b = Board(7)
    s = _state(name, n=7, bias=4)
    while b.unclaimed:
        out = BREAKERS[name](s, b, rng)
        assert len(out) == min(4, b.unclaimed)
        assert len(set(out)) == len(out)
        b.claim_many(out, BREAKER)
        if b.unclaimed:
            b.claim(b.lowest_unclaimed(), MAKER)


@pytest.mark.parametrize("name", ["maker.s", "maker.sprime", "maker.ham"])
def test_makers_always_return_a_free_edge(name):
    rng = random.Random(5)
    b = Board(9)
    s = _state(name, n=9, bias=1, d_target=3)
    while b.unclaimed:
        e = MAKERS[name](s, b, rng)
        assert b.owner(e).value == "unclaimed"
        b.claim(e, MAKER)
        if b.unclaimed:
            b.claim(b.sample_unclaimed(1, rng)[0], BREAKER)


def test_isolator_piles_on_one_vertex():
    b = Board(8)
    s = _state("breaker.isolator", n=8, bias=3)
    out = BREAKERS["breaker.isolator"](s, b, random.Random(0))
    assert out == [(0, 1), (0, 2), (0, 3)]


def test_sprime_is_conditionally_uniform():
    """Chi-square over 12000 draws at two fixed boards; uniformity must not be rejected at 1e-3."""
    for setup in (lambda b: None, lambda b: b.claim_many([(0, 3), (0, 5), (1, 2)], BREAKER)):
        board = Board(9)
        setup(board)
        profile = StrategyProfile.desk(9, tie_break="index")
        rng = random.Random(2024)
        # all Maker degrees are 0, so the index tie-break targets vertex 0
        support = sorted(board.unclaimed_incident(0))
        counts = Counter()
        draws = 12_000
        for _ in range(draws):
            e = MAKERS["maker.sprime"](StrategyState("maker.sprime", profile, 1), board, rng)
            assert e in support
            counts[e] += 1
        observed = [counts[e] for e in support]
        p = chisquare(observed).pvalue
        assert p > 1e-3, (observed, p)
