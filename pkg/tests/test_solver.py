import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamgame.engine import GameConfig, play_game
from hamgame.graph import TooLarge
from hamgame.solver import (
    Solver,
    WinningSetSystem,
    bias_monotonicity_check,
    hamilton_winning_sets,
    solve,
    solve_naive,
)


def test_hamilton_system_sizes():
    assert len(hamilton_winning_sets(4).sets) == 3
    assert len(hamilton_winning_sets(5).sets) == 12
    assert hamilton_winning_sets(2).sets == ()
    with pytest.raises(TooLarge):
        hamilton_winning_sets(8)
    with pytest.raises(TooLarge):
        Solver(hamilton_winning_sets(7), 1)


def test_system_text_roundtrip():
    sys_ = WinningSetSystem(5, (frozenset({0, 1}), frozenset({2, 3, 4})))
    assert WinningSetSystem.parse(sys_.to_text()) == sys_
    with pytest.raises(ValueError):
        WinningSetSystem(2, (frozenset({3}),))


@pytest.mark.parametrize("b", range(1, 7))
def test_k4_is_breaker_win(b):
    assert solve(hamilton_winning_sets(4), b).winner == "breaker"


@pytest.mark.parametrize("b", range(1, 5))
def test_k5_is_breaker_win(b):
    assert solve(hamilton_winning_sets(5), b).winner == "breaker"


def test_two_singletons_maker_wins_at_bias_one():
    sys_ = WinningSetSystem(2, (frozenset({0}), frozenset({1})))
    assert solve(sys_, 1).winner == "maker"
    assert solve(sys_, 2).winner == "breaker"


def test_k4_matches_naive():
    assert solve_naive(hamilton_winning_sets(4), 1) is False


@st.composite
def systems(draw):
    size = draw(st.integers(1, 7))
    sets = draw(st.lists(st.frozensets(st.integers(0, size - 1), min_size=1, max_size=3), min_size=1, max_size=5))
    return WinningSetSystem(size, tuple(sets))


@settings(max_examples=150, deadline=None)
@given(sys_=systems(), b=st.integers(1, 3), first=st.sampled_from(["maker", "breaker"]))
def test_memo_solver_matches_naive(sys_, b, first):
    fast = solve(sys_, b, to_move=first).winner == "maker"
    assert fast == solve_naive(sys_, b, mover=first)


@settings(max_examples=60, deadline=None)
@given(sys_=systems(), b=st.integers(1, 3), seed=st.integers(0, 1000))
def test_move_order_does_not_change_value(sys_, b, seed):
    assert solve(sys_, b).winner == solve(sys_, b, shuffle=random.Random(seed)).winner
    a = solve(sys_, b, shuffle=random.Random(seed))
    c = solve(sys_, b, shuffle=random.Random(seed))
    assert a.principal_variation == c.principal_variation


def test_cross_check_catches_a_broken_solver():
    """A solver that forgets the empty-board rule must disagree with the naive one somewhere."""

    class Broken(Solver):
        def terminal(self, mm, bm):
            if any(s & mm == s for s in self.sets):
                return True
            if (mm | bm) == self.full:
                return True  # wrong: a full board without a Maker set is a Breaker win
            return None

    sys_ = WinningSetSystem(2, (frozenset({0, 1}),))
    s = Broken(sys_, 1)
    assert s.value(0, 0, "breaker", 1) != solve_naive(sys_, 1)


@pytest.mark.parametrize("n,b_max", [(4, 6), (5, 4)])
def test_bias_monotonicity(n, b_max):
    assert bias_monotonicity_check(hamilton_winning_sets(n), b_max)


def test_monotonicity_check_detects_a_violation():
    fake = lambda system, b: b == 2
    assert not bias_monotonicity_check(hamilton_winning_sets(4), 3, maker_wins=fake)


@pytest.mark.parametrize("n,b", [(4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3)])
def test_optimal_self_play_agrees_with_solver(n, b):
    predicted = solve(hamilton_winning_sets(n), b).winner
    res, _ = play_game(GameConfig(n=n, bias=b, maker="maker.opt", breaker="breaker.opt"))
    assert res.winner == predicted
