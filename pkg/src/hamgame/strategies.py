"""Maker and Breaker strategies.

Every strategy is a function ``(state, board, rng)``. Maker strategies return
one edge, Breaker strategies return ``min(b, unclaimed)`` edges where
``b = state.bias``. Free choices ("an arbitrary edge", tie-breaks) always go
to the lowest index so runs are reproducible.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .board import BREAKER, MAKER, Board, Edge, make_edge
from .graph import components, rotation_boosters
from . import theory


class BoardFull(Exception):
    pass


class Stage(str, enum.Enum):
    MIN_DEGREE = "min_degree"
    CONNECT = "connect"
    BOOSTER = "booster"
    DONE = "done"


STAGE_TAG = {Stage.MIN_DEGREE: "stage1", Stage.CONNECT: "stage2", Stage.BOOSTER: "stage3"}


@dataclass(frozen=True)
class StrategyProfile:
    d_target: int = 12
    k: float = 1.0
    delta: float = 0.5
    delta0: float | None = None
    epsilon: float | None = None
    preset: str = "desk"
    booster_effort: int = 6
    # how ties among minimum-degree vertices are broken: "breaker" prefers the
    # vertex where Breaker holds the most edges, "index" the lowest index
    tie_break: str = "breaker"

    def __post_init__(self):
        if self.d_target < 1:
            raise ValueError("d_target must be at least 1")
        if self.tie_break not in ("breaker", "index"):
            raise ValueError(f"unknown tie_break {self.tie_break!r}")

    @classmethod
    def desk(cls, n: int, delta: float = 0.5, k: float | None = None, d_target: int = 12, **kw) -> StrategyProfile:
        return cls(d_target=d_target, k=n / 16 if k is None else k, delta=delta, preset="desk", **kw)

    @classmethod
    def paper(cls, n: int, **kw) -> StrategyProfile:
        c = theory.constants(n)
        return cls(d_target=12, k=c.k0, delta=c.delta, delta0=c.delta0, epsilon=c.epsilon, preset="paper", **kw)

    @classmethod
    def preset_for(cls, name: str, n: int, **kw) -> StrategyProfile:
        if name == "paper":
            return cls.paper(n, **kw)
        if name == "desk":
            return cls.desk(n, **kw)
        raise ValueError(f"unknown profile preset {name!r}")

    @property
    def monitor_meaningful(self) -> bool:
        return 0 < self.delta < 1


@dataclass
class StrategyState:
    kind: str
    profile: StrategyProfile = field(default_factory=StrategyProfile)
    bias: int = 1
    stage: Stage = Stage.MIN_DEGREE
    memo: dict = field(default_factory=dict)
    fallbacks: Counter = field(default_factory=Counter)
    annotation: str | None = None

    def advance(self, stage: Stage) -> None:
        order = list(Stage)
        if order.index(stage) < order.index(self.stage):
            raise ValueError(f"stage cannot move back from {self.stage} to {stage}")
        self.stage = stage

    def _tag(self, tag: str, fallback: bool = False) -> None:
        if fallback:
            self.fallbacks[tag] += 1
            tag += ":fallback"
        self.annotation = tag


MakerFn = Callable[[StrategyState, Board, random.Random], Edge]
BreakerFn = Callable[[StrategyState, Board, random.Random], list]

MAKERS: dict[str, MakerFn] = {}
BREAKERS: dict[str, BreakerFn] = {}


def register(name: str):
    def deco(fn):
        (MAKERS if name.startswith("maker.") else BREAKERS)[name] = fn
        return fn

    return deco


def get_strategy(name: str):
    if name in MAKERS:
        return MAKERS[name]
    if name in BREAKERS:
        return BREAKERS[name]
    raise KeyError(f"unknown strategy {name!r}; known: {sorted(MAKERS) + sorted(BREAKERS)}")


# --- Maker ------------------------------------------------------------------


def min_degree_reached(board: Board, d: int) -> bool:
    return all(len(a) >= d for a in board.adj[MAKER])


def _lowest_or_full(board: Board) -> Edge:
    e = board.lowest_unclaimed()
    if e is None:
        raise BoardFull
    return e


def _min_degree_move(state: StrategyState, board: Board, rng: random.Random, randomized: bool) -> Edge:
    d = state.profile.d_target
    adj = board.adj[MAKER]
    eligible = [v for v in range(board.n) if len(adj[v]) < d]
    if not eligible:
        state._tag("post")
        return _lowest_or_full(board)
    if state.profile.tie_break == "index":
        ordered = sorted(eligible, key=lambda v: (len(adj[v]), v))
    else:
        badj = board.adj[BREAKER]
        ordered = sorted(eligible, key=lambda v: (len(adj[v]), -len(badj[v]), v))
    for rank, v in enumerate(ordered):
        free = board.free[v]
        if not free:
            continue
        if randomized:
            w = sorted(free)[rng.randrange(len(free))]
        else:
            w = min(free)
        state._tag("stage1", fallback=rank > 0)
        return make_edge(v, w)
    state._tag("stage1", fallback=True)
    return _lowest_or_full(board)


@register("maker.s")
def maker_S(state: StrategyState, board: Board, rng: random.Random) -> Edge:
    """Min-degree vertex, lowest-indexed unclaimed edge at it."""
    return _min_degree_move(state, board, rng, randomized=False)


@register("maker.sprime")
def maker_S_prime(state: StrategyState, board: Board, rng: random.Random) -> Edge:
    """Min-degree vertex, uniformly random unclaimed edge at it."""
    return _min_degree_move(state, board, rng, randomized=True)


def _cross_edge(board: Board, comps: list[list[int]]) -> Edge | None:
    label = [0] * board.n
    for i, comp in enumerate(comps):
        for v in comp:
            label[v] = i
    for u in range(board.n):
        for w in sorted(board.free[u]):
            if w > u and label[w] != label[u]:
                return (u, w)
    return None


@register("maker.ham")
def maker_hamiltonicity(state: StrategyState, board: Board, rng: random.Random) -> Edge:
    """Three stages: min degree via S', join components, claim boosters."""
    if state.stage is Stage.MIN_DEGREE and min_degree_reached(board, state.profile.d_target):
        state.advance(Stage.CONNECT)
    if state.stage is Stage.MIN_DEGREE:
        return _min_degree_move(state, board, rng, randomized=True)

    G = board.player_graph(MAKER)
    if state.stage is Stage.CONNECT:
        comps = components(G)
        if len(comps) == 1:
            state.advance(Stage.BOOSTER)
        else:
            e = _cross_edge(board, comps)
            if e is not None:
                state._tag("stage2")
                return e
            # every edge between components is Breaker's
            state._tag("stage2", fallback=True)
            return _lowest_or_full(board)

    found = rotation_boosters(G, rng, effort=state.profile.booster_effort, start_path=state.memo.get("path"))
    state.memo["path"] = list(found.path)
    open_boosters = sorted(e for e in found.pairs if e[1] in board.free[e[0]])
    if open_boosters:
        state._tag("stage3")
        return open_boosters[0]
    state._tag("stage3", fallback=True)
    if found.path:
        ends = {found.path[0], found.path[-1]}
        cand = [make_edge(x, w) for x in ends for w in board.free[x]]
        if cand:
            return min(cand)
    return _lowest_or_full(board)


# --- Breaker ----------------------------------------------------------------


def _fill_at(board: Board, v: int, out: list, chosen: set, b: int) -> None:
    for w in sorted(board.free[v]):
        if len(out) >= b:
            return
        e = make_edge(v, w)
        if e not in chosen:
            chosen.add(e)
            out.append(e)


@register("breaker.isolator")
def breaker_isolator(state: StrategyState, board: Board, rng: random.Random) -> list[Edge]:
    """Pile edges onto the Maker-untouched vertex Breaker is closest to isolating.

    Ranking is (Maker degree, -Breaker degree, index); while some vertex has
    Maker degree 0 this is exactly the isolation target, otherwise it falls
    back to the vertex with the smallest Maker degree.
    """
    b = state.bias
    md, bd = board.adj[MAKER], board.adj[BREAKER]
    ranking = sorted((v for v in range(board.n) if board.free[v]), key=lambda v: (len(md[v]), -len(bd[v]), v))
    out: list[Edge] = []
    chosen: set[Edge] = set()
    for v in ranking:
        if len(out) >= b:
            break
        _fill_at(board, v, out, chosen, b)
    return out


def _min_degree_attack(board: Board, b: int, out: list, chosen: set) -> list[Edge]:
    md = board.adj[MAKER]
    free = board.free
    while len(out) < b:
        best = None
        best_key = None
        for v in range(board.n):
            if not free[v]:
                continue
            left = len(free[v]) - sum(1 for e in chosen if v in e)
            if left <= 0:
                continue
            key = (len(md[v]), -left, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        if best is None:
            break
        _fill_at(board, best, out, chosen, b)
    return out


@register("breaker.mindeg")
def breaker_min_degree_attacker(state: StrategyState, board: Board, rng: random.Random) -> list[Edge]:
    """Claim at the vertex with fewest Maker edges and most unclaimed edges."""
    return _min_degree_attack(board, state.bias, [], set())


@register("breaker.random")
def breaker_random(state: StrategyState, board: Board, rng: random.Random) -> list[Edge]:
    return board.sample_unclaimed(state.bias, rng)


@register("breaker.blocker")
def breaker_booster_blocker(state: StrategyState, board: Board, rng: random.Random) -> list[Edge]:
    """Take the unclaimed boosters of Maker's graph that rotations expose, then attack degrees."""
    b = state.bias
    G = board.player_graph(MAKER)
    found = rotation_boosters(G, rng, effort=state.profile.booster_effort, start_path=state.memo.get("path"))
    state.memo["path"] = list(found.path)
    out: list[Edge] = []
    chosen: set[Edge] = set()
    for e in sorted(found.pairs):
        if len(out) >= b:
            break
        if e[1] in board.free[e[0]]:
            chosen.add(e)
            out.append(e)
    return _min_degree_attack(board, b, out, chosen)
