"""Referee for the (1:b) Hamiltonicity game on K_n.

Breaker moves first and claims ``b`` edges, Maker answers with one; whoever
faces fewer unclaimed edges than their quota takes all that remain. Maker
wins on a verified Hamilton cycle in their graph. Everything in a
:class:`GameResult` is recomputable from the transcript, which is what
:func:`replay_verify` does.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import asdict, dataclass, field

from .board import BREAKER, MAKER, Board, BoardError, MoveRecord
from .graph import EXACT_CAP, HamiltonDetector, verify_hamilton_cycle
from .strategies import BREAKERS, MAKERS, StrategyProfile, StrategyState


class EngineFault(RuntimeError):
    """A strategy returned an illegal move."""


class IllegalTranscript(ValueError):
    def __init__(self, index: int, msg: str):
        super().__init__(f"record {index}: {msg}")
        self.index = index


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from any sequence of printable parts."""
    h = hashlib.blake2b(":".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") >> 1


def stream(seed: int, name: str) -> random.Random:
    return random.Random(derive_seed(seed, name))


@dataclass
class GameConfig:
    n: int
    bias: int
    maker: str = "maker.ham"
    breaker: str = "breaker.random"
    profile: StrategyProfile | None = None
    seed: int = 0
    move_cap: int | None = None
    monitor: bool = True
    exact_cap: int = EXACT_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.bias < 1:
            raise ValueError("bias must be at least 1")
        if self.profile is None:
            self.profile = StrategyProfile.desk(self.n)
        if self.move_cap is None:
            self.move_cap = 14 * self.n
        if self.move_cap < 1:
            raise ValueError("move cap must be at least 1")
        if self.maker not in MAKERS:
            raise ValueError(f"unknown maker strategy {self.maker!r}")
        if self.breaker not in BREAKERS:
            raise ValueError(f"unknown breaker strategy {self.breaker!r}")


@dataclass(frozen=True)
class MonitorEvent:
    vertex: int
    breaker_degree: int
    maker_degree: int
    round: int
    violated: bool


@dataclass
class GameResult:
    winner: str
    maker_moves: int
    total_rounds: int
    stage1_end: int
    stage2_end: int
    monitor_events: list[MonitorEvent]
    within_cap: bool
    seed: int
    end_reason: str
    fallbacks: dict[str, int] = field(default_factory=dict)
    cycle: list[int] | None = None

    @property
    def stage_moves(self) -> tuple[int, int, int]:
        return self.stage1_end, self.stage2_end - self.stage1_end, self.maker_moves - self.stage2_end

    @property
    def monitor_violations(self) -> int:
        return sum(e.violated for e in self.monitor_events)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> GameResult:
        d = dict(d)
        d["monitor_events"] = [MonitorEvent(**e) for e in d["monitor_events"]]
        return cls(**d)


def monitor_threshold(n: int, profile: StrategyProfile) -> int:
    return math.ceil((1 - profile.delta) * n)


def gs_monitor(board: Board, profile: StrategyProfile) -> list[MonitorEvent]:
    """Maker's degree at each vertex when Breaker's degree there first hits ceil((1-delta)n).

    A threshold <= 0 (delta >= 1, as with the "paper" preset at any feasible n)
    fires for every vertex before the first move; that check is vacuous.
    """
    n = board.n
    threshold = monitor_threshold(n, profile)
    d = profile.d_target
    events = []
    fired = [False] * n
    if threshold <= 0:
        for v in range(n):
            events.append(MonitorEvent(v, 0, 0, 1, 0 < d))
            fired[v] = True
        return events
    bdeg = [0] * n
    mdeg = [0] * n
    for rec in board.transcript:
        for u, v in rec.edges:
            for x in (u, v):
                if rec.mover is MAKER:
                    mdeg[x] += 1
                else:
                    bdeg[x] += 1
                    if not fired[x] and bdeg[x] >= threshold:
                        fired[x] = True
                        events.append(MonitorEvent(x, bdeg[x], mdeg[x], rec.round, mdeg[x] < d))
    return events


def _stage_counts(records: list[MoveRecord]) -> tuple[int, int, dict[str, int]]:
    counts = {"stage1": 0, "stage2": 0}
    fallbacks: dict[str, int] = {}
    for rec in records:
        if rec.mover is not MAKER:
            continue
        tag = rec.annotation or ""
        stage, _, flag = tag.partition(":")
        if stage in counts:
            counts[stage] += 1
        if flag == "fallback":
            fallbacks[stage] = fallbacks.get(stage, 0) + 1
    s1 = counts["stage1"]
    return s1, s1 + counts["stage2"], fallbacks


def _result(config: GameConfig, board: Board, end_reason: str, cycle, maker_moves: int) -> GameResult:
    records = board.transcript
    s1, s2, fallbacks = _stage_counts(records)
    rounds = records[-1].round if records else 0
    return GameResult(
        winner="maker" if cycle is not None else "breaker",
        maker_moves=maker_moves,
        total_rounds=rounds,
        stage1_end=s1,
        stage2_end=s2,
        monitor_events=gs_monitor(board, config.profile) if config.monitor else [],
        within_cap=end_reason != "move_cap",
        seed=config.seed,
        end_reason=end_reason,
        fallbacks=fallbacks,
        cycle=list(cycle) if cycle is not None else None,
    )


class _Referee:
    """Shared bookkeeping for live play and replay: legality, win detection, end rules."""

    def __init__(self, config: GameConfig):
        self.config = config
        self.board = Board(config.n)
        self.detector = HamiltonDetector(config.n, stream(config.seed, "detector"), exact_cap=config.exact_cap)
        self.maker_moves = 0
        self.round = 0
        self.cycle = None
        self.end_reason = None

    def breaker_quota(self) -> int:
        return min(self.config.bias, self.board.unclaimed)

    def start_round(self) -> bool:
        if self.board.unclaimed == 0:
            self.end_reason = "board_exhausted"
            return False
        self.round += 1
        return True

    def breaker(self, edges, annotation=None) -> None:
        quota = self.breaker_quota()
        if len(edges) != quota:
            raise EngineFault(f"Breaker claimed {len(edges)} edges, quota is {quota}")
        self.board.claim_many(edges, BREAKER, self.round, annotation)

    def maker_may_move(self) -> bool:
        if self.board.unclaimed == 0:
            self.end_reason = "board_exhausted"
            return False
        if self.maker_moves >= self.config.move_cap:
            self.end_reason = "move_cap"
            return False
        return True

    def maker(self, edges, annotation=None) -> bool:
        if len(edges) != 1:
            raise EngineFault(f"Maker claimed {len(edges)} edges, must claim exactly 1")
        self.board.claim_many(edges, MAKER, self.round, annotation)
        self.maker_moves += 1
        u, v = self.board.transcript[-1].edges[0]
        self.detector.add_edge(u, v)
        cycle = None
        if self.detector.low == 0 and self.detector.parts == 1:
            cycle = self.detector.check(self.board.player_graph(MAKER))
        if cycle is not None:
            self.cycle = cycle
            self.end_reason = "hamiltonian"
            return True
        return False

    def result(self) -> GameResult:
        return _result(self.config, self.board, self.end_reason, self.cycle, self.maker_moves)


def play_game(config: GameConfig) -> tuple[GameResult, list[MoveRecord]]:
    ref = _Referee(config)
    profile = config.profile
    mstate = StrategyState(config.maker, profile, config.bias)
    bstate = StrategyState(config.breaker, profile, config.bias)
    maker_fn, breaker_fn = MAKERS[config.maker], BREAKERS[config.breaker]
    mrng, brng = stream(config.seed, "maker"), stream(config.seed, "breaker")
    while ref.start_round():
        edges = breaker_fn(bstate, ref.board, brng)
        try:
            ref.breaker(edges, bstate.annotation)
        except BoardError as exc:
            raise EngineFault(f"Breaker strategy {config.breaker}: {exc!r}") from exc
        if not ref.maker_may_move():
            break
        mstate.annotation = None
        edge = maker_fn(mstate, ref.board, mrng)
        try:
            if ref.maker([edge], mstate.annotation):
                break
        except BoardError as exc:
            raise EngineFault(f"Maker strategy {config.maker}: {exc!r}") from exc
    return ref.result(), list(ref.board.transcript)


def replay_verify(transcript: list[MoveRecord], config: GameConfig) -> GameResult:
    """Re-referee a transcript from scratch and return the recomputed result."""
    ref = _Referee(config)
    over = False
    for i, rec in enumerate(transcript):
        if over:
            raise IllegalTranscript(i, "record after the game ended")
        expect = BREAKER if i % 2 == 0 else MAKER
        if rec.mover is not expect:
            raise IllegalTranscript(i, f"expected a {expect.value} record")
        if rec.round != i // 2 + 1:
            raise IllegalTranscript(i, f"round {rec.round}, expected {i // 2 + 1}")
        try:
            if expect is BREAKER:
                if not ref.start_round():
                    raise IllegalTranscript(i, "board already exhausted")
                ref.breaker(rec.edges, rec.annotation)
                over = not ref.maker_may_move()
            else:
                over = ref.maker(rec.edges, rec.annotation)
        except (EngineFault, BoardError) as exc:
            raise IllegalTranscript(i, str(exc)) from exc
    if not over:
        # the game must have stopped for a reason the referee agrees with
        if ref.board.unclaimed == 0:
            ref.end_reason = "board_exhausted"
        else:
            raise IllegalTranscript(len(transcript), "transcript ends while the game is still running")
    result = ref.result()
    if result.cycle is not None:
        if not verify_hamilton_cycle(ref.board.player_graph(MAKER), result.cycle):  # pragma: no cover
            raise IllegalTranscript(len(transcript), "declared Hamilton cycle is not in Maker's graph")
    return result


def is_maker_win_sound(result: GameResult, transcript: list[MoveRecord], n: int) -> bool:
    """Independent check that a declared win's cycle uses only Maker edges."""
    if result.winner != "maker":
        return True
    maker_edges = {e for r in transcript if r.mover is MAKER for e in r.edges}
    c = result.cycle or []
    if sorted(c) != list(range(n)):
        return False
    return all(tuple(sorted((c[i], c[(i + 1) % n]))) in maker_edges for i in range(n))
