"""Batch experiments: many seeded games, per-game JSONL, an aggregate CSV row."""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .board import MoveRecord, read_transcript, write_transcript
from .engine import GameConfig, GameResult, IllegalTranscript, derive_seed, play_game, replay_verify
from .strategies import StrategyProfile


@dataclass
class ExperimentConfig:
    n: int
    bias: int | None = None
    bias_coeff: float | None = None
    maker: str = "maker.ham"
    breaker: str = "breaker.random"
    games: int = 1
    seed: int = 0
    profile: str = "desk"
    delta: float | None = None
    out: str | None = None
    jobs: int = 1
    move_cap: int | None = None

    def __post_init__(self):
        if self.games < 1:
            raise ValueError("games must be at least 1")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        self.resolved_bias()

    def resolved_bias(self) -> int:
        if self.bias is not None:
            b = self.bias
        elif self.bias_coeff is not None:
            b = math.floor(self.bias_coeff * self.n / math.log(self.n))
        else:
            raise ValueError("give an absolute bias or a bias coefficient")
        if b < 1:
            raise ValueError(f"bias resolves to {b}; it must be at least 1")
        return b

    def make_profile(self) -> StrategyProfile:
        kw = {}
        if self.delta is not None and self.profile == "desk":
            kw["delta"] = self.delta
        return StrategyProfile.preset_for(self.profile, self.n, **kw)

    def game_config(self, index: int) -> GameConfig:
        return GameConfig(
            n=self.n,
            bias=self.resolved_bias(),
            maker=self.maker,
            breaker=self.breaker,
            profile=self.make_profile(),
            seed=derive_seed(self.seed, index),
            move_cap=self.move_cap,
        )

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class SummaryRow:
    n: int
    bias: int
    maker: str
    breaker: str
    profile: str
    games: int
    master_seed: int
    maker_wins: int
    maker_win_rate: float
    mean_maker_moves: float
    max_maker_moves: int
    max_stage1: int
    max_stage2: int
    max_stage3: int
    monitor_events: int
    monitor_violations: int
    fallback_stage1: int
    fallback_stage2: int
    fallback_stage3: int
    cap_exceeded: int
    wall_seconds: float = field(default=0.0, compare=False)


def _play_indexed(args) -> tuple[int, GameResult, list[MoveRecord]]:
    cfg, i = args
    result, transcript = play_game(cfg.game_config(i))
    return i, result, transcript


def summarize(cfg: ExperimentConfig, results: list[GameResult], wall: float = 0.0) -> SummaryRow:
    wins = [r for r in results if r.winner == "maker"]
    moves = [r.maker_moves for r in results]
    stages = [r.stage_moves for r in wins] or [(0, 0, 0)]
    return SummaryRow(
        n=cfg.n,
        bias=cfg.resolved_bias(),
        maker=cfg.maker,
        breaker=cfg.breaker,
        profile=cfg.profile,
        games=len(results),
        master_seed=cfg.seed,
        maker_wins=len(wins),
        maker_win_rate=len(wins) / len(results),
        mean_maker_moves=sum(moves) / len(moves),
        max_maker_moves=max(moves),
        max_stage1=max(s[0] for s in stages),
        max_stage2=max(s[1] for s in stages),
        max_stage3=max(s[2] for s in stages),
        monitor_events=sum(len(r.monitor_events) for r in results),
        monitor_violations=sum(r.monitor_violations for r in results),
        fallback_stage1=sum(r.fallbacks.get("stage1", 0) for r in results),
        fallback_stage2=sum(r.fallbacks.get("stage2", 0) for r in results),
        fallback_stage3=sum(r.fallbacks.get("stage3", 0) for r in results),
        cap_exceeded=sum(not r.within_cap for r in results),
        wall_seconds=wall,
    )


def game_meta(gc: GameConfig, index: int, result: GameResult) -> dict:
    return {
        "index": index,
        "config": {
            "n": gc.n,
            "bias": gc.bias,
            "maker": gc.maker,
            "breaker": gc.breaker,
            "seed": gc.seed,
            "move_cap": gc.move_cap,
            "profile": asdict(gc.profile),
        },
        "result": result.to_dict(),
    }


def game_config_from_meta(meta: dict) -> GameConfig:
    c = dict(meta["config"])
    c["profile"] = StrategyProfile(**c["profile"])
    return GameConfig(**c)


def run_experiment(cfg: ExperimentConfig) -> tuple[SummaryRow, list[GameResult], list[list[MoveRecord]]]:
    t0 = time.perf_counter()
    tasks = [(cfg, i) for i in range(cfg.games)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            done = list(pool.map(_play_indexed, tasks))
    else:
        done = [_play_indexed(t) for t in tasks]
    done.sort(key=lambda t: t[0])
    results = [r for _, r, _ in done]
    transcripts = [tr for _, _, tr in done]
    row = summarize(cfg, results, time.perf_counter() - t0)
    if cfg.out:
        write_outputs(cfg, row, results, transcripts)
    return row, results, transcripts


def write_outputs(cfg: ExperimentConfig, row: SummaryRow, results, transcripts) -> None:
    out = Path(cfg.out)
    (out / "transcripts").mkdir(parents=True, exist_ok=True)
    with open(out / "games.jsonl", "w") as fh:
        for i, (res, tr) in enumerate(zip(results, transcripts)):
            gc = cfg.game_config(i)
            path = out / "transcripts" / f"game_{i:04d}.jsonl"
            write_transcript(path, tr)
            meta = game_meta(gc, i, res)
            with open(str(path) + ".meta.json", "w") as mf:
                json.dump(meta, mf)
            fh.write(json.dumps(meta, separators=(",", ":")) + "\n")
    write_summary_csv(out / "summary.csv", [row])


def write_summary_csv(path, rows: list[SummaryRow]) -> None:
    names = [f.name for f in fields(SummaryRow)]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))


@dataclass
class ReplayReport:
    verified: bool
    result: GameResult | None
    matches_original: bool | None
    error: str | None = None


def replay_file(path, config: GameConfig | None = None) -> ReplayReport:
    """Re-referee a transcript file; config comes from the ``.meta.json`` sidecar unless given."""
    records = read_transcript(path)
    original = None
    meta_path = str(path) + ".meta.json"
    if os.path.exists(meta_path):
        with open(meta_path) as fh:
            meta = json.load(fh)
        original = GameResult.from_dict(meta["result"])
        if config is None:
            config = game_config_from_meta(meta)
    if config is None:
        raise ValueError("no game config: pass one or keep the .meta.json sidecar next to the transcript")
    try:
        result = replay_verify(records, config)
    except IllegalTranscript as exc:
        return ReplayReport(False, None, None, str(exc))
    return ReplayReport(True, result, None if original is None else original == result)
