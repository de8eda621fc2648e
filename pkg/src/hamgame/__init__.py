"""Simulation and verification engine for the biased (1:b) Hamiltonicity game on K_n."""

from .board import BREAKER, MAKER, Board, MoveRecord, Owner, make_edge, new_board
from .graph import Graph
from .strategies import StrategyProfile
from . import solver  # importing registers the solver-driven players
from .engine import GameConfig, GameResult, play_game, replay_verify

__all__ = [
    "BREAKER",
    "MAKER",
    "Board",
    "GameConfig",
    "GameResult",
    "Graph",
    "MoveRecord",
    "Owner",
    "StrategyProfile",
    "make_edge",
    "new_board",
    "play_game",
    "replay_verify",
    "solver",
]
