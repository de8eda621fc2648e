"""Exact minimax for tiny Maker-Breaker boards given as explicit winning sets."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .board import BREAKER, MAKER, Board, Owner, all_edges, edge_index
from .graph import TooLarge
from .strategies import StrategyState, register

MAX_ELEMENTS = 16
MAX_HAMILTON_N = 7


@dataclass(frozen=True)
class WinningSetSystem:
    board_size: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        for s in self.sets:
            if not s:
                raise ValueError("winning sets must be nonempty")
            if min(s) < 0 or max(s) >= self.board_size:
                raise ValueError(f"set {sorted(s)} has elements outside the board")

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << x for x in s) for s in self.sets)

    def to_text(self) -> str:
        lines = [f"# size {self.board_size}"] + [" ".join(map(str, sorted(s))) for s in self.sets]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, board_size: int | None = None) -> WinningSetSystem:
        sets = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "size" and board_size is None:
                    board_size = int(parts[1])
                continue
            sets.append(frozenset(int(x) for x in line.split()))
        if board_size is None:
            board_size = 1 + max((max(s) for s in sets), default=-1)
        return cls(board_size, tuple(sets))


def hamilton_winning_sets(n: int) -> WinningSetSystem:
    """Edge sets of the (n-1)!/2 Hamilton cycles of K_n, edges indexed lexicographically."""
    if n > MAX_HAMILTON_N:
        raise TooLarge(f"n={n} > {MAX_HAMILTON_N}")
    size = n * (n - 1) // 2
    if n < 3:
        return WinningSetSystem(size, ())
    sets = []
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        cyc = (0,) + perm
        sets.append(frozenset(edge_index(tuple(sorted((cyc[i], cyc[(i + 1) % n]))), n) for i in range(n)))
    return WinningSetSystem(size, tuple(sets))


@dataclass
class SolveResult:
    winner: str
    states_visited: int
    principal_variation: list[tuple[str, int]] = field(default_factory=list)


def _encode(position, size: int) -> tuple[int, int]:
    mm = bm = 0
    if position is None:
        return 0, 0
    if len(position) != size:
        raise ValueError("position length does not match board size")
    for i, o in enumerate(position):
        o = Owner(o) if isinstance(o, str) else o
        if o in (MAKER, 1):
            mm |= 1 << i
        elif o in (BREAKER, 2):
            bm |= 1 << i
    return mm, bm


class Solver:
    """Memoised game values; state = (Maker mask, Breaker mask, mover, claims left in turn)."""

    def __init__(self, system: WinningSetSystem, bias: int, shuffle: random.Random | None = None, maker_claims: int = 1):
        if system.board_size > MAX_ELEMENTS:
            raise TooLarge(f"{system.board_size} elements > {MAX_ELEMENTS}")
        if bias < 1:
            raise ValueError("bias must be at least 1")
        self.system = system
        self.bias = bias
        self.maker_claims = maker_claims
        self.full = (1 << system.board_size) - 1
        self.sets = system.masks
        self.order = list(range(system.board_size))
        if shuffle is not None:
            shuffle.shuffle(self.order)
        self.memo: dict[tuple[int, int, str, int], bool] = {}

    def quota(self, mover: str, free: int) -> int:
        return min(self.bias if mover == "breaker" else self.maker_claims, free)

    def terminal(self, mm: int, bm: int) -> bool | None:
        if any(s & mm == s for s in self.sets):
            return True
        if all(s & bm for s in self.sets) or (mm | bm) == self.full:
            return False
        return None

    def children(self, mm: int, bm: int, mover: str, left: int):
        free = self.full & ~(mm | bm)
        rem = free.bit_count() - 1
        for x in self.order:
            bit = 1 << x
            if not free & bit:
                continue
            nm, nb = (mm | bit, bm) if mover == "maker" else (mm, bm | bit)
            if left - 1 > 0 and rem > 0:
                nxt = (mover, left - 1)
            else:
                other = "breaker" if mover == "maker" else "maker"
                nxt = (other, self.quota(other, rem))
            yield x, (nm, nb, nxt[0], nxt[1])

    def value(self, mm: int, bm: int, mover: str, left: int) -> bool:
        """True when Maker wins with optimal play from this state."""
        t = self.terminal(mm, bm)
        if t is not None:
            return t
        key = (mm, bm, mover, left)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if mover == "maker":
            out = any(self.value(*st) for _, st in self.children(mm, bm, mover, left))
        else:
            out = all(self.value(*st) for _, st in self.children(mm, bm, mover, left))
        self.memo[key] = out
        return out

    def best(self, mm: int, bm: int, mover: str, left: int) -> int:
        """An optimal element for ``mover`` (any element if the game is already lost)."""
        goal = mover == "maker"
        first = None
        for x, st in self.children(mm, bm, mover, left):
            if first is None:
                first = x
            if self.value(*st) == goal:
                return x
        if first is None:
            raise ValueError("no unclaimed element")
        return first

    def principal_variation(self, mm: int, bm: int, mover: str, left: int) -> list[tuple[str, int]]:
        line = []
        while self.terminal(mm, bm) is None:
            x = self.best(mm, bm, mover, left)
            line.append((mover, x))
            for y, st in self.children(mm, bm, mover, left):
                if y == x:
                    mm, bm, mover, left = st
                    break
        return line


def solve(
    system: WinningSetSystem,
    b: int,
    position: Sequence | None = None,
    to_move: str = "breaker",
    claims_left: int | None = None,
    shuffle: random.Random | None = None,
) -> SolveResult:
    s = Solver(system, b, shuffle=shuffle)
    mm, bm = _encode(position, system.board_size)
    free = (s.full & ~(mm | bm)).bit_count()
    left = s.quota(to_move, free) if claims_left is None else claims_left
    win = s.value(mm, bm, to_move, left)
    pv = s.principal_variation(mm, bm, to_move, left)
    return SolveResult("maker" if win else "breaker", len(s.memo), pv)


def solve_naive(system: WinningSetSystem, b: int, mm: int = 0, bm: int = 0, mover: str = "breaker", left: int | None = None) -> bool:
    """Plain recursion to the end of the board: no memo, no early cut-offs."""
    size = system.board_size
    full = (1 << size) - 1
    sets = system.masks
    free = full & ~(mm | bm)
    if left is None:
        left = min(b if mover == "breaker" else 1, free.bit_count())
    if free == 0:
        return any(s & mm == s for s in sets)
    results = []
    for x in range(size):
        bit = 1 << x
        if not free & bit:
            continue
        nm, nb = (mm | bit, bm) if mover == "maker" else (mm, bm | bit)
        rem = free.bit_count() - 1
        if left - 1 > 0 and rem > 0:
            results.append(solve_naive(system, b, nm, nb, mover, left - 1))
        else:
            other = "breaker" if mover == "maker" else "maker"
            results.append(solve_naive(system, b, nm, nb, other, min(b if other == "breaker" else 1, rem)))
    return any(results) if mover == "maker" else all(results)


def bias_monotonicity_check(
    system: WinningSetSystem,
    b_max: int,
    maker_wins: Callable[[WinningSetSystem, int], bool] | None = None,
) -> bool:
    """True iff the set of biases won by Maker in 1..b_max is downward closed."""
    if maker_wins is None:
        maker_wins = lambda sys_, b: solve(sys_, b).winner == "maker"
    wins = [maker_wins(system, b) for b in range(1, b_max + 1)]
    return all(wins[i] or not wins[i + 1] for i in range(len(wins) - 1))


# --- solver-driven players for the engine, K_n Hamiltonicity only -----------


def _solver_for(state: StrategyState, n: int) -> Solver:
    s = state.memo.get("solver")
    if s is None:
        s = state.memo["solver"] = Solver(hamilton_winning_sets(n), state.bias)
    return s


def _board_masks(board: Board) -> tuple[int, int]:
    mm = bm = 0
    for e, o in board.ownership.items():
        if o is MAKER:
            mm |= 1 << edge_index(e, board.n)
        elif o is BREAKER:
            bm |= 1 << edge_index(e, board.n)
    return mm, bm


@register("maker.opt")
def maker_optimal(state: StrategyState, board: Board, rng: random.Random):
    s = _solver_for(state, board.n)
    mm, bm = _board_masks(board)
    state.annotation = "optimal"
    return all_edges(board.n)[s.best(mm, bm, "maker", 1)]


@register("breaker.opt")
def breaker_optimal(state: StrategyState, board: Board, rng: random.Random):
    s = _solver_for(state, board.n)
    edges = all_edges(board.n)
    mm, bm = _board_masks(board)
    left = min(state.bias, board.unclaimed)
    out = []
    while left > 0:
        x = s.best(mm, bm, "breaker", left)
        out.append(edges[x])
        bm |= 1 << x
        left -= 1
        if (mm | bm) == s.full:
            break
    return out
