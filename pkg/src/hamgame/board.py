"""The K_n edge board: ownership, legal claims and the replayable transcript."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


class Owner(enum.Enum):
    UNCLAIMED = "unclaimed"
    MAKER = "maker"
    BREAKER = "breaker"


MAKER = Owner.MAKER
BREAKER = Owner.BREAKER


class BoardError(Exception):
    pass


class AlreadyClaimed(BoardError):
    pass


class NoSuchEdge(BoardError):
    pass


def make_edge(u: int, v: int) -> Edge:
    """Canonical (small, large) form of the edge {u, v}."""
    return (u, v) if u < v else (v, u)


def edge_index(edge: Edge, n: int) -> int:
    """Position of ``edge`` in the lexicographic order of all C(n, 2) edges."""
    u, v = edge
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def all_edges(n: int) -> list[Edge]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


@dataclass
class MoveRecord:
    round: int
    mover: Owner
    edges: list[Edge]
    annotation: str | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "round": self.round,
                "mover": self.mover.value,
                "edges": [list(e) for e in self.edges],
                "annotation": self.annotation,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_dict(cls, d: dict) -> MoveRecord:
        mover = Owner(d["mover"])
        if mover is Owner.UNCLAIMED:
            raise ValueError("mover must be maker or breaker")
        edges = [(int(a), int(b)) for a, b in d["edges"]]
        return cls(int(d["round"]), mover, edges, d.get("annotation"))


class Board:
    """Ownership of every edge of K_n plus the transcript of claims.

    Besides the ownership map the board keeps per-vertex indexes (unclaimed
    neighbours, player adjacency) so strategies can query it in O(deg).
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("board needs at least one vertex")
        self.n = n
        self.ownership: dict[Edge, Owner] = {e: Owner.UNCLAIMED for e in all_edges(n)}
        self.transcript: list[MoveRecord] = []
        self.free: list[set[int]] = [set(range(n)) - {v} for v in range(n)]
        self.adj = {MAKER: [set() for _ in range(n)], BREAKER: [set() for _ in range(n)]}
        self.count = {Owner.UNCLAIMED: n * (n - 1) // 2, MAKER: 0, BREAKER: 0}
        # Swap-remove list of unclaimed edges, for O(1) uniform sampling.
        self._pool: list[Edge] = all_edges(n)
        self._pool_pos: dict[Edge, int] = {e: i for i, e in enumerate(self._pool)}

    def __repr__(self) -> str:
        c = self.count
        return f"Board(n={self.n}, unclaimed={c[Owner.UNCLAIMED]}, maker={c[MAKER]}, breaker={c[BREAKER]})"

    @property
    def unclaimed(self) -> int:
        return self.count[Owner.UNCLAIMED]

    @property
    def total_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    def owner(self, edge: Edge) -> Owner:
        e = make_edge(*edge)
        if e not in self.ownership:
            raise NoSuchEdge(edge)
        return self.ownership[e]

    def degree(self, mover: Owner, v: int) -> int:
        return len(self.adj[mover][v])

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def _take(self, edge: Edge, mover: Owner) -> Edge:
        if mover is Owner.UNCLAIMED:
            raise ValueError("cannot claim for nobody")
        e = make_edge(*edge)
        state = self.ownership.get(e)
        if state is None:
            raise NoSuchEdge(edge)
        if state is not Owner.UNCLAIMED:
            raise AlreadyClaimed(e)
        u, v = e
        self.ownership[e] = mover
        self.free[u].discard(v)
        self.free[v].discard(u)
        self.adj[mover][u].add(v)
        self.adj[mover][v].add(u)
        self.count[Owner.UNCLAIMED] -= 1
        self.count[mover] += 1
        i = self._pool_pos.pop(e)
        last = self._pool.pop()
        if last != e:
            self._pool[i] = last
            self._pool_pos[last] = i
        return e

    def claim(self, edge: Edge, mover: Owner, round: int | None = None, annotation: str | None = None) -> None:
        self.claim_many([edge], mover, round, annotation)

    def claim_many(
        self,
        edges: Sequence[Edge],
        mover: Owner,
        round: int | None = None,
        annotation: str | None = None,
    ) -> None:
        """Claim ``edges`` for ``mover`` as one transcript record.

        The whole record is validated before anything is written, so a
        failing claim leaves the board untouched.
        """
        canon = [make_edge(*e) for e in edges]
        if len(set(canon)) != len(canon):
            raise AlreadyClaimed(f"duplicate edge inside one record: {canon}")
        for e in canon:
            state = self.ownership.get(e)
            if state is None:
                raise NoSuchEdge(e)
            if state is not Owner.UNCLAIMED:
                raise AlreadyClaimed(e)
        for e in canon:
            self._take(e, mover)
        if round is None:
            round = self.transcript[-1].round + 1 if self.transcript else 1
        self.transcript.append(MoveRecord(round, mover, canon, annotation))

    def unclaimed_incident(self, v: int) -> list[Edge]:
        self._check_vertex(v)
        return [make_edge(v, w) for w in sorted(self.free[v])]

    def unclaimed_edges(self) -> list[Edge]:
        return sorted(self._pool)

    def sample_unclaimed(self, k: int, rng: random.Random) -> list[Edge]:
        k = min(k, len(self._pool))
        return rng.sample(self._pool, k)

    def lowest_unclaimed(self) -> Edge | None:
        for u in range(self.n):
            larger = [x for x in self.free[u] if x > u]
            if larger:
                return (u, min(larger))
        return None

    def player_graph(self, mover: Owner):
        from .graph import Graph

        return Graph.trusted(self.n, self.adj[mover])

    def check_invariants(self) -> None:
        c = self.count
        assert c[Owner.UNCLAIMED] + c[MAKER] + c[BREAKER] == self.total_edges
        for who in Owner:
            assert sum(1 for o in self.ownership.values() if o is who) == c[who]
        assert len(self._pool) == c[Owner.UNCLAIMED]


def new_board(n: int) -> Board:
    return Board(n)


def replay(n: int, records: Iterable[MoveRecord]) -> Board:
    """Rebuild a board by re-applying ``records`` to a fresh K_n board."""
    board = Board(n)
    for rec in records:
        board.claim_many(rec.edges, rec.mover, rec.round, rec.annotation)
    return board


def dump_transcript(records: Iterable[MoveRecord]) -> str:
    return "".join(r.to_json() + "\n" for r in records)


def write_transcript(path, records: Iterable[MoveRecord]) -> None:
    with open(path, "w") as fh:
        fh.write(dump_transcript(records))


class TranscriptParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_transcript(text: str) -> list[MoveRecord]:
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(MoveRecord.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise TranscriptParseError(lineno, str(exc)) from exc
    if not records:
        raise TranscriptParseError(0, "empty transcript")
    return records


def read_transcript(path) -> list[MoveRecord]:
    with open(path) as fh:
        return parse_transcript(fh.read())


def iter_edges_of(records: Iterable[MoveRecord]) -> Iterator[Edge]:
    for rec in records:
        yield from rec.edges
