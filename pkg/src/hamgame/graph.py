"""Graph machinery: components, expansion, exact path oracles, Posa rotations, boosters.

Exact oracles work on a table ``D[s, M]``: the bitmask of vertices ``v`` such
that the induced subgraph ``G[M]`` has a Hamilton path from ``s`` to ``v``.
The table is filled layer by layer (by popcount of ``M``) with numpy, which
keeps n <= 16 instant and n = 18 under a second.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .board import Edge, make_edge

EXACT_CAP = 18
BOOSTER_EXACT_CAP = 16
EXPANDER_BUDGET = 10**8


class GraphError(Exception):
    pass


class NoEligibleVertex(GraphError):
    pass


class BudgetExceeded(GraphError):
    pass


class TooLarge(GraphError):
    pass


class InvalidPath(GraphError):
    pass


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "__dict__")

    def __init__(self, n: int, adj: Sequence[Iterable[int]] | None = None):
        self.n = n
        if adj is None:
            self.adj = tuple(frozenset() for _ in range(n))
        else:
            self.adj = tuple(frozenset(a) for a in adj)
            if len(self.adj) != n:
                raise GraphError("adjacency length does not match n")
            for v, nb in enumerate(self.adj):
                if v in nb:
                    raise GraphError(f"loop at {v}")
                for w in nb:
                    if v not in self.adj[w]:
                        raise GraphError(f"asymmetric adjacency at {v}-{w}")

    @classmethod
    def trusted(cls, n: int, adj: Sequence[Iterable[int]]) -> Graph:
        """Build without validation; ``adj`` must already be simple and symmetric."""
        g = cls.__new__(cls)
        g.n = n
        g.adj = tuple(frozenset(a) for a in adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"bad edge ({u}, {v}) for n={n}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, adj)

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, [set(range(n)) - {v} for v in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    @functools.cached_property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def non_edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if v not in self.adj[u]]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def with_edge(self, u: int, v: int) -> Graph:
        if u == v:
            raise GraphError("loops are not allowed")
        adj = [set(a) for a in self.adj]
        adj[u].add(v)
        adj[v].add(u)
        return Graph(self.n, adj)

    def is_subgraph_of(self, other: Graph) -> bool:
        return self.n == other.n and all(a <= b for a, b in zip(self.adj, other.adj))

    @functools.cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in a) for a in self.adj)

    @functools.cached_property
    def _table(self) -> np.ndarray:
        return _path_table(self)

    def to_edge_list(self) -> str:
        lines = [f"# n {self.n}"] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_edge_list(cls, text: str) -> Graph:
        n = None
        edges = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "n":
                    n = int(parts[1])
                continue
            u, v = (int(x) for x in line.split())
            edges.append((u, v))
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls.from_edges(n, edges)


# --- basic structure -------------------------------------------------------


def components(G: Graph) -> list[list[int]]:
    """Connected components, each sorted, listed by smallest vertex."""
    seen = [False] * G.n
    out = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in G.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def is_connected(G: Graph) -> bool:
    return G.n <= 1 or len(components(G)) == 1


def min_degree_vertex(G: Graph, eligible: Callable[[int], bool] = lambda v: True) -> int:
    best = None
    for v in range(G.n):
        if eligible(v) and (best is None or len(G.adj[v]) < len(G.adj[best])):
            best = v
    if best is None:
        raise NoEligibleVertex
    return best


def neighborhood(G: Graph, U: Iterable[int]) -> set[int]:
    """External neighbourhood: vertices outside U with a neighbour in U."""
    U = set(U)
    out: set[int] = set()
    for u in U:
        out |= G.adj[u]
    return out - U


# --- expansion -------------------------------------------------------------


def _subset_count(n: int, k: int) -> int:
    return sum(math.comb(n, i) for i in range(1, min(k, n) + 1))


def is_k_expander(G: Graph, k: int, budget: int = EXPANDER_BUDGET) -> tuple[bool, set[int] | None]:
    """Exact check of |N(U)| >= 2|U| for all 1 <= |U| <= k.

    Subsets are enumerated by size, then lexicographically, so the returned
    witness is the first violator in that order.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if _subset_count(G.n, k) > budget:
        raise BudgetExceeded(f"{_subset_count(G.n, k)} subsets > budget {budget}")
    masks = G.masks
    for size in range(1, min(k, G.n) + 1):
        need = 2 * size
        for U in itertools.combinations(range(G.n), size):
            umask = 0
            nb = 0
            for u in U:
                umask |= 1 << u
                nb |= masks[u]
            if (nb & ~umask).bit_count() < need:
                return False, set(U)
    return True, None


def _violates(G: Graph, U: set[int]) -> bool:
    return len(neighborhood(G, U)) < 2 * len(U)


def refute_expander_sampling(
    G: Graph, k: int, trials: int, rng: random.Random
) -> set[int] | None:
    """Look for a violating set by growing random BFS balls; can only refute."""
    if G.n == 0:
        return None
    for _ in range(trials):
        seed = rng.randrange(G.n)
        target = rng.randint(1, min(k, G.n))
        grown = [seed]
        inside = {seed}
        frontier = [seed]
        while frontier and len(grown) < target:
            v = frontier.pop(0)
            nbrs = sorted(G.adj[v] - inside)
            rng.shuffle(nbrs)
            for w in nbrs:
                if len(grown) >= target:
                    break
                inside.add(w)
                grown.append(w)
                frontier.append(w)
        for size in range(1, len(grown) + 1):
            U = set(grown[:size])
            if _violates(G, U):
                return U
    return None


# --- exact path oracles ----------------------------------------------------


@functools.lru_cache(maxsize=None)
def _layers(n: int) -> tuple[np.ndarray, ...]:
    masks = np.arange(1 << n, dtype=np.int64)
    pop = _popcount(masks)
    return tuple(masks[pop == k] for k in range(n + 1))


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    c = np.zeros_like(a)
    while np.any(a):
        c += a & 1
        a = a >> 1
    return c


@functools.lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    return _popcount(np.arange(1 << n, dtype=np.int64))


def _path_table(G: Graph) -> np.ndarray:
    n = G.n
    if n > EXACT_CAP:
        raise TooLarge(f"n={n} exceeds exact cap {EXACT_CAP}")
    D = np.zeros((n, 1 << n), dtype=np.int64)
    for s in range(n):
        D[s, 1 << s] = 1 << s
    adj = G.masks
    layers = _layers(n)
    for k in range(1, n):
        M = layers[k]
        for u in range(n):
            bit = 1 << u
            sel = M[(M & bit) == 0]
            if sel.size == 0 or adj[u] == 0:
                continue
            hit = (D[:, sel] & adj[u]) != 0
            if not hit.any():
                continue
            tgt = sel | bit
            D[:, tgt] |= np.where(hit, bit, 0)
    return D


def _check_cap(G: Graph, cap: int) -> None:
    if G.n > cap:
        raise TooLarge(f"n={G.n} exceeds cap {cap}")


def longest_path_exact(G: Graph, cap: int = EXACT_CAP) -> tuple[int, list[int]]:
    """Vertex count of a longest path and the lexicographically least witness."""
    _check_cap(G, cap)
    n = G.n
    if n == 0:
        return 0, []
    D = G._table
    layers = _layers(n)
    live = D.any(axis=0)
    pop = _popcounts(n)
    L = int(pop[live].max())

    # starts[s] is True when some L-vertex path begins at s
    layer = layers[L]
    starts = (D[:, layer] != 0).any(axis=1)
    path = [int(np.flatnonzero(starts)[0])]
    used = 1 << path[0]
    while len(path) < L:
        v = path[-1]
        rest = L - len(path)
        cand = layers[rest]
        cand = cand[(cand & used) == 0]
        for u in sorted(G.adj[v]):
            if used >> u & 1:
                continue
            ok = cand[(cand >> u & 1) == 1]
            if ok.size and (D[u, ok] != 0).any():
                path.append(u)
                used |= 1 << u
                break
        else:  # pragma: no cover - table guarantees a continuation
            raise AssertionError("longest path reconstruction failed")
    return L, path


def hamilton_cycle_exact(G: Graph, cap: int = EXACT_CAP) -> list[int] | None:
    """A Hamilton cycle as a vertex sequence (closing edge implied), or None."""
    _check_cap(G, cap)
    n = G.n
    if n < 3:
        return None
    D = G._table
    full = (1 << n) - 1
    ends = int(D[0, full]) & G.masks[0]
    if not ends:
        return None
    v = (ends & -ends).bit_length() - 1
    seq = [v]
    M = full
    while v != 0:
        M ^= 1 << v
        prev = [w for w in sorted(G.adj[v]) if M >> w & 1 and int(D[0, M]) >> w & 1]
        v = prev[0]
        seq.append(v)
    seq.reverse()
    return seq


def is_hamiltonian_exact(G: Graph, cap: int = EXACT_CAP) -> bool:
    return hamilton_cycle_exact(G, cap) is not None


@dataclass(frozen=True)
class BoosterSet:
    pairs: frozenset[Edge]
    method: str  # "exact" or "rotation"
    path: tuple[int, ...] = ()  # longest path found (rotation method only)
    witnesses: dict = field(default_factory=dict, compare=False, hash=False)

    def __contains__(self, e) -> bool:
        return make_edge(*e) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def boosters_exact(G: Graph, cap: int = BOOSTER_EXACT_CAP) -> BoosterSet:
    """Non-edges whose addition makes G Hamiltonian or lengthens its longest path."""
    _check_cap(G, cap)
    n = G.n
    non_edges = G.non_edges()
    if not non_edges:
        return BoosterSet(frozenset(), "exact")
    if is_hamiltonian_exact(G):
        return BoosterSet(frozenset(non_edges), "exact")
    D = G._table
    full = (1 << n) - 1
    pop = _popcounts(n)
    L, _ = longest_path_exact(G)
    E = np.bitwise_or.reduce(D, axis=0)

    # H[y, C]: size of the largest B within C carrying a path that starts at y
    H = np.where((E[None, :] >> np.arange(n)[:, None]) & 1 == 1, pop[None, :], -1)
    for i in range(n):
        view = H.reshape(n, -1, 2, 1 << i)
        np.maximum(view[:, :, 1, :], view[:, :, 0, :], out=view[:, :, 1, :])

    masks = np.arange(1 << n, dtype=np.int64)
    out = set()
    for x, y in non_edges:
        if int(D[x, full]) >> y & 1:
            out.add((x, y))
            continue
        A = masks[((E >> x) & 1 == 1) & ((masks >> y) & 1 == 0)]
        tail = H[y, full ^ A]
        ok = tail > 0
        if ok.any() and int((pop[A][ok] + tail[ok]).max()) > L:
            out.add((x, y))
    return BoosterSet(frozenset(out), "exact")


def is_booster_exact(G: Graph, e: Edge, cap: int = EXACT_CAP) -> bool:
    u, v = e
    if G.has_edge(u, v):
        return False
    H = G.with_edge(u, v)
    return is_hamiltonian_exact(H, cap) or longest_path_exact(H, cap)[0] > longest_path_exact(G, cap)[0]


# --- paths, Posa rotations --------------------------------------------------


def check_path(G: Graph, path: Sequence[int]) -> None:
    if not path:
        raise InvalidPath("empty path")
    if len(set(path)) != len(path):
        raise InvalidPath("path repeats a vertex")
    for v in path:
        if not 0 <= v < G.n:
            raise InvalidPath(f"vertex {v} out of range")
    for a, b in zip(path, path[1:]):
        if b not in G.adj[a]:
            raise InvalidPath(f"({a}, {b}) is not an edge")


def verify_hamilton_cycle(G: Graph, cycle: Sequence[int]) -> bool:
    if len(cycle) != G.n or G.n < 3:
        return False
    try:
        check_path(G, cycle)
    except InvalidPath:
        return False
    return G.has_edge(cycle[-1], cycle[0])


def rotate(path: Sequence[int], pivot: int) -> list[int]:
    """Posa rotation of the far end of ``path`` around the chord (end, pivot)."""
    i = list(path).index(pivot)
    return list(path[: i + 1]) + list(reversed(path[i + 1 :]))


@dataclass
class RotationCertificate:
    base_path: tuple[int, ...]
    fixed_endpoint: int
    reachable: frozenset[int]
    witness: dict[int, list[int]]  # endpoint -> pivots applied in order
    paths: dict[int, list[int]] = field(repr=False, default_factory=dict)

    def replay(self, G: Graph, endpoint: int) -> list[int]:
        p = list(self.base_path)
        for pivot in self.witness[endpoint]:
            if pivot not in G.adj[p[-1]]:
                raise InvalidPath(f"pivot {pivot} is not adjacent to endpoint {p[-1]}")
            p = rotate(p, pivot)
        check_path(G, p)
        return p


def posa_endpoints(G: Graph, path: Sequence[int]) -> RotationCertificate:
    """Closure of the far endpoint under single rotations, first endpoint fixed."""
    check_path(G, path)
    base = list(path)
    end = base[-1]
    witness = {end: []}
    paths = {end: base}
    queue = [end]
    while queue:
        y = queue.pop(0)
        Q = paths[y]
        if len(Q) < 3:
            continue
        pos = {v: i for i, v in enumerate(Q)}
        before = Q[-2]
        for u in sorted(G.adj[y]):
            i = pos.get(u)
            if i is None or u == before:
                continue
            new_end = Q[i + 1]
            if new_end in witness:
                continue
            paths[new_end] = Q[: i + 1] + Q[:i:-1]
            witness[new_end] = witness[y] + [u]
            queue.append(new_end)
    return RotationCertificate(tuple(base), base[0], frozenset(witness), witness, paths)


def _necessary_for_hamilton_path(G: Graph) -> bool:
    if G.n <= 1:
        return True
    if any(not a for a in G.adj):
        return False
    if sum(1 for a in G.adj if len(a) == 1) > 2:
        return False
    return is_connected(G)


def rotation_walk(
    G: Graph,
    path: Sequence[int] | None,
    rng: random.Random,
    steps: int,
    close: bool = False,
) -> tuple[list[int], list[int] | None]:
    """Grow a path by greedy extension and random Posa rotations.

    Returns ``(path, cycle)``; ``cycle`` is a Hamilton cycle when ``close`` is
    set and one was reached within ``steps`` rotations. The input path is
    assumed valid.
    """
    n = G.n
    adj = G.adj
    if n == 0:
        return [], None
    if not path:
        path = [rng.randrange(n)]
    path = list(path)
    inpath = [False] * n
    pos = [-1] * n
    for i, v in enumerate(path):
        inpath[v] = True
        pos[v] = i

    def extend_end() -> None:
        while True:
            y = path[-1]
            out = [w for w in adj[y] if not inpath[w]]
            if not out:
                return
            w = min(out) if len(out) == 1 else sorted(out)[rng.randrange(len(out))]
            inpath[w] = True
            pos[w] = len(path)
            path.append(w)

    def flip() -> None:
        path.reverse()
        for i, v in enumerate(path):
            pos[v] = i

    while True:
        extend_end()
        if any(not inpath[w] for w in adj[path[0]]):
            flip()
            extend_end()
        L = len(path)
        if L == n and not close:
            return path, None
        a, y = path[0], path[-1]
        if L >= 3 and a in adj[y]:
            if L == n:
                return path, path[:]
            # the path closes into a cycle; reopen it next to an outside vertex
            for i, c in enumerate(path):
                out = [w for w in adj[c] if not inpath[w]]
                if out:
                    path[:] = path[i + 1 :] + path[: i + 1]
                    for j, v in enumerate(path):
                        pos[v] = j
                    w = min(out)
                    inpath[w] = True
                    pos[w] = len(path)
                    path.append(w)
                    break
            else:
                return path, None  # disconnected
            continue
        if steps <= 0 or L < 3:
            return path, None
        steps -= 1
        before = path[-2]
        cand = sorted(u for u in adj[y] if inpath[u] and u != before)
        if not cand:
            flip()
            continue
        u = cand[rng.randrange(len(cand))]
        i = pos[u]
        path[i + 1 :] = path[:i:-1]
        for j in range(i + 1, L):
            pos[path[j]] = j


def rotation_boosters(
    G: Graph,
    rng: random.Random,
    effort: int | None = None,
    start_path: Sequence[int] | None = None,
) -> BoosterSet:
    """Sound (possibly incomplete) booster set from rotations of a Hamilton path.

    A Hamilton path is sought by rotation-extension. For every path obtained
    from it by rotations, the non-edge joining its two endpoints closes a
    Hamilton cycle, so it is a booster. ``effort`` caps the number of
    rotation closures explored (default ``n``). Without a Hamilton path the
    set is empty; the longest path found is still returned in ``path``.
    """
    n = G.n
    effort = n if effort is None else effort
    if n < 3 or not _necessary_for_hamilton_path(G):
        return BoosterSet(frozenset(), "rotation", tuple(start_path or ()))
    if start_path:
        try:
            check_path(G, start_path)
        except InvalidPath:
            start_path = None
    path, _ = rotation_walk(G, start_path, rng, steps=max(4 * n, 50))
    if len(path) < n:
        return BoosterSet(frozenset(), "rotation", tuple(path))

    witnesses: dict[Edge, list[int]] = {}

    def harvest(cert: RotationCertificate) -> None:
        a = cert.fixed_endpoint
        for z in sorted(cert.reachable):
            if z != a and z not in G.adj[a]:
                witnesses.setdefault(make_edge(a, z), cert.paths[z])

    cert = posa_endpoints(G, path)
    harvest(cert)
    done = 1
    ends = sorted(cert.reachable)
    rng.shuffle(ends)
    for z in ends:
        if done >= effort:
            break
        harvest(posa_endpoints(G, cert.paths[z][::-1]))
        done += 1
    return BoosterSet(frozenset(witnesses), "rotation", tuple(path), witnesses)


class HamiltonDetector:
    """Incremental Hamilton-cycle search over a growing graph.

    Call :meth:`check` after each edge addition. Exact for ``n <= exact_cap``;
    above that a cycle is reported only once rotation search constructs one,
    so detection can lag but is never wrong. The cached path survives calls
    because the graph only gains edges.
    """

    def __init__(self, n: int, rng: random.Random, exact_cap: int = EXACT_CAP, steps: int | None = None):
        self.n = n
        self.rng = rng
        self.exact_cap = exact_cap
        self.steps = steps if steps is not None else max(2 * n, 20)
        self.path: list[int] = []
        self.calls = 0
        self.parent = list(range(n))
        self.parts = n
        self.deg = [0] * n
        self.low = n  # vertices with degree < 2

    def _find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def add_edge(self, u: int, v: int) -> None:
        for x in (u, v):
            self.deg[x] += 1
            if self.deg[x] == 2:
                self.low -= 1
        ru, rv = self._find(u), self._find(v)
        if ru != rv:
            self.parent[ru] = rv
            self.parts -= 1

    def check(self, G: Graph) -> list[int] | None:
        if self.n < 3 or self.low > 0 or self.parts > 1:
            return None
        # alternate which end stays fixed: one end's rotation closure may
        # never meet the other end's neighbourhood
        start = self.path[::-1] if self.calls % 2 else self.path
        self.calls += 1
        path, cycle = rotation_walk(G, start or None, self.rng, self.steps, close=True)
        self.path = path
        if cycle is None and self.n <= self.exact_cap:
            cycle = hamilton_cycle_exact(G, self.exact_cap)
        if cycle is not None and not verify_hamilton_cycle(G, cycle):  # pragma: no cover
            raise AssertionError("detector produced an invalid cycle")
        return cycle
