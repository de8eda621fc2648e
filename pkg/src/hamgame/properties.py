"""Randomised property suites for the structural lemmas and the game rules.

Each suite samples instances from a seeded stream, stops at the sample
budget, and reports every counterexample verbatim (edge list + parameters).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .engine import GameConfig, play_game, replay_verify
from .graph import (
    Graph,
    boosters_exact,
    components,
    is_connected,
    is_hamiltonian_exact,
    is_k_expander,
    rotation_boosters,
)
from .solver import bias_monotonicity_check, hamilton_winning_sets

SUITES = ("lemma1", "lemma2", "booster-soundness", "replay", "monotonicity")


@dataclass
class SuiteReport:
    suite: str
    samples: int = 0
    checked: int = 0  # instances where the property's hypothesis held
    counterexamples: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.suite}: {status} samples={self.samples} checked={self.checked} "
            f"violations={len(self.counterexamples)} time={self.seconds:.1f}s"
        )


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def block_union(n: int, rng: random.Random, p: float) -> Graph:
    """Disjoint union of random dense blocks, so expanders can be disconnected."""
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, min(3, n - 1))))
    bounds = [0] + cuts + [n]
    perm = list(range(n))
    rng.shuffle(perm)
    edges = []
    for lo, hi in zip(bounds, bounds[1:]):
        block = perm[lo:hi]
        for i, u in enumerate(block):
            for v in block[i + 1 :]:
                if rng.random() < p:
                    edges.append((u, v))
    return Graph.from_edges(n, edges)


def unbalanced_bipartite(small: int, large: int, rng: random.Random, p: float, extra: int) -> Graph:
    """Dense bipartite graph with a bigger side, plus a few edges inside that side."""
    n = small + large
    perm = list(range(n))
    rng.shuffle(perm)
    S, L = perm[:small], perm[small:]
    edges = [(u, v) for u in S for v in L if rng.random() < p]
    inside = [(u, v) for i, u in enumerate(L) for v in L[i + 1 :]]
    edges += rng.sample(inside, min(extra, len(inside)))
    return Graph.from_edges(n, edges)


def _cex(G: Graph, **params) -> dict:
    return {"n": G.n, "edges": G.edges(), **params}


def lemma2_suite(samples: int = 1000, seed: int = 0) -> SuiteReport:
    """k-expanders have all components of size >= 3k."""
    rng = random.Random(seed)
    rep = SuiteReport("lemma2")
    t0 = time.perf_counter()
    for _ in range(samples):
        n = rng.randint(3, 20)
        k = rng.randint(1, 4)
        G = block_union(n, rng, rng.uniform(0.4, 1.0)) if rng.random() < 0.7 else gnp(n, rng.uniform(0.2, 0.9), rng)
        rep.samples += 1
        ok, _ = is_k_expander(G, k)
        if not ok:
            continue
        rep.checked += 1
        small = [c for c in components(G) if len(c) < 3 * k]
        if small:
            rep.counterexamples.append(_cex(G, k=k, component=small[0]))
    rep.seconds = time.perf_counter() - t0
    return rep


def _lemma1_candidate(rng: random.Random) -> tuple[Graph, int]:
    k = rng.randint(1, 3)
    r = rng.random()
    if r < 0.6:
        small = {1: rng.randint(2, 6), 2: rng.randint(4, 6), 3: 6}[k]
        large = rng.randint(small + 1, min(small + 3, 14 - small))
        G = unbalanced_bipartite(small, large, rng, rng.uniform(0.75, 1.0), rng.randint(0, large - small - 1))
    elif r < 0.8:
        G = gnp(rng.randint(5, 12), rng.uniform(0.25, 0.5), rng)
    else:
        # two dense blocks sharing a cut vertex
        a, b = rng.randint(3, 7), rng.randint(3, 7)
        n = a + b - 1
        edges = [(u, v) for u in range(a) for v in range(u + 1, a) if rng.random() < 0.85]
        blk = [a - 1] + list(range(a, n))
        edges += [(u, v) for i, u in enumerate(blk) for v in blk[i + 1 :] if rng.random() < 0.85]
        G = Graph.from_edges(n, edges)
    return G, k


def lemma1_suite(samples: int = 200, seed: int = 0, max_attempts: int = 200_000) -> SuiteReport:
    """Connected non-Hamiltonian k-expanders have >= (k+1)^2/2 boosters.

    ``samples`` counts instances that satisfy the hypothesis.
    """
    rng = random.Random(seed)
    rep = SuiteReport("lemma1")
    t0 = time.perf_counter()
    attempts = 0
    while rep.checked < samples and attempts < max_attempts:
        attempts += 1
        G, k = _lemma1_candidate(rng)
        if G.n > 14 or not is_connected(G):
            continue
        if not is_k_expander(G, k)[0] or is_hamiltonian_exact(G):
            continue
        rep.checked += 1
        count = len(boosters_exact(G))
        if count < (k + 1) ** 2 / 2:
            rep.counterexamples.append(_cex(G, k=k, boosters=count))
    rep.samples = attempts
    rep.seconds = time.perf_counter() - t0
    return rep


def booster_soundness_suite(samples: int = 500, seed: int = 0) -> SuiteReport:
    """Every rotation-derived booster is an exact booster."""
    rng = random.Random(seed)
    rep = SuiteReport("booster-soundness")
    t0 = time.perf_counter()
    for i in range(samples):
        n = rng.randint(3, 14)
        # bias towards graphs near the Hamilton-path threshold so pairs appear
        G = gnp(n, rng.uniform(1.0, 3.0) * math.log(n) / n, rng)
        rep.samples += 1
        found = rotation_boosters(G, random.Random(seed * 7919 + i))
        if not found.pairs:
            continue
        rep.checked += 1
        extra = found.pairs - boosters_exact(G).pairs
        if extra:
            rep.counterexamples.append(_cex(G, unsound=sorted(extra)))
    rep.seconds = time.perf_counter() - t0
    return rep


def replay_suite(samples: int = 50, seed: int = 0, n: int = 30, bias: int | None = None) -> SuiteReport:
    """Every generated transcript re-referees to an identical result."""
    from .engine import derive_seed

    rng = random.Random(seed)
    rep = SuiteReport("replay")
    t0 = time.perf_counter()
    makers = ["maker.ham", "maker.sprime", "maker.s"]
    breakers = ["breaker.random", "breaker.isolator", "breaker.mindeg", "breaker.blocker"]
    for i in range(samples):
        b = bias or rng.randint(1, max(1, int(0.5 * n / math.log(n))))
        cfg = GameConfig(n=n, bias=b, maker=rng.choice(makers), breaker=rng.choice(breakers), seed=derive_seed(seed, i))
        result, transcript = play_game(cfg)
        rep.samples += 1
        rep.checked += 1
        again = replay_verify(transcript, cfg)
        if again != result:
            rep.counterexamples.append({"config": repr(cfg), "played": result.to_dict(), "replayed": again.to_dict()})
    rep.seconds = time.perf_counter() - t0
    return rep


def monotonicity_suite(samples: int = 0, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("monotonicity")
    t0 = time.perf_counter()
    for n, b_max in ((4, 6), (5, 4)):
        rep.samples += 1
        rep.checked += 1
        if not bias_monotonicity_check(hamilton_winning_sets(n), b_max):
            rep.counterexamples.append({"n": n, "b_max": b_max})
    rep.seconds = time.perf_counter() - t0
    return rep


_RUNNERS = {
    "lemma1": lemma1_suite,
    "lemma2": lemma2_suite,
    "booster-soundness": booster_soundness_suite,
    "replay": replay_suite,
    "monotonicity": monotonicity_suite,
}


def run_property_suite(suite: str, budget: int | None = None, seed: int = 0) -> SuiteReport:
    try:
        runner = _RUNNERS[suite]
    except KeyError:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}") from None
    if budget is None:
        return runner(seed=seed)
    return runner(budget, seed=seed)
