"""Seeded random instances: payoff tables, games, and precondition-satisfying families."""

from __future__ import annotations

import numpy as np

from .game import Game
from .graph import InterferenceGraph, build_graph


def random_table(rng: np.random.Generator, length: int, low: int = 0, high: int = 100,
                 top: int | None = None) -> list[int]:
    """Non-increasing integers in ``[low, high]``; ``top`` caps the first entry."""
    hi = high if top is None else min(top, high)
    vals = rng.integers(low, hi + 1, size=length)
    return sorted((int(v) for v in vals), reverse=True)


def random_game(rng: np.random.Generator, graph: InterferenceGraph, num_resources: int,
                mode: str = "per_user", low: int = 0, high: int = 100) -> Game:
    if mode == "shared":
        L = graph.max_closed_size
        return Game.shared(graph, [random_table(rng, L, low, high) for _ in range(num_resources)])
    tables = {(i, r): random_table(rng, graph.closed_size(i), low, high)
              for i in range(graph.num_users) for r in range(num_resources)}
    return Game.per_user(graph, tables)


def identical_game(rng: np.random.Generator, graph: InterferenceGraph, num_resources: int,
                   low: int = 0, high: int = 100) -> Game:
    t = random_table(rng, graph.max_closed_size, low, high)
    return Game.shared(graph, [t] * num_resources)


def tree_game(rng: np.random.Generator, graph: InterferenceGraph, num_resources: int,
              high: int = 100) -> Game:
    """Shared tables with ``g_(2)(1) >= g_(1)(2)`` after ranking by ``g(1)``."""
    L = graph.max_closed_size
    first = random_table(rng, L, 0, high)
    second_top = int(rng.integers(first[1] if L > 1 else 0, first[0] + 1))
    second = random_table(rng, L, 0, high, top=second_top)
    second[0] = second_top
    tables = [first, second] + [random_table(rng, L, 0, high, top=second_top)
                                for _ in range(num_resources - 2)]
    perm = rng.permutation(num_resources)
    return Game.shared(graph, [tables[k] for k in perm])


def dominating_game(rng: np.random.Generator, graph: InterferenceGraph, num_resources: int,
                    high: int = 100) -> Game:
    """Shared tables where one resource's worst value beats every other's best."""
    L = graph.max_closed_size
    floor = int(rng.integers(0, high + 1))
    dom = random_table(rng, L, floor, high)
    dom[-1] = floor
    others = [random_table(rng, L, 0, high, top=floor) for _ in range(num_resources - 1)]
    tables = others + [dom]
    perm = rng.permutation(num_resources)
    return Game.shared(graph, [tables[k] for k in perm])


def topology_instance(topology: str, seed: int, n: int | None = None,
                      num_resources: int | None = None) -> Game:
    """A random shared-payoff game meeting the named constructor's preconditions."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(3 if topology == "cycle" else 1, 9))
    if num_resources is None:
        num_resources = int(rng.integers(2, 5))
    if topology == "complete":
        return random_game(rng, build_graph("complete", n), num_resources, "shared")
    if topology == "tree":
        return tree_game(rng, build_graph("random_tree", n, seed=seed), num_resources)
    if topology == "star":
        return random_game(rng, build_graph("star", n), num_resources, "shared")
    if topology == "cycle":
        return random_game(rng, build_graph("cycle", max(n, 3)), num_resources, "shared")
    if topology == "path":
        return random_game(rng, build_graph("path", n), num_resources, "shared")
    if topology == "dominating":
        graph = build_graph("gnp_random", n, p=float(rng.uniform(0.2, 0.8)), seed=seed)
        return dominating_game(rng, graph, num_resources)
    raise ValueError(f"unknown topology {topology!r}")
