"""Symmetric interference graphs and topology generators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphError

KINDS = ("complete", "star", "path", "cycle", "random_tree", "gnp_random", "edge_list")


@dataclass(frozen=True)
class InterferenceGraph:
    """Undirected simple graph over users ``0..num_users-1``.

    ``edges`` holds each unordered pair once as ``(i, j)`` with ``i < j``.
    Use :meth:`from_edges` to build one from unnormalized input.
    """

    num_users: int
    edges: frozenset

    def __post_init__(self):
        if self.num_users < 1:
            raise GraphError(f"num_users must be >= 1, got {self.num_users}")
        for e in self.edges:
            i, j = e
            if not (0 <= i < j < self.num_users):
                raise GraphError(f"edge {e} is not a normalized pair in [0, {self.num_users})")

    @classmethod
    def from_edges(cls, num_users: int, pairs: Iterable[Sequence[int]]) -> InterferenceGraph:
        if num_users < 1:
            raise GraphError(f"num_users must be >= 1, got {num_users}")
        edges = set()
        for pair in pairs:
            if len(pair) != 2:
                raise GraphError(f"edge {pair!r} must have exactly two endpoints")
            i, j = int(pair[0]), int(pair[1])
            for v in (i, j):
                if not 0 <= v < num_users:
                    raise GraphError(f"edge ({i}, {j}): index {v} out of range [0, {num_users})")
            if i == j:
                raise GraphError(f"self-loop on user {i}")
            edges.add((min(i, j), max(i, j)))
        return cls(num_users, frozenset(edges))

    @classmethod
    def from_neighborhoods(cls, sets: Sequence[Iterable[int]]) -> InterferenceGraph:
        """Build from per-user interference sets, rejecting asymmetric relations.

        A user's own index may appear in its set (closed neighborhood) and is ignored.
        """
        n = len(sets)
        nbrs = [set(int(j) for j in s) - {i} for i, s in enumerate(sets)]
        pairs = []
        for i, s in enumerate(nbrs):
            for j in s:
                if not 0 <= j < n:
                    raise GraphError(f"user {i}: neighbor {j} out of range [0, {n})")
                if i not in nbrs[j]:
                    raise GraphError(f"asymmetric interference: {j} in N_{i} but {i} not in N_{j}")
                pairs.append((i, j))
        return cls.from_edges(n, pairs)

    @cached_property
    def adjacency(self) -> tuple:
        """Sorted neighbor tuple per user (self excluded)."""
        adj = [[] for _ in range(self.num_users)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` int64 arrays for the kernels."""
        deg = [len(a) for a in self.adjacency]
        indptr = np.zeros(self.num_users + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(deg)
        indices = np.fromiter((j for a in self.adjacency for j in a), dtype=np.int64,
                              count=int(indptr[-1]))
        return indptr, indices

    @cached_property
    def matrix(self) -> np.ndarray:
        a = np.zeros((self.num_users, self.num_users), dtype=np.int64)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def closed_size(self, i: int) -> int:
        """|N_i|: the user plus its interferers."""
        return len(self.adjacency[i]) + 1

    @property
    def max_closed_size(self) -> int:
        return max(len(a) for a in self.adjacency) + 1

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_dict(self) -> dict:
        return {"num_users": self.num_users, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, d: dict) -> InterferenceGraph:
        try:
            return cls.from_edges(int(d["num_users"]), d.get("edges", []))
        except KeyError as exc:
            raise GraphError(f"missing field {exc}") from None


def neighbors(g: InterferenceGraph, i: int) -> frozenset:
    """Interferers of ``i``, not including ``i`` itself."""
    if not 0 <= i < g.num_users:
        raise IndexError(f"user {i} out of range [0, {g.num_users})")
    return frozenset(g.adjacency[i])


def build_graph(kind: str, n: int | None = None, *, p: float | None = None,
                seed: int | None = None, edges: Iterable[Sequence[int]] | None = None
                ) -> InterferenceGraph:
    """Generate a graph of the named topology.

    ``star`` uses user 0 as the center; ``path`` and ``cycle`` link ``i`` to ``i+1``.
    ``random_tree`` attaches each user ``k > 0`` to a uniformly random earlier user.
    ``gnp_random`` includes each pair independently with probability ``p``;
    isolated users are allowed.
    """
    if kind not in KINDS:
        raise GraphError(f"unknown topology kind {kind!r}; expected one of {KINDS}")
    if n is None:
        raise GraphError(f"{kind} requires n")
    if n < 1:
        raise GraphError(f"n must be >= 1, got {n}")

    if kind == "complete":
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif kind == "star":
        pairs = [(0, j) for j in range(1, n)]
    elif kind == "path":
        pairs = [(i, i + 1) for i in range(n - 1)]
    elif kind == "cycle":
        if n < 3:
            raise GraphError(f"cycle needs n >= 3, got {n}")
        pairs = [(i, (i + 1) % n) for i in range(n)]
    elif kind == "random_tree":
        if seed is None:
            raise GraphError("random_tree requires a seed")
        rng = np.random.default_rng(seed)
        pairs = [(int(rng.integers(0, k)), k) for k in range(1, n)]
    elif kind == "gnp_random":
        if seed is None or p is None:
            raise GraphError("gnp_random requires p and seed")
        if not 0.0 <= p <= 1.0:
            raise GraphError(f"p must lie in [0, 1], got {p}")
        rng = np.random.default_rng(seed)
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(iu.size) < p
        pairs = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    else:
        if edges is None:
            raise GraphError("edge_list requires edges")
        pairs = edges
    return InterferenceGraph.from_edges(n, pairs)


def _connected(g: InterferenceGraph) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.num_users


def classify(g: InterferenceGraph) -> dict[str, bool]:
    n, m = g.num_users, len(g.edges)
    degs = [len(a) for a in g.adjacency]
    connected = _connected(g)
    is_tree = connected and m == n - 1
    return {
        "is_complete": m == n * (n - 1) // 2,
        "is_tree": is_tree,
        "is_star": is_tree and max(degs) == n - 1,
        "is_path": is_tree and max(degs) <= 2,
        "is_cycle": n >= 3 and connected and all(d == 2 for d in degs),
    }


def bfs_depths(g: InterferenceGraph, root: int = 0) -> list[int]:
    """Hop distance from ``root``; -1 for unreachable users."""
    depth = [-1] * g.num_users
    depth[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                queue.append(v)
    return depth


def walk_order(g: InterferenceGraph) -> list[int]:
    """Users in traversal order along a path or cycle.

    For a path the walk starts at the lowest-indexed endpoint; for a cycle at
    user 0 heading toward its smaller neighbor.
    """
    n = g.num_users
    if n == 1:
        return [0]
    ends = [i for i in range(n) if len(g.adjacency[i]) == 1]
    start = ends[0] if ends else 0
    order = [start]
    prev, cur = -1, start
    while len(order) < n:
        nxt = next(v for v in g.adjacency[cur] if v != prev)
        order.append(nxt)
        prev, cur = cur, nxt
    return order
