"""The congestion game with resource reuse: payoffs, perceived counts, NE queries.

A user's payoff on resource ``r`` depends only on how many members of its
closed interference neighborhood (itself included) sit on ``r``.  Payoff
tables are integer sequences indexed by that count starting at 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import PayoffError, ProfileError
from .graph import InterferenceGraph

Profile = tuple  # tuple[int, ...], one resource index per user


class Deviation(NamedTuple):
    user: int
    resource: int
    gain: int


@dataclass(frozen=True)
class NashVerdict:
    is_nash: bool
    witness: Deviation | None = None

    def __bool__(self):
        return self.is_nash


@dataclass(frozen=True)
class PayoffFamily:
    """Per-resource (``shared``) or per-(user, resource) (``per_user``) payoff tables.

    ``tables`` maps a resource index (shared) or a ``(user, resource)`` pair
    (per_user) to a tuple ``(g(1), g(2), ...)``.
    """

    num_resources: int
    mode: str
    tables: Mapping = field(hash=False)

    def __post_init__(self):
        if self.mode not in ("shared", "per_user"):
            raise PayoffError(f"unknown payoff mode {self.mode!r}")
        if self.num_resources < 1:
            raise PayoffError("need at least one resource")

    def table(self, i: int, r: int) -> tuple:
        return self.tables[r] if self.mode == "shared" else self.tables[(i, r)]


def _check_table(values, user, resource, need) -> tuple:
    vals = tuple(int(v) for v in values)
    if len(vals) < need:
        who = "shared" if user is None else f"user {user}"
        raise PayoffError(f"table for ({who}, resource {resource}) has {len(vals)} entries, "
                          f"needs {need}")
    for n in range(1, len(vals)):
        if vals[n] > vals[n - 1]:
            who = "shared" if user is None else user
            raise PayoffError(f"table not non-increasing at (user={who}, resource={resource}, "
                              f"n={n + 1}): g({n + 1})={vals[n]} > g({n})={vals[n - 1]}")
    return vals[:need]


@dataclass(frozen=True)
class Game:
    """An interference graph together with a validated payoff family.

    Tables longer than needed are truncated (shared: to ``max |N_i|``,
    per-user: to ``|N_i|``); shorter or increasing tables are rejected.
    """

    graph: InterferenceGraph
    payoffs: PayoffFamily

    def __post_init__(self):
        g, pf = self.graph, self.payoffs
        R = pf.num_resources
        if pf.mode == "shared":
            need = g.max_closed_size
            fixed = {}
            for r in range(R):
                if r not in pf.tables:
                    raise PayoffError(f"missing shared table for resource {r}")
                fixed[r] = _check_table(pf.tables[r], None, r, need)
        else:
            fixed = {}
            for i in range(g.num_users):
                for r in range(R):
                    if (i, r) not in pf.tables:
                        raise PayoffError(f"missing table for (user {i}, resource {r})")
                    fixed[(i, r)] = _check_table(pf.tables[(i, r)], i, r, g.closed_size(i))
        object.__setattr__(self, "payoffs", PayoffFamily(R, pf.mode, fixed))

    @classmethod
    def shared(cls, graph: InterferenceGraph, tables: Sequence[Sequence[int]]) -> Game:
        return cls(graph, PayoffFamily(len(tables), "shared", dict(enumerate(tables))))

    @classmethod
    def per_user(cls, graph: InterferenceGraph, tables) -> Game:
        """``tables`` is either ``{(i, r): seq}`` or a nested ``tables[i][r]`` list."""
        if isinstance(tables, Mapping):
            R = 1 + max(r for _, r in tables)
            flat = dict(tables)
        else:
            R = len(tables[0])
            flat = {(i, r): t for i, row in enumerate(tables) for r, t in enumerate(row)}
        return cls(graph, PayoffFamily(R, "per_user", flat))

    @property
    def num_users(self) -> int:
        return self.graph.num_users

    @property
    def num_resources(self) -> int:
        return self.payoffs.num_resources

    @cached_property
    def lookup(self) -> tuple:
        """``lookup[i][r][n-1] == g^i_r(n)`` truncated to ``|N_i|`` entries."""
        pf = self.payoffs
        return tuple(
            tuple(pf.table(i, r)[: self.graph.closed_size(i)] for r in range(self.num_resources))
            for i in range(self.num_users)
        )

    @cached_property
    def table_array(self) -> np.ndarray:
        """Dense ``(N, R, max|N_i|)`` int64 copy; per-user tails padded with the last value."""
        L = self.graph.max_closed_size
        out = np.empty((self.num_users, self.num_resources, L), dtype=np.int64)
        for i, row in enumerate(self.lookup):
            for r, t in enumerate(row):
                out[i, r, : len(t)] = t
                out[i, r, len(t):] = t[-1]
        return out

    def identical_across_resources(self) -> bool:
        return all(len(set(row)) == 1 for row in self.lookup)

    def check_profile(self, profile: Sequence[int]) -> Profile:
        prof = tuple(int(x) for x in profile)
        if len(prof) != self.num_users:
            raise ProfileError(f"profile has {len(prof)} entries, game has {self.num_users} users")
        for i, r in enumerate(prof):
            if not 0 <= r < self.num_resources:
                raise ProfileError(f"user {i}: resource {r} out of range [0, {self.num_resources})")
        return prof

    def _check_user(self, i):
        if not 0 <= i < self.num_users:
            raise IndexError(f"user {i} out of range [0, {self.num_users})")

    def _check_resource(self, r):
        if not 0 <= r < self.num_resources:
            raise IndexError(f"resource {r} out of range [0, {self.num_resources})")

    # --- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        pf = self.payoffs
        if pf.mode == "shared":
            tables = {str(r): list(pf.tables[r]) for r in range(pf.num_resources)}
        else:
            tables = {f"{i},{r}": list(pf.tables[(i, r)])
                      for i in range(self.num_users) for r in range(pf.num_resources)}
        return {**self.graph.to_dict(), "num_resources": pf.num_resources,
                "payoffs": {"mode": pf.mode, "tables": tables}}

    @classmethod
    def from_dict(cls, d: Mapping) -> Game:
        graph = InterferenceGraph.from_dict(d)
        try:
            R = int(d["num_resources"])
            mode = d["payoffs"]["mode"]
            raw = d["payoffs"]["tables"]
        except (KeyError, TypeError) as exc:
            raise PayoffError(f"malformed payoffs section: {exc}") from None
        tables = {}
        for key, seq in raw.items():
            if mode == "shared":
                tables[int(key)] = seq
            else:
                i, r = (int(x) for x in str(key).split(","))
                tables[(i, r)] = seq
        return cls(graph, PayoffFamily(R, mode, tables))

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path) -> Game:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise PayoffError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)


def perceived_count(game: Game, profile: Sequence[int], i: int, r: int) -> int:
    """Number of users in ``N_i`` (``i`` included) on resource ``r``."""
    game._check_user(i)
    game._check_resource(r)
    n = sum(1 for j in game.graph.adjacency[i] if profile[j] == r)
    return n + (profile[i] == r)


def payoff(game: Game, profile: Sequence[int], i: int) -> int:
    s = profile[i]
    n = perceived_count(game, profile, i, s)
    return game.lookup[i][s][n - 1]


def deviation_gain(game: Game, profile: Sequence[int], i: int, r: int) -> int:
    """Payoff change for ``i`` moving unilaterally to ``r``."""
    if profile[i] == r:
        raise ProfileError(f"user {i} is already on resource {r}")
    after = perceived_count(game, profile, i, r) + 1
    table = game.lookup[i][r]
    assert after <= len(table)
    return table[after - 1] - payoff(game, profile, i)


def _gains(game: Game, profile: Sequence[int], i: int) -> list:
    # one neighbor scan for all resources
    R = game.num_resources
    cnt = [0] * R
    for j in game.graph.adjacency[i]:
        cnt[profile[j]] += 1
    tabs = game.lookup[i]
    s = profile[i]
    cur = tabs[s][cnt[s]]
    return [None if r == s else tabs[r][cnt[r]] - cur for r in range(R)]


def best_deviation(game: Game, profile: Sequence[int], i: int) -> Deviation | None:
    """Strictly improving move with maximum gain (lowest resource on ties), or None."""
    game._check_user(i)
    best = None
    for r, g in enumerate(_gains(game, profile, i)):
        if g is not None and g > 0 and (best is None or g > best.gain):
            best = Deviation(i, r, g)
    return best


def first_improving(game: Game, profile: Sequence[int], i: int) -> Deviation | None:
    """Lowest-indexed strictly improving move, or None."""
    game._check_user(i)
    for r, g in enumerate(_gains(game, profile, i)):
        if g is not None and g > 0:
            return Deviation(i, r, g)
    return None


def is_nash(game: Game, profile: Sequence[int]) -> NashVerdict:
    prof = game.check_profile(profile)
    for i in range(game.num_users):
        dev = best_deviation(game, prof, i)
        if dev is not None:
            return NashVerdict(False, dev)
    return NashVerdict(True)
