"""Shared fixtures and first-principles oracles.

The oracles below deliberately avoid the library's payoff code: they recount
neighbors straight from the edge list and enumerate profiles with
itertools.product.
"""

import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from cgrr import Game, InterferenceGraph, build_graph


def naive_payoff(game, profile, i):
    r = profile[i]
    n = 1 + sum(1 for a, b in game.graph.edges
                if (a == i and profile[b] == r) or (b == i and profile[a] == r))
    return game.payoffs.table(i, r)[n - 1]


def naive_improvements(game, profile):
    """All (user, resource, new_profile) strict unilateral improvements."""
    out = []
    for i in range(game.num_users):
        cur = naive_payoff(game, profile, i)
        for r in range(game.num_resources):
            if r == profile[i]:
                continue
            moved = profile[:i] + (r,) + profile[i + 1:]
            if naive_payoff(game, moved, i) > cur:
                out.append((i, r, moved))
    return out


def all_profiles(game):
    # user 0 least significant, matching the library's enumeration order
    for digits in itertools.product(range(game.num_resources), repeat=game.num_users):
        yield tuple(reversed(digits))


def naive_nash(game):
    return sorted((p for p in all_profiles(game) if not naive_improvements(game, p)),
                  key=lambda p: tuple(reversed(p)))


def naive_improvement_digraph(game):
    g = nx.DiGraph()
    for p in all_profiles(game):
        g.add_node(p)
        for _, _, q in naive_improvements(game, p):
            g.add_edge(p, q)
    return g


@pytest.fixture
def k2():
    return Game.shared(build_graph("complete", 2), [[10, 4], [10, 4]])


@pytest.fixture
def k3():
    return Game.shared(build_graph("complete", 3), [[5, 3, 1], [4, 2, 0]])


# frozen from randomized probing: the smallest improvement loops we found
LOOP_TRIANGLE_PER_USER = {
    "num_users": 4, "edges": [[1, 2], [1, 3], [2, 3]], "num_resources": 3,
    "payoffs": {"mode": "per_user", "tables": {
        "0,0": [13], "0,1": [17], "0,2": [4],
        "1,0": [18, 17, 16], "1,1": [16, 3, 0], "1,2": [17, 6, 1],
        "2,0": [18, 7, 5], "2,1": [19, 11, 6], "2,2": [17, 16, 9],
        "3,0": [19, 17, 6], "3,1": [17, 14, 3], "3,2": [20, 4, 1]}}}

LOOP_SHARED_5 = {
    "num_users": 5, "edges": [[0, 2], [0, 4], [1, 2], [1, 3], [1, 4], [2, 3], [2, 4]],
    "num_resources": 3,
    "payoffs": {"mode": "shared", "tables": {
        "0": [19, 11, 11, 8, 4], "1": [18, 17, 8, 3, 1], "2": [12, 9, 6, 6, 2]}}}


@pytest.fixture(params=["triangle_per_user", "shared_5"])
def looping_game(request):
    data = LOOP_TRIANGLE_PER_USER if request.param == "triangle_per_user" else LOOP_SHARED_5
    return Game.from_dict(data)


# --------------------------------------------------------------------------
# hypothesis strategies

@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return InterferenceGraph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def _table(draw, length, high):
    vals = draw(st.lists(st.integers(0, high), min_size=length, max_size=length))
    return sorted(vals, reverse=True)


@st.composite
def games(draw, min_n=1, max_n=5, max_r=3, mode=None, high=20, graph=None):
    g = draw(graphs(min_n, max_n)) if graph is None else graph
    R = draw(st.integers(1, max_r))
    mode = mode or draw(st.sampled_from(["shared", "per_user"]))
    if mode == "shared":
        return Game.shared(g, [_table(draw, g.max_closed_size, high) for _ in range(R)])
    return Game.per_user(g, {(i, r): _table(draw, g.closed_size(i), high)
                             for i in range(g.num_users) for r in range(R)})


@st.composite
def game_and_profile(draw, **kw):
    game = draw(games(**kw))
    prof = tuple(draw(st.lists(st.integers(0, game.num_resources - 1),
                               min_size=game.num_users, max_size=game.num_users)))
    return game, prof


def rng(seed):
    return np.random.default_rng(seed)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the terminal summary and echo it immediately."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        lines.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
