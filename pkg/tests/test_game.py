import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgrr import (Game, InterferenceGraph, PayoffError, ProfileError, best_deviation,
                  build_graph, deviation_gain, is_nash, payoff, perceived_count)
from cgrr.constructions import build_counterexample, dominating_resource
from cgrr.game import first_improving

from conftest import game_and_profile, naive_improvements, naive_payoff


def test_perceived_count_k3(k3):
    assert perceived_count(k3, (0, 0, 1), 0, 0) == 2
    assert perceived_count(k3, (0, 0, 1), 2, 0) == 2
    assert perceived_count(k3, (0, 0, 1), 2, 1) == 1


def test_isolated_user():
    g = InterferenceGraph.from_edges(3, [(0, 1)])
    game = Game.shared(g, [[10, 4], [7, 1]])
    for r in range(2):
        prof = (0, 0, r)
        assert perceived_count(game, prof, 2, r) == 1
    assert payoff(game, (0, 0, 0), 2) == 10
    assert deviation_gain(game, (0, 0, 0), 2, 1) == 7 - 10


def test_k2_payoffs_and_gain(k2):
    assert payoff(k2, (0, 0), 0) == payoff(k2, (0, 0), 1) == 4
    assert deviation_gain(k2, (0, 0), 0, 1) == 6
    assert best_deviation(k2, (0, 0), 1) == (1, 1, 6)
    assert best_deviation(k2, (0, 1), 0) is None


def test_no_op_deviation_rejected(k2):
    with pytest.raises(ProfileError):
        deviation_gain(k2, (0, 1), 0, 0)


def test_best_deviation_tie_breaks_low():
    game = Game.shared(build_graph("complete", 1), [[1], [5], [5]])
    assert best_deviation(game, (0,), 0) == (0, 1, 4)
    assert first_improving(game, (0,), 0) == (0, 1, 4)


def test_first_improving_differs_from_best():
    game = Game.shared(build_graph("complete", 1), [[1], [3], [9]])
    assert first_improving(game, (0,), 0).resource == 1
    assert best_deviation(game, (0,), 0).resource == 2


def test_is_nash_k2(k2):
    assert is_nash(k2, (0, 1))
    assert is_nash(k2, (1, 0))
    v = is_nash(k2, (0, 0))
    assert not v
    assert v.witness == (0, 1, 6)


def test_is_nash_dominating():
    g = build_graph("gnp_random", 7, p=0.5, seed=2)
    L = g.max_closed_size
    game = Game.shared(g, [[9] * L, [8] * L])
    assert dominating_resource(game) == 0
    assert is_nash(game, (0,) * 7)


def test_gadget_counts():
    b = build_counterexample()
    game, init = b.game, b.initial
    # at t=0 both B and C sit on purple, so C perceives its 7 purple stubs, B and itself
    assert perceived_count(game, init, 2, 1) == 9
    prof = list(init)
    for i, r in b.script[:3]:
        prof[i] = r
    # just before step 4 (C: p -> r) the count is C_p + 1
    assert perceived_count(game, prof, 2, 1) == 8
    assert payoff(game, prof, 2) == game.payoffs.tables[1][7]
    # step 1: A moving b -> r compares g_r(A_r + 1) against g_b(A_b + 1)
    t = game.payoffs.tables
    assert deviation_gain(game, init, 0, 0) == t[0][5] - t[2][5] > 0


def test_validation_messages():
    g = build_graph("path", 2)
    with pytest.raises(PayoffError, match=r"user=shared, resource=1, n=2"):
        Game.shared(g, [[3, 2], [3, 4]])
    with pytest.raises(PayoffError, match="needs 2"):
        Game.shared(g, [[3], [3, 1]])
    with pytest.raises(PayoffError, match=r"user=1, resource=0, n=2"):
        Game.per_user(g, {(0, 0): [5, 1], (1, 0): [1, 2]})
    with pytest.raises(PayoffError, match="missing"):
        Game.per_user(g, {(0, 0): [5, 1], (0, 1): [5, 1], (1, 0): [5, 1]})


def test_long_tables_truncated():
    g = build_graph("path", 3)
    game = Game.shared(g, [[9, 8, 7, 6, 5], [5, 5, 5]])
    assert game.payoffs.tables[0] == (9, 8, 7)
    pu = Game.per_user(g, [[[4, 3, 2], [1, 1, 1]]] * 3)
    assert pu.payoffs.tables[(0, 0)] == (4, 3)
    assert pu.payoffs.tables[(1, 0)] == (4, 3, 2)


def test_profile_validation(k2):
    with pytest.raises(ProfileError):
        is_nash(k2, (0,))
    with pytest.raises(ProfileError):
        is_nash(k2, (0, 2))
    with pytest.raises(IndexError):
        perceived_count(k2, (0, 0), 5, 0)


def test_game_json_roundtrip(tmp_path):
    g = build_graph("gnp_random", 6, p=0.5, seed=3)
    tables = {(i, r): [10 - r, 5, 5, 4, 1, 0, 0][: g.closed_size(i)]
              for i in range(6) for r in range(3)}
    game = Game.per_user(g, tables)
    path = tmp_path / "g.json"
    game.save(path)
    assert Game.load(path) == game
    data = json.loads(path.read_text())
    assert set(data) == {"num_users", "edges", "num_resources", "payoffs"}
    assert data["payoffs"]["mode"] == "per_user"
    assert "0,2" in data["payoffs"]["tables"]


@settings(max_examples=200)
@given(game_and_profile())
def test_payoff_matches_first_principles(gp):
    game, prof = gp
    for i in range(game.num_users):
        assert payoff(game, prof, i) == naive_payoff(game, prof, i)
        assert 1 <= perceived_count(game, prof, i, prof[i]) <= game.graph.closed_size(i)


@settings(max_examples=200)
@given(game_and_profile())
def test_is_nash_agrees_with_naive(gp):
    game, prof = gp
    improving = naive_improvements(game, prof)
    v = is_nash(game, prof)
    assert v.is_nash == (not improving)
    if not v:
        i, r, gain = v.witness
        assert gain > 0 and gain == deviation_gain(game, prof, i, r)


@given(game_and_profile(min_n=2), st.data())
def test_same_resource_neighbor_never_helps(gp, data):
    game, prof = gp
    i = data.draw(st.integers(0, game.num_users - 1))
    nbrs = [j for j in game.graph.adjacency[i] if prof[j] != prof[i]]
    if not nbrs:
        return
    j = data.draw(st.sampled_from(nbrs))
    joined = prof[:j] + (prof[i],) + prof[j + 1:]
    assert payoff(game, joined, i) <= payoff(game, prof, i)
