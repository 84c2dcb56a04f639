import pytest
from hypothesis import given

from cgrr import GraphError, InterferenceGraph, build_graph, classify, neighbors
from cgrr.constructions import build_counterexample
from cgrr.graph import walk_order

from conftest import graphs


def test_complete_k3():
    assert build_graph("complete", 3).edges == {(0, 1), (0, 2), (1, 2)}


def test_star_center_is_zero():
    g = build_graph("star", 4)
    assert g.edges == {(0, 1), (0, 2), (0, 3)}
    assert neighbors(g, 0) == {1, 2, 3}
    assert neighbors(g, 2) == {0}


def test_gnp_is_deterministic():
    a = build_graph("gnp_random", 6, p=0.5, seed=42)
    b = build_graph("gnp_random", 6, p=0.5, seed=42)
    assert a == b
    assert build_graph("random_tree", 9, seed=5) == build_graph("random_tree", 9, seed=5)


def test_gadget_center_degree():
    g = build_counterexample().game.graph
    assert len(neighbors(g, 2)) == 24
    assert {0, 1, 3} <= neighbors(g, 2)


@pytest.mark.parametrize("kwargs", [
    dict(kind="edge_list", n=3, edges=[(0, 3)]),
    dict(kind="edge_list", n=3, edges=[(1, 1)]),
    dict(kind="complete", n=0),
    dict(kind="cycle", n=2),
    dict(kind="gnp_random", n=4, p=0.5),
    dict(kind="hypercube", n=4),
])
def test_build_errors(kwargs):
    kind = kwargs.pop("kind")
    with pytest.raises(GraphError):
        build_graph(kind, **kwargs)


def test_neighbors_out_of_range():
    with pytest.raises(IndexError):
        neighbors(build_graph("path", 3), 3)


def test_asymmetric_neighborhoods_rejected():
    ok = InterferenceGraph.from_neighborhoods([{0, 1}, {0, 1, 2}, {1, 2}])
    assert ok.edges == {(0, 1), (1, 2)}
    with pytest.raises(GraphError, match="asymmetric"):
        InterferenceGraph.from_neighborhoods([{1}, set()])


def test_classify_examples():
    k4 = classify(build_graph("complete", 4))
    assert k4["is_complete"] and not k4["is_cycle"]
    p2 = classify(build_graph("path", 2))
    assert all(p2[t] for t in ("is_path", "is_tree", "is_star", "is_complete"))
    c3 = classify(build_graph("cycle", 3))
    assert c3["is_cycle"] and c3["is_complete"]
    c5 = classify(build_graph("cycle", 5))
    assert c5["is_cycle"] and not c5["is_tree"] and not c5["is_complete"]
    p5 = classify(build_graph("path", 5))
    assert p5["is_path"] and not p5["is_star"]
    disconnected = classify(InterferenceGraph.from_edges(4, [(0, 1), (2, 3)]))
    assert not disconnected["is_tree"] and not disconnected["is_path"]


def test_classify_generators():
    for seed in range(20):
        assert classify(build_graph("random_tree", 7, seed=seed))["is_tree"]
    assert classify(build_graph("star", 6))["is_star"]


def test_walk_order():
    g = InterferenceGraph.from_edges(4, [(2, 0), (0, 3), (3, 1)])
    assert walk_order(g) == [1, 3, 0, 2]
    c = build_graph("cycle", 5)
    assert walk_order(c) == [0, 1, 2, 3, 4]


def test_json_roundtrip():
    g = build_graph("gnp_random", 7, p=0.4, seed=1)
    d = g.to_dict()
    assert all(i < j for i, j in d["edges"])
    assert InterferenceGraph.from_dict(d) == g


@given(graphs(max_n=9))
def test_neighbor_symmetry_and_handshake(g):
    total = 0
    for i in range(g.num_users):
        ns = neighbors(g, i)
        assert i not in ns
        for j in ns:
            assert i in neighbors(g, j)
        total += len(ns)
    assert total == 2 * len(g.edges)


@given(graphs(max_n=9))
def test_classify_consistency(g):
    tags = classify(g)
    if tags["is_star"] or tags["is_path"]:
        assert tags["is_tree"]
    if tags["is_cycle"] and g.num_users == 3:
        assert tags["is_complete"]
    if tags["is_tree"]:
        assert len(g.edges) == g.num_users - 1
