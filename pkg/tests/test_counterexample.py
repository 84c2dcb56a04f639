import pytest

from cgrr import payoff, perceived_count
from cgrr.constructions import (BLUE, CHAIN, PURPLE, RED, SCRIPT, build_counterexample,
                                replay_counterexample, step_payoffs)
from cgrr.dynamics import CYCLE

# Per-step (resource, count) terms compared by each scripted move, derived by
# hand from the gadget: W has W_x stubs of each color x, plus C adjacent to A, B, D.
# Stub counts (A, B, C, D) = (5, 3, 7, 1).
EXPECTED_TERMS = [
    ((RED, 6), (BLUE, 6)),     # 1  A b->r: g_r(A_r+1) > g_b(A_b+1)
    ((RED, 4), (PURPLE, 5)),   # 2  B p->r: g_r(B_r+1) > g_p(B_p+2)
    ((RED, 2), (BLUE, 2)),     # 3  D b->r
    ((RED, 11), (PURPLE, 8)),  # 4  C p->r: g_r(C_r+4) > g_p(C_p+1)
    ((PURPLE, 6), (RED, 7)),   # 5  A r->p
    ((BLUE, 2), (RED, 3)),     # 6  D r->b
    ((BLUE, 4), (RED, 5)),     # 7  B r->b
    ((BLUE, 10), (RED, 8)),    # 8  C r->b: g_b(C_b+3) > g_r(C_r+1)
    ((BLUE, 7), (PURPLE, 6)),  # 9  A p->b
    ((PURPLE, 8), (BLUE, 11)),  # 10 C b->p
    ((PURPLE, 5), (BLUE, 4)),  # 11 B b->p
]


@pytest.fixture(scope="module")
def bundle():
    return build_counterexample()


def test_gadget_shape(bundle):
    g = bundle.game.graph
    assert g.num_users == 52
    assert bundle.game.num_resources == 3
    A, B, C, D = bundle.core
    assert {(A, C), (B, C), (C, D)} <= g.edges
    assert (A, B) not in g.edges and (A, D) not in g.edges and (B, D) not in g.edges
    assert g.degree(C) == 24 and g.degree(A) == 16 and g.degree(B) == 10 and g.degree(D) == 4
    assert bundle.initial[:4] == (BLUE, PURPLE, PURPLE, BLUE)
    # every stub has exactly one core neighbor
    assert all(g.degree(s) == 1 for s in range(4, 52))


def test_stub_colors(bundle):
    g, init = bundle.game.graph, bundle.initial
    for w, k in zip(bundle.core, (5, 3, 7, 1)):
        stubs = [j for j in g.adjacency[w] if j >= 4]
        for x in (RED, PURPLE, BLUE):
            assert sum(init[j] == x for j in stubs) == k


def test_chain_terms_from_counts(bundle):
    game = bundle.game
    prof = list(bundle.initial)
    for (i, r), (after, before) in zip(SCRIPT, EXPECTED_TERMS):
        s = prof[i]
        assert (s, perceived_count(game, prof, i, s)) == before
        assert (r, perceived_count(game, prof, i, r) + 1) == after
        prof[i] = r


def test_chain_holds(bundle):
    t = bundle.game.payoffs.tables
    assert len(CHAIN) == 17
    vals = [t[r][n - 1] for r, n in CHAIN]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert t[RED][1] > t[BLUE][1]
    assert (t[RED][1], t[BLUE][1]) == (17, 16)
    for r in range(3):
        assert all(a >= b for a, b in zip(t[r], t[r][1:]))


def test_replay(bundle):
    trace = replay_counterexample(bundle)
    assert len(trace) == 11
    assert all(e.new_payoff > e.old_payoff for e in trace.events)
    assert trace.terminal == trace.initial == bundle.initial
    assert trace.outcome == CYCLE
    assert [(e.mover, e.to_resource) for e in trace.events] == list(SCRIPT)


def test_step8(bundle):
    trace = replay_counterexample(bundle)
    t = bundle.game.payoffs.tables
    ev = trace.events[7]
    assert (ev.mover, ev.from_resource, ev.to_resource) == (2, RED, BLUE)
    assert (ev.old_payoff, ev.new_payoff) == (t[RED][7], t[BLUE][9])  # g_r(8), g_b(10)
    assert t[BLUE][9] > t[RED][7]


def test_step_payoffs_first_principles(bundle):
    trace = replay_counterexample(bundle)
    direct = step_payoffs(bundle)
    assert direct == [(e.old_payoff, e.new_payoff) for e in trace.events]
    assert all(new > old for old, new in direct)


def test_bundle_dict(bundle):
    d = bundle.to_dict()
    assert len(d["script"]) == 11 and len(d["chain"]) == 17
    assert d["core"] == {"A": 0, "B": 1, "C": 2, "D": 3}
    assert d["game"]["num_users"] == 52


def test_gadget_payoff_at_start(bundle):
    # C sits on purple with B and 7 purple stubs at t=0
    t = bundle.game.payoffs.tables
    assert payoff(bundle.game, bundle.initial, 2) == t[PURPLE][8]
