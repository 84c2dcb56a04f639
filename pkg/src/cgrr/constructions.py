"""Constructive Nash equilibria for structured instances, and the 3-color loop gadget."""

from __future__ import annotations

from dataclasses import dataclass

from . import dynamics
from .errors import ConstructionError, PreconditionError
from .game import Game, is_nash, payoff, perceived_count
from .graph import InterferenceGraph, bfs_depths, classify, walk_order


def _shared_tables(game: Game, what: str) -> dict:
    if game.payoffs.mode != "shared":
        raise PreconditionError(f"{what} construction needs shared payoff tables")
    return game.payoffs.tables


def _ranked(tables: dict) -> list[int]:
    """Resources by ``g(1)`` descending, lowest index first on ties."""
    return sorted(tables, key=lambda r: (-tables[r][0], r))


def _require(game: Game, tag: str, what: str):
    if not classify(game.graph)[tag]:
        raise PreconditionError(f"graph is not a {what}")


def _verified(game: Game, profile, what: str) -> tuple:
    prof = tuple(profile)
    verdict = is_nash(game, prof)
    if not verdict:
        raise ConstructionError(f"{what} construction produced a non-equilibrium "
                                f"{prof}: {verdict.witness}")
    return prof


def _best_response_from(game: Game, start) -> tuple:
    trace = dynamics.run(game, start, dynamics.Scheduler.round_robin(),
                         max_steps=10 ** 7)
    return trace.terminal


def construct_ne_complete(game: Game) -> tuple:
    """Round-robin best response from everyone on the best single-user resource."""
    g = _shared_tables(game, "complete-graph")
    _require(game, "is_complete", "complete graph")
    top = _ranked(g)[0]
    prof = _best_response_from(game, [top] * game.num_users)
    return _verified(game, prof, "complete-graph")


def construct_ne_tree(game: Game, root: int = 0) -> tuple:
    """Even depths on the top resource, odd depths on the runner-up."""
    g = _shared_tables(game, "tree")
    _require(game, "is_tree", "tree")
    if game.num_resources < 2:
        raise PreconditionError("tree construction needs at least two resources")
    first, second = _ranked(g)[:2]
    n = game.num_users
    if n > 1 and g[second][0] < g[first][1]:
        raise PreconditionError(
            f"need g_2(1) >= g_1(2) for ranked resources ({second}, {first}): "
            f"{g[second][0]} < {g[first][1]}")
    depth = bfs_depths(game.graph, root)
    prof = [first if d % 2 == 0 else second for d in depth]
    return _verified(game, prof, "tree")


def construct_ne_star(game: Game) -> tuple:
    g = _shared_tables(game, "star")
    _require(game, "is_star", "star")
    n = game.num_users
    ranked = _ranked(g)
    first = ranked[0]
    if n == 1 or game.num_resources == 1:
        return _verified(game, [first] * n, "star")
    second = ranked[1]
    center = max(range(n), key=lambda i: (game.graph.degree(i), -i))
    if g[second][0] >= g[first][n - 1]:
        prof = [first] * n
        prof[center] = second
    else:
        prof = [first] * n
    return _verified(game, prof, "star")


def construct_ne_cycle(game: Game) -> tuple:
    """Two- or three-color equilibrium on a ring.

    Rings of three users are complete graphs; odd rings with only two
    resources fall back to best-response dynamics (finite for two colors).
    """
    g = _shared_tables(game, "cycle")
    _require(game, "is_cycle", "cycle")
    n = game.num_users
    if n == 3:
        return construct_ne_complete(game)
    ranked = _ranked(g)
    r = ranked[0]
    if game.num_resources == 1:
        return _verified(game, [r] * n, "cycle")
    b = ranked[1]
    order = walk_order(game.graph)
    prof = [r] * n
    if g[r][2] >= g[b][0]:
        return _verified(game, prof, "cycle")
    if n % 2 == 0:
        for k, u in enumerate(order):
            prof[u] = r if k % 2 == 0 else b
        return _verified(game, prof, "cycle")
    if game.num_resources == 2:
        return _verified(game, _best_response_from(game, prof), "cycle")
    p = ranked[2]
    # walk positions 1..n-2 alternate r, b, ..., r; ends at 0 and n-1 get resolved below
    for k in range(1, n - 1):
        prof[order[k]] = r if k % 2 == 1 else b
    gb2, gr2, gp1 = g[b][1], g[r][1], g[p][0]
    if gb2 >= gr2:
        last = b if gb2 >= gp1 else p
    else:
        last = r if gr2 >= gp1 else p
    prof[order[0]] = b
    prof[order[-1]] = last
    return _verified(game, prof, "cycle")


def construct_ne_path(game: Game) -> tuple:
    """At most two colors on a chain: all on the top resource, or alternate."""
    g = _shared_tables(game, "path")
    _require(game, "is_path", "path")
    n = game.num_users
    ranked = _ranked(g)
    r = ranked[0]
    if n == 1 or game.num_resources == 1:
        return _verified(game, [r] * n, "path")
    b = ranked[1]
    order = walk_order(game.graph)
    prof = [r] * n
    if n == 2:
        if g[r][1] < g[b][0]:
            prof[order[1]] = b
        return _verified(game, prof, "path")
    if g[r][2] >= g[b][0]:
        return _verified(game, prof, "path")
    for k, u in enumerate(order):
        prof[u] = r if k % 2 == 0 else b
    if n % 2 == 0 and g[r][1] > g[b][0]:
        # an end user on b would rather share r with its single neighbor
        prof[order[-1]] = r
    return _verified(game, prof, "path")


def dominating_resource(game: Game) -> int | None:
    """Lowest-indexed ``r`` with ``g_r(N_d) >= g_s(1)`` for every other ``s``.

    ``N_d = max |N_i|`` is the largest closed neighborhood.  Comparing ``r``
    against its own ``g_r(1)`` is unnecessary for the all-on-``r`` equilibrium
    and is skipped.
    """
    g = _shared_tables(game, "dominating-resource")
    nd = game.graph.max_closed_size
    for r in sorted(g):
        rivals = [g[s][0] for s in g if s != r]
        if not rivals or g[r][nd - 1] >= max(rivals):
            return r
    return None


def construct_ne_dominating(game: Game) -> tuple:
    r = dominating_resource(game)
    if r is None:
        raise PreconditionError("no dominating resource: every g_r(N_d) falls below some g_s(1)")
    return _verified(game, [r] * game.num_users, "dominating-resource")


CONSTRUCTORS = {
    "complete": construct_ne_complete,
    "tree": construct_ne_tree,
    "star": construct_ne_star,
    "cycle": construct_ne_cycle,
    "path": construct_ne_path,
    "dominating": construct_ne_dominating,
}


def construct(game: Game, topology: str) -> tuple:
    try:
        fn = CONSTRUCTORS[topology]
    except KeyError:
        raise PreconditionError(f"unknown topology {topology!r}") from None
    return fn(game)


# --------------------------------------------------------------------------
# three-color improvement loop

RED, PURPLE, BLUE = 0, 1, 2
COLOR_NAMES = {RED: "r", PURPLE: "p", BLUE: "b"}
A, B, C, D = 0, 1, 2, 3
CORE_NAMES = {A: "A", B: "B", C: "C", D: "D"}
STUB_COUNTS = {A: 5, B: 3, C: 7, D: 1}

INITIAL_CORE = {A: BLUE, B: PURPLE, C: PURPLE, D: BLUE}
SCRIPT = (
    (A, RED), (B, RED), (D, RED), (C, RED), (A, PURPLE), (D, BLUE),
    (B, BLUE), (C, BLUE), (A, BLUE), (C, PURPLE), (B, PURPLE),
)
# strictly decreasing: each term's payoff exceeds the next one's
CHAIN = (
    (RED, 2), (BLUE, 2), (RED, 3), (RED, 4), (PURPLE, 5), (BLUE, 4), (RED, 5),
    (RED, 6), (BLUE, 6), (BLUE, 7), (PURPLE, 6), (RED, 7), (BLUE, 10), (RED, 8),
    (RED, 11), (PURPLE, 8), (BLUE, 11),
)


@dataclass(frozen=True)
class CounterexampleBundle:
    game: Game
    core: tuple
    initial: tuple
    script: tuple
    chain: tuple

    def to_dict(self) -> dict:
        return {
            "game": self.game.to_dict(),
            "core": dict(zip("ABCD", self.core)),
            "colors": {name: idx for idx, name in COLOR_NAMES.items()},
            "initial": list(self.initial),
            "script": [list(m) for m in self.script],
            "chain": [[r, n] for r, n in self.chain],
        }


def _gadget_graph() -> tuple[InterferenceGraph, tuple]:
    pairs = [(A, C), (B, C), (D, C)]
    colors = [INITIAL_CORE[w] for w in (A, B, C, D)]
    nxt = 4
    for w in (A, B, C, D):
        for x in (RED, PURPLE, BLUE):
            for _ in range(STUB_COUNTS[w]):
                pairs.append((w, nxt))
                colors.append(x)
                nxt += 1
    return InterferenceGraph.from_edges(nxt, pairs), tuple(colors)


def _synthesize_tables(length: int) -> list[list[int]]:
    """Integer tables meeting the chain; unconstrained entries keep monotonicity."""
    size = len(CHAIN)
    fixed = {r: {} for r in (RED, PURPLE, BLUE)}
    for k, (r, n) in enumerate(CHAIN):
        fixed[r][n] = size - k
    tables = []
    for r in (RED, PURPLE, BLUE):
        known = fixed[r]
        lo, hi = min(known), max(known)
        t = [0] * (length + 1)  # 1-based
        for n in range(lo, 0, -1):
            t[n] = known[lo] + (lo - n)
        for n in range(lo + 1, hi + 1):
            t[n] = known.get(n, t[n - 1])
        for n in range(hi + 1, length + 1):
            t[n] = max(known[hi] - 1, 0)
        tables.append(t[1:])
    return tables


def _transition_terms(game: Game, initial, script):
    """For each scripted move, the (resource, count) terms it requires to compare."""
    prof = list(initial)
    terms = []
    for i, r in script:
        s = prof[i]
        before = (s, perceived_count(game, prof, i, s))
        after = (r, perceived_count(game, prof, i, r) + 1)
        terms.append((after, before))
        prof[i] = r
    return terms, tuple(prof)


def _verify_bundle(game: Game, initial, tables):
    pos = {term: k for k, term in enumerate(CHAIN)}
    for k in range(len(CHAIN) - 1):
        (r1, n1), (r2, n2) = CHAIN[k], CHAIN[k + 1]
        if not tables[r1][n1 - 1] > tables[r2][n2 - 1]:
            raise ConstructionError(f"chain inequality {k + 1} fails: "
                                    f"g_{COLOR_NAMES[r1]}({n1}) <= g_{COLOR_NAMES[r2]}({n2})")
    for r, t in enumerate(tables):
        if any(t[n] > t[n - 1] for n in range(1, len(t))):
            raise ConstructionError(f"table for resource {r} is not non-increasing")
    terms, terminal = _transition_terms(game, initial, SCRIPT)
    for step, (after, before) in enumerate(terms, start=1):
        # core adjacency must make every move compare two chain terms in chain order
        if after not in pos or before not in pos or pos[after] >= pos[before]:
            raise ConstructionError(f"script step {step} compares {after} against {before}, "
                                    "which the chain does not order")
    if terminal != tuple(initial):
        raise ConstructionError("script does not return to the initial profile")


def build_counterexample() -> CounterexampleBundle:
    """The 52-user, 3-color gadget carrying an 11-move improvement loop."""
    graph, initial = _gadget_graph()
    tables = _synthesize_tables(graph.max_closed_size)
    game = Game.shared(graph, tables)
    _verify_bundle(game, initial, tables)
    return CounterexampleBundle(game, (A, B, C, D), initial, SCRIPT, CHAIN)


def replay_counterexample(bundle: CounterexampleBundle) -> dynamics.Trace:
    trace = dynamics.replay(bundle.game, bundle.initial, bundle.script)
    if trace.outcome != dynamics.CYCLE:
        raise ConstructionError(f"gadget replay ended with {trace.outcome}")
    return trace


def step_payoffs(bundle: CounterexampleBundle) -> list[tuple[int, int]]:
    """(old, new) payoff of each scripted mover computed directly from the game."""
    prof = list(bundle.initial)
    out = []
    for i, r in bundle.script:
        old = payoff(bundle.game, prof, i)
        prof[i] = r
        out.append((old, payoff(bundle.game, prof, i)))
    return out
