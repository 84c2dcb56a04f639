"""Asynchronous improvement dynamics, traces, and reverse-change diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ImprovementViolation, ProfileError, UnsupportedDiagnostic
from .game import Game, best_deviation, first_improving, is_nash, payoff

CONVERGED = "converged_ne"
STEP_LIMIT = "step_limit"
CYCLE = "cycle_detected"

MOVE_RULES = {"best_response": best_deviation, "first_improving": first_improving}

# uniform_random declares convergence only after this many skips per user
# and a clean exhaustive scan
RANDOM_SKIP_FACTOR = 32


@dataclass(frozen=True)
class UpdateEvent:
    time: int
    mover: int
    from_resource: int
    to_resource: int
    old_payoff: int
    new_payoff: int

    def to_dict(self) -> dict:
        return {"t": self.time, "mover": self.mover, "from": self.from_resource,
                "to": self.to_resource, "old_payoff": self.old_payoff,
                "new_payoff": self.new_payoff}


@dataclass(frozen=True)
class Trace:
    initial: tuple
    events: tuple
    terminal: tuple
    outcome: str

    def __len__(self):
        return len(self.events)

    def profiles(self) -> list[tuple]:
        """State before each event, followed by the terminal state."""
        cur = list(self.initial)
        out = [tuple(cur)]
        for ev in self.events:
            cur[ev.mover] = ev.to_resource
            out.append(tuple(cur))
        return out

    def is_loop(self) -> bool:
        return bool(self.events) and self.terminal == self.initial

    def to_jsonl(self) -> str:
        lines = [json.dumps({"initial": list(self.initial)})]
        lines += [json.dumps(ev.to_dict()) for ev in self.events]
        lines.append(json.dumps({"terminal": list(self.terminal), "outcome": self.outcome}))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> Trace:
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if len(rows) < 2 or "initial" not in rows[0] or "terminal" not in rows[-1]:
            raise ProfileError("trace needs a header and a footer line")
        events = tuple(UpdateEvent(r["t"], r["mover"], r["from"], r["to"], r["old_payoff"],
                                   r["new_payoff"]) for r in rows[1:-1])
        return cls(tuple(rows[0]["initial"]), events, tuple(rows[-1]["terminal"]),
                   rows[-1]["outcome"])

    @classmethod
    def load(cls, path) -> Trace:
        return cls.from_jsonl(Path(path).read_text())


@dataclass(frozen=True)
class Scheduler:
    """Which user gets the next chance to move.

    Build with :meth:`round_robin`, :meth:`uniform_random` or :meth:`fixed_sequence`.
    """

    kind: str
    seed: int | None = None
    sequence: tuple = ()

    @classmethod
    def round_robin(cls):
        return cls("round_robin")

    @classmethod
    def uniform_random(cls, seed: int):
        return cls("uniform_random", seed=seed)

    @classmethod
    def fixed_sequence(cls, users: Iterable[int]):
        return cls("fixed_sequence", sequence=tuple(int(u) for u in users))

    @classmethod
    def parse(cls, name: str, seed=None, sequence=None):
        name = name.replace("-", "_")
        if name == "round_robin":
            return cls.round_robin()
        if name in ("uniform_random", "random"):
            if seed is None:
                raise ValueError("random scheduler requires a seed")
            return cls.uniform_random(seed)
        if name in ("fixed_sequence", "sequence"):
            if sequence is None:
                raise ValueError("sequence scheduler requires a user sequence")
            return cls.fixed_sequence(sequence)
        raise ValueError(f"unknown scheduler {name!r}")


def run(game: Game, initial: Sequence[int], scheduler: Scheduler, max_steps: int,
        move_rule: str = "best_response") -> Trace:
    """Apply improving moves chosen by ``scheduler`` until NE or ``max_steps`` events."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    choose = MOVE_RULES[move_rule]
    prof = list(game.check_profile(initial))
    n = game.num_users
    events = []

    def move(i, dev):
        old = payoff(game, prof, i)
        frm = prof[i]
        prof[i] = dev.resource
        new = old + dev.gain
        events.append(UpdateEvent(len(events) + 1, i, frm, dev.resource, old, new))

    def finish(default):
        terminal = tuple(prof)
        if is_nash(game, terminal):
            outcome = CONVERGED
        elif default == STEP_LIMIT and events and terminal == tuple(initial):
            outcome = CYCLE
        else:
            outcome = default
        return Trace(tuple(initial), tuple(events), terminal, outcome)

    if scheduler.kind == "fixed_sequence":
        for pos, i in enumerate(scheduler.sequence, start=1):
            if not 0 <= i < n:
                raise ProfileError(f"sequence entry {pos}: user {i} out of range [0, {n})")
            if len(events) >= max_steps:
                return finish(STEP_LIMIT)
            dev = choose(game, prof, i)
            if dev is None:
                raise ImprovementViolation(pos, i)
            move(i, dev)
        return finish(STEP_LIMIT)

    if scheduler.kind == "round_robin":
        skips, i = 0, 0
        while skips < n:
            if len(events) >= max_steps:
                return finish(STEP_LIMIT)
            dev = choose(game, prof, i)
            if dev is None:
                skips += 1
            else:
                move(i, dev)
                skips = 0
            i = (i + 1) % n
        return finish(CONVERGED)

    if scheduler.kind == "uniform_random":
        rng = np.random.default_rng(scheduler.seed)
        trigger = n * RANDOM_SKIP_FACTOR
        skips = 0
        while True:
            if len(events) >= max_steps:
                return finish(STEP_LIMIT)
            i = int(rng.integers(n))
            dev = choose(game, prof, i)
            if dev is not None:
                move(i, dev)
                skips = 0
                continue
            skips += 1
            if skips >= trigger:
                if all(choose(game, prof, j) is None for j in range(n)):
                    return finish(CONVERGED)
                skips = 0

    raise ValueError(f"unknown scheduler kind {scheduler.kind!r}")


def replay(game: Game, initial: Sequence[int], moves: Iterable[Sequence[int]]) -> Trace:
    """Apply scripted ``(user, resource)`` moves, requiring each to strictly improve.

    Raises :class:`ImprovementViolation` naming the first offending step.
    """
    prof = list(game.check_profile(initial))
    events = []
    for step, (i, r) in enumerate(moves, start=1):
        i, r = int(i), int(r)
        game._check_user(i)
        game._check_resource(r)
        old = payoff(game, prof, i)
        frm = prof[i]
        prof[i] = r
        new = payoff(game, prof, i)
        if r == frm or new <= old:
            raise ImprovementViolation(step, i, r, old, new)
        events.append(UpdateEvent(step, i, frm, r, old, new))
    terminal = tuple(prof)
    init = tuple(initial)
    if events and terminal == init:
        outcome = CYCLE
    elif is_nash(game, terminal):
        outcome = CONVERGED
    else:
        outcome = STEP_LIMIT
    return Trace(init, tuple(events), terminal, outcome)


# --------------------------------------------------------------------------
# reverse-change pairs

@dataclass(frozen=True)
class ReverseChangePair:
    """Neighbors of ``mover`` split by color agreement at its changes ``t`` and ``t_prime``.

    ``ss``: same color as the mover at both instants; ``oo``: opposite at both;
    ``so``/``os``: same then opposite / opposite then same.  States are read
    just before each change.
    """

    mover: int
    t: int
    t_prime: int
    ss: frozenset
    oo: frozenset
    so: frozenset
    os: frozenset


def _require_two_resources(game: Game):
    if game.num_resources > 2:
        raise UnsupportedDiagnostic("reverse-change diagnostics need at most two resources, "
                                    f"game has {game.num_resources}")


def reverse_change_pairs(game: Game, trace: Trace) -> list[ReverseChangePair]:
    """Pair each user's consecutive changes; loops also pair the last change with the first."""
    _require_two_resources(game)
    states = trace.profiles()
    by_user: dict[int, list[int]] = {}
    for k, ev in enumerate(trace.events):
        by_user.setdefault(ev.mover, []).append(k)
    loop = trace.is_loop()
    pairs = []
    for user in sorted(by_user):
        ks = by_user[user]
        links = list(zip(ks, ks[1:]))
        if loop:
            links.append((ks[-1], ks[0]))
        for a, b in links:
            sa, sb = states[a], states[b]
            ss, oo, so, os_ = set(), set(), set(), set()
            for j in game.graph.adjacency[user]:
                first = sa[j] == sa[user]
                second = sb[j] == sb[user]
                (ss if first and second else so if first else os_ if second else oo).add(j)
            pairs.append(ReverseChangePair(user, trace.events[a].time, trace.events[b].time,
                                           frozenset(ss), frozenset(oo), frozenset(so),
                                           frozenset(os_)))
    return pairs


@dataclass(frozen=True)
class Lemma1Verdict:
    holds: bool
    pairs: int
    violations: tuple = ()

    def __bool__(self):
        return self.holds


def check_lemma1(game: Game, trace: Trace) -> Lemma1Verdict:
    """Every reverse-change pair must have strictly more same-same than opposite-opposite neighbors."""
    pairs = reverse_change_pairs(game, trace)
    bad = tuple(p for p in pairs if len(p.ss) <= len(p.oo))
    return Lemma1Verdict(not bad, len(pairs), bad)
