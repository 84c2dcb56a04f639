"""Exhaustive oracles over the profile space and potential-function checks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels
from .errors import PreconditionError, SpaceTooLarge
from .game import Game, deviation_gain
from .graph import classify

DEFAULT_CAP = 1 << 20


@dataclass(frozen=True)
class ProfileSpace:
    """All ``R**N`` profiles in mixed-radix order, user 0 least significant."""

    num_users: int
    num_resources: int

    @property
    def size(self) -> int:
        return self.num_resources ** self.num_users

    def profile(self, index: int) -> tuple:
        if not 0 <= index < self.size:
            raise IndexError(f"profile index {index} out of range [0, {self.size})")
        R = self.num_resources
        out = []
        for _ in range(self.num_users):
            index, d = divmod(index, R)
            out.append(d)
        return tuple(out)

    def index(self, profile: Sequence[int]) -> int:
        k = 0
        for r in reversed(profile):
            k = k * self.num_resources + int(r)
        return k

    def __iter__(self) -> Iterator[tuple]:
        return (self.profile(k) for k in range(self.size))

    def __len__(self):
        return self.size


def _space(game: Game, cap: int) -> ProfileSpace:
    space = ProfileSpace(game.num_users, game.num_resources)
    if space.size > cap:
        raise SpaceTooLarge(space.size, cap)
    return space


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // max(parts, 1))
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def enumerate_nash(game: Game, cap: int = DEFAULT_CAP, workers: int = 1) -> list[tuple]:
    """Every pure Nash equilibrium, in enumeration order."""
    space = _space(game, cap)
    total = space.size
    if workers > 1 and total > _kernels.BLOCK:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _kernels.nash_flags(game, *c),
                                  _chunks(total, workers)))
        flags = np.concatenate(parts)
    else:
        flags = _kernels.nash_flags(game, 0, total)
    return [space.profile(int(k)) for k in np.flatnonzero(flags)]


@dataclass(frozen=True)
class WitnessStep:
    profile: tuple
    mover: int
    resource: int


@dataclass(frozen=True)
class FipVerdict:
    holds: bool
    witness_cycle: tuple = ()

    @property
    def initial(self) -> tuple | None:
        return self.witness_cycle[0].profile if self.witness_cycle else None

    @property
    def moves(self) -> list[tuple[int, int]]:
        return [(w.mover, w.resource) for w in self.witness_cycle]

    def to_dict(self) -> dict:
        return {"holds": self.holds,
                "witness": [{"profile": list(w.profile), "mover": w.mover,
                             "resource": w.resource} for w in self.witness_cycle]}


def fip_check(game: Game, cap: int = DEFAULT_CAP) -> FipVerdict:
    """Finite improvement property iff the strict-improvement graph is acyclic."""
    space = _space(game, cap)
    states, moves = _kernels.fip_search(game, space.size)
    if len(states) == 0:
        return FipVerdict(True)
    R = game.num_resources
    steps = tuple(WitnessStep(space.profile(int(s)), int(m) // R, int(m) % R)
                  for s, m in zip(states, moves))
    return FipVerdict(False, steps)


# --------------------------------------------------------------------------
# potentials

def _require_complete_shared(game: Game):
    if game.payoffs.mode != "shared":
        raise PreconditionError("Rosenthal potential needs shared (non user-specific) payoffs")
    if not classify(game.graph)["is_complete"]:
        raise PreconditionError("Rosenthal potential is an exact potential only on complete graphs")


def rosenthal_potential(game: Game, profile: Sequence[int]) -> int:
    """Sum over resources of ``g_r(1) + ... + g_r(n_r)`` with global occupancy ``n_r``."""
    _require_complete_shared(game)
    prof = game.check_profile(profile)
    total = 0
    for r in range(game.num_resources):
        occupancy = prof.count(r)
        total += sum(game.payoffs.tables[r][:occupancy])
    return total


@dataclass(frozen=True)
class PotentialVerdict:
    holds: bool
    checked: int
    counterexample: dict | None = None
    mode: str = "exhaustive"

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds, "checked": self.checked, "mode": self.mode,
                "counterexample": self.counterexample}


def verify_exact_potential(game: Game, cap: int = DEFAULT_CAP,
                           potential: Callable[[Game, Sequence[int]], int] = rosenthal_potential
                           ) -> PotentialVerdict:
    """Check ``potential(after) - potential(before) == gain`` for every unilateral move."""
    _require_complete_shared(game)
    space = _space(game, cap)
    checked = 0
    for prof in space:
        before = potential(game, prof)
        for i in range(game.num_users):
            for r in range(game.num_resources):
                if r == prof[i]:
                    continue
                gain = deviation_gain(game, prof, i, r)
                after = potential(game, prof[:i] + (r,) + prof[i + 1:])
                checked += 1
                if after - before != gain:
                    return PotentialVerdict(False, checked, {
                        "profile": list(prof), "user": i, "resource": r,
                        "delta_potential": after - before, "gain": gain})
    return PotentialVerdict(True, checked)


def mono_edge_potential(game: Game, profile: Sequence[int]) -> int:
    """Number of interference edges whose endpoints share a resource."""
    return sum(1 for i, j in game.graph.edges if profile[i] == profile[j])


def verify_ordinal_potential(game: Game, cap: int = DEFAULT_CAP, *, samples: int = 20000,
                             seed: int | None = None) -> PotentialVerdict:
    """Every strict improvement must strictly lower :func:`mono_edge_potential`.

    Exhaustive when ``R**N <= cap``; otherwise ``samples`` random profiles
    (``seed`` required) are checked move by move.
    """
    if not game.identical_across_resources():
        raise PreconditionError("ordinal potential check needs identical payoff tables "
                                "across resources")
    space = ProfileSpace(game.num_users, game.num_resources)
    if space.size <= cap:
        k, i, r, checked = _kernels.ordinal_violation(game, 0, space.size)
        if k < 0:
            return PotentialVerdict(True, checked)
        prof = space.profile(k)
        return PotentialVerdict(False, checked, _ordinal_cex(game, prof, i, r))
    if seed is None:
        raise PreconditionError("sampled ordinal check needs a seed")
    rng = np.random.default_rng(seed)
    checked = 0
    for _ in range(samples):
        prof = tuple(int(x) for x in rng.integers(0, game.num_resources, game.num_users))
        before = mono_edge_potential(game, prof)
        for i in range(game.num_users):
            for r in range(game.num_resources):
                if r == prof[i] or deviation_gain(game, prof, i, r) <= 0:
                    continue
                checked += 1
                after = mono_edge_potential(game, prof[:i] + (r,) + prof[i + 1:])
                if after >= before:
                    return PotentialVerdict(False, checked, _ordinal_cex(game, prof, i, r),
                                            mode="sampled")
    return PotentialVerdict(True, checked, mode="sampled")


def _ordinal_cex(game, prof, i, r):
    moved = prof[:i] + (r,) + prof[i + 1:]
    return {"profile": list(prof), "user": i, "resource": r,
            "gain": deviation_gain(game, prof, i, r),
            "potential_before": mono_edge_potential(game, prof),
            "potential_after": mono_edge_potential(game, moved)}


# --------------------------------------------------------------------------

@dataclass
class AnalysisReport:
    nash_profiles: list | None = None
    fip: FipVerdict | None = None
    potential_checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {}
        if self.nash_profiles is not None:
            out["nash_profiles"] = [list(p) for p in self.nash_profiles]
        if self.fip is not None:
            out["fip"] = self.fip.to_dict()
        out["potential_checks"] = {k: v.to_dict() for k, v in self.potential_checks.items()}
        return out


def applicable_potential_checks(game: Game, cap: int = DEFAULT_CAP, seed: int | None = None
                                ) -> dict:
    """Run whichever potential verifications the game's structure admits."""
    checks = {}
    if game.payoffs.mode == "shared" and classify(game.graph)["is_complete"]:
        checks["exact_rosenthal"] = verify_exact_potential(game, cap)
    if game.identical_across_resources():
        checks["ordinal_mono_edge"] = verify_ordinal_potential(
            game, cap, seed=0 if seed is None else seed)
    return checks

