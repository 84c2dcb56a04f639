"""Congestion games with resource reuse (spatial reuse of channels).

Users sit on an interference graph, each picks one resource, and a user's
payoff on resource ``r`` is a non-increasing function of how many users in
its closed neighborhood also picked ``r``.
"""

from .errors import (CGRRError, ConstructionError, GraphError, ImprovementViolation,
                     PayoffError, PreconditionError, ProfileError, SpaceTooLarge,
                     UnsupportedDiagnostic)
from .graph import InterferenceGraph, build_graph, classify, neighbors
from .game import (Game, PayoffFamily, best_deviation, deviation_gain, is_nash, payoff,
                   perceived_count)
from .dynamics import Scheduler, Trace, check_lemma1, replay, reverse_change_pairs, run
from .analysis import (ProfileSpace, enumerate_nash, fip_check, mono_edge_potential,
                       rosenthal_potential, verify_exact_potential, verify_ordinal_potential)
from .constructions import build_counterexample, construct, replay_counterexample

__version__ = "0.1.0"
