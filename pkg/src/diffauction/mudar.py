"""MUDAR: multi-unit diffusion auction with rewards.

The whole reachable graph is explored. Potential winners are the explored
buyers whose reported valuation is in the top ``m`` of ``A``; a winner's
tentative payment is the ``(m+1)``-th highest reported valuation in ``A``.
After exploration, winners holding a global top-``m`` valuation get an item
at their tentative payment, the other winners get a reward of
``reported value - tentative payment``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Outcome
from .errors import ContractViolation
from .explorer import ExplorationRules, ExplorationState, ExplorationTrace, run_exploration
from .network import AuctionInstance, ProfileGraph, build_profile_graph
from .ranking import Ranking
from .strategies import Scorer, as_strategy


class MudarRules(ExplorationRules):
    def __init__(self, m: int):
        self.m = m
        self.ranked = Ranking()  # all of A

    def on_arrival(self, state, agents):
        for i in agents:
            self.ranked.add(i, state.valuation(i))

    def update_candidates(self, state):
        return [i for i in self.ranked.top(self.m) if i not in state.winner_set]

    def tentative_payment(self, state, winner):
        return self.ranked.value_at(self.m)


@dataclass(frozen=True)
class MudarPartition:
    winners_allocated: frozenset[int]
    winners_rewarded: frozenset[int]


@dataclass(frozen=True)
class MudarResult:
    outcome: Outcome
    partition: MudarPartition
    trace: ExplorationTrace
    state: ExplorationState
    graph: ProfileGraph

    @property
    def w_star(self):
        return self.state.winners[-1] if self.state.winners else None


def run_mudar_on_graph(graph: ProfileGraph, m: int, priority: Scorer) -> MudarResult:
    rules = MudarRules(m)
    state, trace = run_exploration(graph, rules, priority)
    top = rules.ranked.top(m)
    missing = [i for i in top if i not in state.winner_set]
    if missing:
        raise ContractViolation(f"top-m buyers {missing} were never selected as winners")
    allocated = frozenset(top)
    rewarded = frozenset(state.winners) - allocated
    alloc = [0] * graph.n
    pay = [0] * graph.n
    for w in state.winners:
        p_hat = state.tentative_payments[w]
        if w in allocated:
            alloc[w] = 1
            pay[w] = p_hat
        else:
            pay[w] = p_hat - state.valuation(w)
    return MudarResult(Outcome(tuple(alloc), tuple(pay)), MudarPartition(allocated, rewarded),
                       trace, state, graph)


def run_mudar(instance: AuctionInstance, reports=None, priority_strategy="degree") -> MudarResult:
    """Run MUDAR; ``reports`` defaults to truthful reporting."""
    if reports is None:
        reports = instance.truthful_reports()
    graph = build_profile_graph(instance, reports)
    scorer = as_strategy(priority_strategy).bind(graph)
    return run_mudar_on_graph(graph, instance.m, scorer)


class MUDAR:
    """MUDAR as a mechanism callable."""

    def __init__(self, strategy="degree"):
        self.strategy = as_strategy(strategy)
        self.name = f"mudar[{self.strategy.kind}]"

    def run(self, instance, reports=None) -> MudarResult:
        return run_mudar(instance, reports, self.strategy)

    def __call__(self, instance, reports=None) -> Outcome:
        return self.run(instance, reports).outcome
