"""MUDAN: multi-unit diffusion auction without rewards.

Winners are allocated on the fly. With ``m'`` items left, the potential
winners are the top-``m'`` reported valuations among explored non-winners and
a winner pays the ``(m'+1)``-th highest of them (0 if there is none).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Outcome
from .explorer import ExplorationRules, ExplorationState, ExplorationTrace, run_exploration
from .network import AuctionInstance, ProfileGraph, build_profile_graph
from .ranking import Ranking
from .strategies import Scorer, as_strategy


class MudanRules(ExplorationRules):
    def __init__(self, m: int):
        self.m = m
        self.pool = Ranking()  # A \ W

    def start(self, state):
        state.remaining = self.m

    def on_arrival(self, state, agents):
        for i in agents:
            self.pool.add(i, state.valuation(i))

    def update_candidates(self, state):
        k = state.remaining
        if len(self.pool) <= k:
            return self.pool.agents()
        return self.pool.top(k)

    def tentative_payment(self, state, winner):
        return self.pool.value_at(state.remaining)

    def on_select(self, state, winner):
        self.pool.remove(winner, state.valuation(winner))
        state.remaining -= 1

    def finished(self, state):
        return state.remaining == 0


@dataclass(frozen=True)
class MudanResult:
    outcome: Outcome
    trace: ExplorationTrace
    w_star: int | None
    state: ExplorationState
    graph: ProfileGraph


def run_mudan_on_graph(graph: ProfileGraph, m: int, priority: Scorer) -> MudanResult:
    state, trace = run_exploration(graph, MudanRules(m), priority)
    alloc = [0] * graph.n
    pay = [0] * graph.n
    for w in state.winners:
        alloc[w] = 1
        pay[w] = state.tentative_payments[w]
    w_star = state.winners[-1] if state.winners else None
    return MudanResult(Outcome(tuple(alloc), tuple(pay)), trace, w_star, state, graph)


def run_mudan(instance: AuctionInstance, reports=None, priority_strategy="degree") -> MudanResult:
    """Run MUDAN; ``reports`` defaults to truthful reporting."""
    if reports is None:
        reports = instance.truthful_reports()
    graph = build_profile_graph(instance, reports)
    scorer = as_strategy(priority_strategy).bind(graph)
    return run_mudan_on_graph(graph, instance.m, scorer)


class MUDAN:
    """MUDAN as a mechanism callable: ``MUDAN("degree")(instance, reports)``."""

    def __init__(self, strategy="degree"):
        self.strategy = as_strategy(strategy)
        self.name = f"mudan[{self.strategy.kind}]"

    def run(self, instance, reports=None) -> MudanResult:
        return run_mudan(instance, reports, self.strategy)

    def __call__(self, instance, reports=None) -> Outcome:
        return self.run(instance, reports).outcome
