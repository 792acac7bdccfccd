"""Generic graph-exploration engine shared by MUDAN and MUDAR.

The engine owns the explored set ``A``, the winner list ``W``, expansion
marks and the exhaustion bookkeeping. A mechanism plugs in through an
:class:`ExplorationRules` subclass that decides the potential winners, the
tentative payment of each winner and when to stop.

Each iteration alternates expansion and potential-winner updates until no
winner or exhausted agent is left unexpanded, then selects the highest
priority potential winner (ties to the smaller AgentId).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import ContractViolation
from .network import ProfileGraph
from .strategies import Scorer


@dataclass
class ExplorationState:
    graph: ProfileGraph
    explored: list[int] = field(default_factory=list)
    explored_set: set[int] = field(default_factory=set)
    winners: list[int] = field(default_factory=list)
    winner_set: set[int] = field(default_factory=set)
    candidates: frozenset[int] = frozenset()
    marked: set[int] = field(default_factory=set)
    exhausted: set[int] = field(default_factory=set)
    tentative_payments: dict[int, Any] = field(default_factory=dict)
    remaining: int | None = None

    def valuation(self, i: int):
        return self.graph.reports[i].valuation

    @property
    def potential(self) -> set[int]:
        """``P``: winners plus the current candidates."""
        return self.winner_set | self.candidates


@dataclass(frozen=True)
class IterationRecord:
    index: int
    increment: tuple[int, ...]
    candidates: tuple[int, ...]
    winner: int
    payment: Any
    scores: dict[int, float]
    newly_exhausted: tuple[int, ...]


@dataclass
class ExplorationTrace:
    iterations: list[IterationRecord] = field(default_factory=list)
    closing_increment: tuple[int, ...] = ()

    @property
    def increments(self) -> list[tuple[int, ...]]:
        return [it.increment for it in self.iterations]

    @property
    def winners(self) -> list[int]:
        return [it.winner for it in self.iterations]


class ExplorationRules:
    """Hooks a mechanism supplies to :func:`run_exploration`."""

    def start(self, state: ExplorationState) -> None:
        pass

    def on_arrival(self, state: ExplorationState, agents: list[int]) -> None:
        """Called with agents newly added to ``A``, in arrival order."""

    def update_candidates(self, state: ExplorationState) -> Iterable[int]:
        """Return ``P \\ W``; the engine treats ``A \\ P`` as exhausted."""
        raise NotImplementedError

    def tentative_payment(self, state: ExplorationState, winner: int) -> Any:
        raise NotImplementedError

    def on_select(self, state: ExplorationState, winner: int) -> None:
        pass

    def finished(self, state: ExplorationState) -> bool:
        return False


def run_exploration(graph: ProfileGraph, rules: ExplorationRules, priority: Scorer
                    ) -> tuple[ExplorationState, ExplorationTrace]:
    state = ExplorationState(graph)
    trace = ExplorationTrace()
    succ = graph.successors
    explored, explored_set = state.explored, state.explored_set
    increment: list[int] = []
    fresh: list[int] = []
    exhausted_now: list[int] = []

    def admit(agents):
        new = []
        for j in agents:
            if j not in explored_set:
                explored_set.add(j)
                explored.append(j)
                new.append(j)
        if new:
            increment.extend(new)
            fresh.extend(new)
            rules.on_arrival(state, new)

    rules.start(state)
    admit(graph.seller_neighbors)
    pending: set[int] = set()
    cand: frozenset[int] = frozenset()

    while not rules.finished(state):
        while True:
            new_cand = frozenset(rules.update_candidates(state))
            for i in new_cand:
                if i not in explored_set or i in state.winner_set:
                    raise ContractViolation(f"candidate {i} is not an explored non-winner")
                if i in state.exhausted:
                    raise ContractViolation(f"exhausted agent {i} was re-admitted as a potential winner")
            dropped = [i for i in cand if i not in new_cand]
            dropped.extend(i for i in fresh if i not in new_cand)
            fresh.clear()
            cand = new_cand
            state.candidates = cand
            for i in dropped:
                state.exhausted.add(i)
                exhausted_now.append(i)
                if i not in state.marked:
                    pending.add(i)
            if not pending:
                break
            for i in sorted(pending):
                state.marked.add(i)
                admit(succ[i])
            pending.clear()

        if not cand:
            break
        scores = {i: priority(i, explored_set) for i in cand}
        w = max(cand, key=lambda i: (scores[i], -i))
        payment = rules.tentative_payment(state, w)
        state.tentative_payments[w] = payment
        trace.iterations.append(IterationRecord(
            len(trace.iterations) + 1, tuple(increment), _by_value(state, cand), w, payment,
            scores, tuple(exhausted_now)))
        increment.clear()
        exhausted_now.clear()
        state.winners.append(w)
        state.winner_set.add(w)
        cand = cand - {w}
        state.candidates = cand
        rules.on_select(state, w)
        pending.add(w)

    trace.closing_increment = tuple(increment)
    return state, trace


def _by_value(state: ExplorationState, agents) -> tuple[int, ...]:
    return tuple(sorted(agents, key=lambda i: (-state.valuation(i), i)))
