"""Priority scores used to pick the next winner among the potential winners.

A score may depend on the agent's reported neighbours and her position in the
graph but never on her reported valuation, and it must not drop when she
reports more neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Container

import numpy as np

from .network import ProfileGraph, distances

KINDS = ("degree", "distance", "depth", "new_agent", "random")

Scorer = Callable[[int, Container[int]], float]


def philox(seed) -> np.random.Generator:
    """Seeded generator built on the Philox-4x64 counter-based bit generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class PriorityStrategy:
    """One of ``degree``, ``distance``, ``depth``, ``new_agent`` or ``random``.

    ``seed`` is only read by ``random``.
    """

    kind: str = "degree"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown priority strategy {self.kind!r}; expected one of {KINDS}")

    @property
    def dynamic(self) -> bool:
        return self.kind == "new_agent"

    def bind(self, graph: ProfileGraph) -> Scorer:
        """Return ``score(agent, explored)`` for this strategy on ``graph``."""
        succ = graph.successors
        if self.kind == "degree":
            return lambda i, explored: len(succ[i])
        if self.kind == "new_agent":
            return lambda i, explored: sum(1 for j in succ[i] if j not in explored)
        if self.kind in ("distance", "depth"):
            dist = distances(graph)
            sign = -1 if self.kind == "distance" else 1
            return lambda i, explored: sign * dist[i]
        draws = philox(self.seed).random(graph.n)
        return lambda i, explored: float(draws[i])


def as_strategy(strategy) -> PriorityStrategy:
    if isinstance(strategy, PriorityStrategy):
        return strategy
    if strategy is None:
        return PriorityStrategy()
    return PriorityStrategy(str(strategy))


def score(strategy, agent: int, explored: Container[int], graph: ProfileGraph) -> float:
    """Score a single agent; convenience wrapper around :meth:`PriorityStrategy.bind`."""
    return as_strategy(strategy).bind(graph)(agent, explored)


class _OwnerView:
    """Explored-set view over original buyers: ``k`` counts as explored once ``k_1`` is."""

    __slots__ = ("explored", "m")

    def __init__(self, explored, m):
        self.explored = explored
        self.m = m

    def __contains__(self, k):
        return k * self.m in self.explored


def chain_scorer(base: Scorer, m: int) -> Scorer:
    """Give every chain node ``i_j`` of the reduced graph the priority of buyer ``i``."""
    if m == 1:
        return base
    return lambda node, explored: base(node // m, _OwnerView(explored, m))
