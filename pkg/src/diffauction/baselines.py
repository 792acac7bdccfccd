"""DNA-MU, the distance-ordered baseline that is known not to be truthful.

Buyers are visited in ascending distance from the seller. A buyer wins if her
reported valuation beats the ``m'``-th highest reported valuation among the
remaining non-winners outside her critical subtree, and pays that threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Outcome, kth_highest
from .network import AuctionInstance, CriticalTree, build_profile_graph, critical_tree, distances


@dataclass(frozen=True)
class DnaMuRound:
    agent: int
    remaining: int
    threshold: object
    won: bool


@dataclass(frozen=True)
class DnaMuResult:
    outcome: Outcome
    rounds: list[DnaMuRound]
    tree: CriticalTree


def run_dnamu(instance: AuctionInstance, reports=None, weak: bool = False) -> DnaMuResult:
    """Run DNA-MU. ``weak`` switches the win test from ``v > p`` to ``v >= p``."""
    if reports is None:
        reports = instance.truthful_reports()
    graph = build_profile_graph(instance, reports)
    tree = critical_tree(graph)
    dist = distances(graph)
    order = sorted(dist, key=lambda i: (dist[i], i))
    value = graph.valuation
    kids = tree.children()

    def subtree(i):
        out, stack = {i}, [i]
        while stack:
            for c in kids[stack.pop()]:
                out.add(c)
                stack.append(c)
        return out

    remaining = instance.m
    winners: set[int] = set()
    alloc = [0] * instance.n
    pay = [0] * instance.n
    rounds = []
    for i in order:
        if remaining == 0:
            break
        blocked = subtree(i)
        others = [value(j) for j in order if j not in blocked and j not in winners]
        threshold = kth_highest(others, remaining)
        won = value(i) >= threshold if weak else value(i) > threshold
        rounds.append(DnaMuRound(i, remaining, threshold, won))
        if won:
            alloc[i] = 1
            pay[i] = threshold
            winners.add(i)
            remaining -= 1
    return DnaMuResult(Outcome(tuple(alloc), tuple(pay)), rounds, tree)


class DNAMU:
    def __init__(self, weak: bool = False):
        self.weak = weak
        self.name = "dnamu-weak" if weak else "dnamu"

    def run(self, instance, reports=None) -> DnaMuResult:
        return run_dnamu(instance, reports, self.weak)

    def __call__(self, instance, reports=None) -> Outcome:
        return self.run(instance, reports).outcome
