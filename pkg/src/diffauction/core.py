"""Outcomes, welfare/revenue metrics and the weakly-optimal welfare benchmark."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Protocol, Sequence

from .errors import SilentAgentError
from .network import AuctionInstance, ProfileGraph, build_profile_graph, is_critical


@dataclass(frozen=True)
class Outcome:
    """Allocation bit and signed payment per buyer (negative payment = reward)."""

    allocation: tuple[int, ...]
    payment: tuple[Any, ...]

    @property
    def winners(self) -> list[int]:
        return [i for i, a in enumerate(self.allocation) if a]

    @property
    def items_allocated(self) -> int:
        return sum(self.allocation)

    @classmethod
    def empty(cls, n: int) -> "Outcome":
        return cls((0,) * n, (0,) * n)


@dataclass(frozen=True)
class Metrics:
    utilities: tuple[Any, ...]
    social_welfare: Any
    revenue: Any
    sw_opt: Any


class Mechanism(Protocol):
    """Anything that maps (instance, reports) to an :class:`Outcome`."""

    name: str

    def __call__(self, instance: AuctionInstance, reports: Sequence) -> Outcome: ...


def top_sum(values, k: int):
    """Sum of the ``k`` largest values (all of them if fewer than ``k``)."""
    return sum(sorted(values, reverse=True)[:k])


def kth_highest(values, k: int, default=0):
    """The ``k``-th highest of ``values`` (1-based), or ``default`` if absent."""
    ranked = sorted(values, reverse=True)
    return ranked[k - 1] if len(ranked) >= k else default


def compute_metrics(instance: AuctionInstance, outcome: Outcome) -> Metrics:
    """Utilities, welfare and revenue, all measured with TRUE valuations."""
    if len(outcome.allocation) != instance.n or len(outcome.payment) != instance.n:
        raise ValueError("outcome does not match the instance size")
    vals = instance.valuations
    utilities = tuple(v * a - p for v, a, p in zip(vals, outcome.allocation, outcome.payment))
    sw = sum(v * a for v, a in zip(vals, outcome.allocation))
    rv = sum(outcome.payment)
    return Metrics(utilities, sw, rv, top_sum(vals, instance.m))


def weak_benchmark_set(graph: ProfileGraph, w_star: int) -> list[int]:
    """Reachable buyers for whom ``w_star`` is not critical, plus ``w_star`` itself."""
    if not graph.reachable[w_star]:
        raise SilentAgentError(f"last winner {w_star} is not reachable")
    return [i for i in graph.reachable_agents if i == w_star or not is_critical(graph, w_star, i)]


def sw_wopt(instance: AuctionInstance, w_star: int, reports: Sequence) -> Any:
    """Top-``m`` sum of true valuations over the buyers not blocked by ``w_star``."""
    graph = build_profile_graph(instance, reports)
    members = weak_benchmark_set(graph, w_star)
    return top_sum([instance.profiles[i].valuation for i in members], instance.m)
