"""Multi-demand auctions via reduction to single demand.

Every buyer ``i`` becomes a chain ``i_1 -> ... -> i_m`` of single-demand
buyers whose valuations are the slots of ``i``'s (non-increasing) valuation
vector. The seller links to ``i_1`` when it links to ``i``, and ``i_m`` links
to ``k_1`` whenever ``i`` links to ``k``. A single-demand mechanism runs on the
chained instance and its outcome is read back slot by slot.

Reduced ids are ``i * m + (j - 1)`` for slot ``j`` of buyer ``i``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Any, Sequence

from .core import Metrics, Outcome, sw_wopt, top_sum
from .errors import InstanceError, MalformedReportError
from .explorer import ExplorationTrace
from .mudan import run_mudan_on_graph
from .mudar import MudarPartition, run_mudar_on_graph
from .network import (
    AuctionInstance,
    Profile,
    ProfileGraph,
    Report,
    ReportVector,
    build_profile_graph,
)
from .strategies import as_strategy, chain_scorer


class DiminishingValuationError(InstanceError):
    """A valuation vector increases somewhere."""


def normalize_vector(values, m: int, who="") -> tuple:
    values = tuple(values)
    if len(values) > m:
        raise InstanceError(f"{who}valuation vector has {len(values)} slots but m={m}")
    values = values + (0,) * (m - len(values))
    for a, b in zip(values, values[1:]):
        if a < b:
            raise DiminishingValuationError(f"{who}valuation vector {values} is not non-increasing")
    return values


@dataclass(frozen=True)
class MultiInstance(AuctionInstance):
    """Auction instance whose buyers carry valuation vectors of length ``m``."""

    def __post_init__(self):
        profiles = tuple(
            Profile(normalize_vector(p.valuation, self.m, f"buyer {i}: "), frozenset(p.neighbors))
            for i, p in enumerate(self.profiles)
        )
        object.__setattr__(self, "profiles", profiles)
        super().__post_init__()

    def slot_values(self) -> list:
        return [v for p in self.profiles for v in p.valuation]


def multi_report(valuations, neighbors=(), m: int | None = None) -> Report:
    vec = tuple(valuations)
    if m is not None:
        vec = normalize_vector(vec, m)
    return Report(vec, frozenset(neighbors))


def normalize_reports(md_instance: MultiInstance, md_reports: Sequence[Report] | None) -> ReportVector:
    if md_reports is None:
        return md_instance.truthful_reports()
    if len(md_reports) != md_instance.n:
        raise MalformedReportError(f"expected {md_instance.n} reports, got {len(md_reports)}")
    out = []
    for i, r in enumerate(md_reports):
        if r.silent:
            out.append(Report((0,) * md_instance.m, frozenset(), True))
            continue
        if not isinstance(r.valuation, (tuple, list)):
            raise MalformedReportError(f"report of buyer {i} is not a valuation vector")
        vec = normalize_vector(r.valuation, md_instance.m, f"report of buyer {i}: ")
        out.append(Report(vec, r.neighbors, r.silent))
    return ReportVector(out)


@dataclass(frozen=True)
class ReductionMap:
    n: int
    m: int

    def forward(self, buyer: int, slot: int) -> int:
        """Reduced id of slot ``slot`` (1-based) of ``buyer``."""
        if not (0 <= buyer < self.n and 1 <= slot <= self.m):
            raise IndexError((buyer, slot))
        return buyer * self.m + slot - 1

    def backward(self, node: int) -> tuple[int, int]:
        if not 0 <= node < self.n * self.m:
            raise IndexError(node)
        buyer, j = divmod(node, self.m)
        return buyer, j + 1


def _chain_neighbors(i: int, m: int, targets) -> list[frozenset[int]]:
    out = [frozenset({i * m + j + 1}) for j in range(m - 1)]
    out.append(frozenset(k * m for k in targets))
    return out


_REDUCED: "weakref.WeakKeyDictionary[MultiInstance, AuctionInstance]" = weakref.WeakKeyDictionary()


def _reduced_true(md_instance: MultiInstance) -> AuctionInstance:
    reduced = _REDUCED.get(md_instance)
    if reduced is None:
        m = md_instance.m
        profiles = []
        for i, prof in enumerate(md_instance.profiles):
            for j, nb in enumerate(_chain_neighbors(i, m, prof.neighbors)):
                profiles.append(Profile(prof.valuation[j], nb))
        # chains preserve reachability, which the multi-demand instance already checked
        reduced = AuctionInstance(m, frozenset(i * m for i in md_instance.seller_neighbors),
                                  tuple(profiles), check_reachable=False)
        _REDUCED[md_instance] = reduced
    return reduced


def reduce_instance(md_instance: MultiInstance, md_reports: Sequence[Report] | None = None
                    ) -> tuple[AuctionInstance, ReportVector, ReductionMap]:
    m = md_instance.m
    md_reports = normalize_reports(md_instance, md_reports)
    reports = []
    for i, rep in enumerate(md_reports):
        for j, nb in enumerate(_chain_neighbors(i, m, rep.neighbors)):
            reports.append(Report(rep.valuation[j], nb))
    return _reduced_true(md_instance), ReportVector(reports), ReductionMap(md_instance.n, m)


@dataclass(frozen=True)
class MultiOutcome:
    allocation: tuple[tuple[int, ...], ...]
    payment: tuple[tuple[Any, ...], ...]

    @property
    def items_allocated(self) -> int:
        return sum(map(sum, self.allocation))

    def items_of(self, buyer: int) -> int:
        return sum(self.allocation[buyer])


def lift_outcome(outcome: Outcome, mapping: ReductionMap) -> MultiOutcome:
    m = mapping.m
    alloc = tuple(tuple(outcome.allocation[i * m:(i + 1) * m]) for i in range(mapping.n))
    pay = tuple(tuple(outcome.payment[i * m:(i + 1) * m]) for i in range(mapping.n))
    return MultiOutcome(alloc, pay)


def compute_multi_metrics(md_instance: MultiInstance, outcome: MultiOutcome) -> Metrics:
    utilities = []
    sw = 0
    for prof, alloc, pay in zip(md_instance.profiles, outcome.allocation, outcome.payment):
        value = sum(v * a for v, a in zip(prof.valuation, alloc))
        sw += value
        utilities.append(value - sum(pay))
    rv = sum(sum(p) for p in outcome.payment)
    return Metrics(tuple(utilities), sw, rv, top_sum(md_instance.slot_values(), md_instance.m))


@dataclass(frozen=True)
class ReducedRun:
    outcome: MultiOutcome
    reduced_instance: AuctionInstance
    reduced_reports: ReportVector
    reduced_outcome: Outcome
    mapping: ReductionMap
    trace: ExplorationTrace
    w_star: int | None
    md_graph: ProfileGraph
    reduced_graph: ProfileGraph
    partition: MudarPartition | None = None

    def reduced_sw_wopt(self):
        if self.w_star is None:
            return 0
        return sw_wopt(self.reduced_instance, self.w_star, self.reduced_reports)


def run_reduced(md_instance: MultiInstance, md_reports=None, inner: str = "mudan",
                priority_strategy="degree") -> ReducedRun:
    """Reduce, run ``inner`` ("mudan" or "mudar") on the chains, lift the outcome."""
    md_reports = normalize_reports(md_instance, md_reports)
    md_graph = build_profile_graph(md_instance, md_reports)
    reduced, reduced_reports, mapping = reduce_instance(md_instance, md_reports)
    reduced_graph = build_profile_graph(reduced, reduced_reports)
    scorer = chain_scorer(as_strategy(priority_strategy).bind(md_graph), md_instance.m)
    if inner == "mudan":
        res = run_mudan_on_graph(reduced_graph, md_instance.m, scorer)
        partition = None
        w_star = res.w_star
    elif inner == "mudar":
        res = run_mudar_on_graph(reduced_graph, md_instance.m, scorer)
        partition = res.partition
        w_star = res.w_star
    else:
        raise ValueError(f"unknown inner mechanism {inner!r}")
    return ReducedRun(lift_outcome(res.outcome, mapping), reduced, reduced_reports, res.outcome,
                      mapping, res.trace, w_star, md_graph, reduced_graph, partition)


def run_mudan_m(md_instance: MultiInstance, md_reports=None, priority_strategy="degree") -> MultiOutcome:
    return run_reduced(md_instance, md_reports, "mudan", priority_strategy).outcome


def run_mudar_m(md_instance: MultiInstance, md_reports=None, priority_strategy="degree") -> MultiOutcome:
    return run_reduced(md_instance, md_reports, "mudar", priority_strategy).outcome


class MUDANm:
    inner = "mudan"

    def __init__(self, strategy="degree"):
        self.strategy = as_strategy(strategy)
        self.name = f"{self.inner}-m[{self.strategy.kind}]"

    def run(self, md_instance, md_reports=None) -> ReducedRun:
        return run_reduced(md_instance, md_reports, self.inner, self.strategy)

    def __call__(self, md_instance, md_reports=None) -> MultiOutcome:
        return self.run(md_instance, md_reports).outcome


class MUDARm(MUDANm):
    inner = "mudar"
