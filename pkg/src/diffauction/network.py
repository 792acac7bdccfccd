"""Social-network instances, profile graphs and criticality queries.

Buyers are dense integer ids ``0..n-1``. The seller is not a buyer; wherever a
node id is needed for it (critical-tree parents, dominator computation) the
sentinel :data:`SELLER` is used.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import (
    InfeasibleReportError,
    InstanceError,
    MalformedReportError,
    SilentAgentError,
)

SELLER = -1


@dataclass(frozen=True)
class Profile:
    """True profile of a buyer: her valuation and her neighbour set."""

    valuation: Any
    neighbors: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Report:
    """Reported profile. ``valuation`` is a number, or a vector in multi-demand."""

    valuation: Any = 0
    neighbors: frozenset[int] = frozenset()
    silent: bool = False

    def __post_init__(self):
        object.__setattr__(self, "neighbors", frozenset(self.neighbors))
        if self.silent and (self.neighbors or _nonzero(self.valuation)):
            raise MalformedReportError("a silent report must have value 0 and no neighbours")


def _nonzero(valuation) -> bool:
    if isinstance(valuation, (tuple, list)):
        return any(v != 0 for v in valuation)
    return valuation != 0


def silent_report(valuation_zero: Any = 0) -> Report:
    return Report(valuation_zero, frozenset(), True)


class ReportVector(tuple):
    """One :class:`Report` per buyer, indexed by AgentId."""

    def __new__(cls, reports: Iterable[Report] = ()):
        reports = tuple(reports)
        for r in reports:
            if not isinstance(r, Report):
                raise MalformedReportError(f"expected Report, got {type(r).__name__}")
        return super().__new__(cls, reports)

    def replace(self, agent: int, report: Report) -> "ReportVector":
        items = list(self)
        items[agent] = report
        return ReportVector(items)

    @property
    def valuations(self) -> tuple:
        return tuple(r.valuation for r in self)


@dataclass(frozen=True)
class AuctionInstance:
    """Seller with ``m`` items, ``n`` buyers and their true profiles.

    Every buyer must be reachable from the seller through true neighbour sets.
    """

    m: int
    seller_neighbors: frozenset[int]
    profiles: tuple[Profile, ...]
    check_reachable: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "seller_neighbors", frozenset(self.seller_neighbors))
        object.__setattr__(self, "profiles", tuple(self.profiles))
        n = len(self.profiles)
        if self.m < 1:
            raise InstanceError(f"need at least one item, got m={self.m}")
        if n < 1:
            raise InstanceError("need at least one buyer")
        for j in self.seller_neighbors:
            if not 0 <= j < n:
                raise InstanceError(f"seller neighbour {j} is not a buyer")
        for i, prof in enumerate(self.profiles):
            _check_valuation(prof.valuation, i)
            if i in prof.neighbors:
                raise InstanceError(f"buyer {i} lists herself as a neighbour")
            for j in prof.neighbors:
                if not 0 <= j < n:
                    raise InstanceError(f"buyer {i} has unknown neighbour {j}")
        if self.check_reachable:
            seen = _reach(self.seller_neighbors, [p.neighbors for p in self.profiles])
            if len(seen) != n:
                missing = sorted(set(range(n)) - seen)
                raise InstanceError(f"buyers not reachable from the seller: {missing}")

    @property
    def n(self) -> int:
        return len(self.profiles)

    @property
    def valuations(self) -> tuple:
        return tuple(p.valuation for p in self.profiles)

    def truthful_reports(self) -> ReportVector:
        return ReportVector(Report(p.valuation, p.neighbors) for p in self.profiles)

    @classmethod
    def from_lists(cls, valuations: Sequence, neighbors: Sequence[Iterable[int]],
                   seller_neighbors: Iterable[int], m: int) -> "AuctionInstance":
        profiles = tuple(Profile(v, frozenset(nb)) for v, nb in zip(valuations, neighbors, strict=True))
        return cls(m, frozenset(seller_neighbors), profiles)


def _check_valuation(valuation, i):
    values = valuation if isinstance(valuation, (tuple, list)) else (valuation,)
    for v in values:
        if v < 0:
            raise InstanceError(f"buyer {i} has negative valuation {v}")


def _reach(start: Iterable[int], adjacency: Sequence[Iterable[int]], blocked: int | None = None) -> set[int]:
    seen: set[int] = set()
    queue = deque()
    for j in sorted(start):
        if j != blocked and j not in seen:
            seen.add(j)
            queue.append(j)
    while queue:
        i = queue.popleft()
        for j in adjacency[i]:
            if j != blocked and j not in seen:
                seen.add(j)
                queue.append(j)
    return seen


@dataclass(frozen=True)
class ProfileGraph:
    """Directed graph induced by the seller's neighbours and reported neighbour sets.

    ``successors[i]`` holds the sorted reported neighbours of buyer ``i`` if she
    is reachable and is empty otherwise. ``reports`` is the effective report
    vector: every unreachable buyer carries the silent report.
    """

    n: int
    seller_neighbors: tuple[int, ...]
    successors: tuple[tuple[int, ...], ...]
    reachable: tuple[bool, ...]
    reports: ReportVector

    def is_reachable(self, i: int) -> bool:
        return self.reachable[i]

    @property
    def reachable_agents(self) -> list[int]:
        return [i for i, r in enumerate(self.reachable) if r]

    @property
    def silenced(self) -> list[int]:
        return [i for i, r in enumerate(self.reachable) if not r]

    def valuation(self, i: int):
        return self.reports[i].valuation

    def edges(self) -> list[tuple[int, int]]:
        out = [(SELLER, j) for j in self.seller_neighbors]
        for i, succ in enumerate(self.successors):
            out.extend((i, j) for j in succ)
        return out


def build_profile_graph(instance: AuctionInstance, reports: Sequence[Report],
                        check_feasible: bool = True) -> ProfileGraph:
    """Build the profile graph and silence every buyer the seller cannot reach.

    Reports claiming neighbours outside the true neighbour set are rejected
    when ``check_feasible`` is set.
    """
    n = instance.n
    if len(reports) != n:
        raise MalformedReportError(f"expected {n} reports, got {len(reports)}")
    for i, rep in enumerate(reports):
        if not isinstance(rep, Report):
            raise MalformedReportError(f"report {i} is not a Report")
        for j in rep.neighbors:
            if not (isinstance(j, int) and 0 <= j < n):
                raise MalformedReportError(f"report of buyer {i} references unknown agent {j!r}")
        if check_feasible and not rep.neighbors <= instance.profiles[i].neighbors:
            extra = sorted(rep.neighbors - instance.profiles[i].neighbors)
            raise InfeasibleReportError(f"buyer {i} reports neighbours {extra} she does not have")

    seen = _reach(instance.seller_neighbors, [r.neighbors for r in reports])
    reachable = tuple(i in seen for i in range(n))
    successors = tuple(tuple(sorted(reports[i].neighbors)) if reachable[i] else () for i in range(n))
    effective = []
    for i, rep in enumerate(reports):
        if reachable[i]:
            effective.append(rep)
        elif rep.silent:
            effective.append(rep)
        else:
            effective.append(silent_report(_zero_like(rep.valuation)))
    return ProfileGraph(n, tuple(sorted(instance.seller_neighbors)), successors, reachable,
                        ReportVector(effective))


def _zero_like(valuation):
    if isinstance(valuation, (tuple, list)):
        return tuple(0 for _ in valuation)
    return 0


def is_critical(g: ProfileGraph, w: int, i: int) -> bool:
    """True iff every seller-to-``i`` path in ``g`` passes through ``w``.

    ``is_critical(g, i, i)`` is true. Checked by deleting ``w`` and re-running
    reachability.
    """
    if not g.reachable[i]:
        raise SilentAgentError(f"buyer {i} is not reachable")
    if w == i:
        return True
    if not g.reachable[w]:
        return False
    return i not in _reach(g.seller_neighbors, g.successors, blocked=w)


def distances(g: ProfileGraph) -> dict[int, int]:
    """Hop distance from the seller for every reachable buyer."""
    dist: dict[int, int] = {}
    queue = deque()
    for j in g.seller_neighbors:
        dist[j] = 1
        queue.append(j)
    while queue:
        i = queue.popleft()
        for j in g.successors[i]:
            if j not in dist:
                dist[j] = dist[i] + 1
                queue.append(j)
    return dist


@dataclass(frozen=True)
class CriticalTree:
    """Diffusion critical tree: the dominator tree of the profile graph.

    ``parent[j]`` is the closest node critical to ``j`` (``SELLER`` at the top).
    """

    parent: dict[int, int]
    depth: dict[int, int]

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {SELLER: []}
        for j in self.parent:
            kids.setdefault(j, [])
        for j in sorted(self.parent):
            kids[self.parent[j]].append(j)
        return kids

    def ancestors(self, j: int) -> list[int]:
        """Buyers on the path from the seller down to ``j``, ``j`` included."""
        path = []
        while j != SELLER:
            path.append(j)
            j = self.parent[j]
        return path[::-1]

    def subtree(self, i: int) -> set[int]:
        kids = self.children()
        out = {i}
        stack = [i]
        while stack:
            for c in kids[stack.pop()]:
                out.add(c)
                stack.append(c)
        return out


def critical_tree(g: ProfileGraph) -> CriticalTree:
    """Dominator tree rooted at the seller (Cooper, Harvey & Kennedy iteration)."""
    # reverse postorder over the reachable subgraph; the seller is the root
    order: list[int] = []
    visited = {SELLER}
    stack = [(SELLER, iter(g.seller_neighbors))]
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            order.append(node)
        elif nxt not in visited:
            visited.add(nxt)
            stack.append((nxt, iter(g.successors[nxt])))
    order.reverse()
    rpo = {v: k for k, v in enumerate(order)}

    preds: dict[int, list[int]] = {v: [] for v in order}
    for j in g.seller_neighbors:
        preds[j].append(SELLER)
    for i in order[1:]:
        for j in g.successors[i]:
            preds[j].append(i)

    idom = {SELLER: SELLER}

    def intersect(a, b):
        while a != b:
            while rpo[a] > rpo[b]:
                a = idom[a]
            while rpo[b] > rpo[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for v in order[1:]:
            new = None
            for p in preds[v]:
                if p in idom:
                    new = p if new is None else intersect(p, new)
            if idom.get(v) != new:
                idom[v] = new
                changed = True

    parent = {v: idom[v] for v in order[1:]}
    depth: dict[int, int] = {}
    for v in order[1:]:
        p = parent[v]
        depth[v] = 1 if p == SELLER else depth[p] + 1
    return CriticalTree(parent, depth)

