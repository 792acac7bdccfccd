"""Directed graphs for experiments: edge-list I/O and seedable generators.

Generated graphs are undirected social networks stored with both edge
directions. Node 0 is the natural seller for the rooted generators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .strategies import philox

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiGraph:
    """Dense ids ``0..n-1``; ``labels[i]`` is the id used in the source file."""

    successors: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.successors))))

    @property
    def n(self) -> int:
        return len(self.successors)

    @property
    def edge_count(self) -> int:
        return sum(map(len, self.successors))

    def edges(self):
        for u, nbrs in enumerate(self.successors):
            for v in nbrs:
                yield u, v

    def edge_array(self) -> np.ndarray:
        return np.array(list(self.edges()), dtype=np.int64).reshape(-1, 2)

    def index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"node {label} is not in the graph") from None


def from_edges(n: int, edges, labels=(), symmetrize: bool = False) -> DiGraph:
    succ: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            continue
        succ[u].add(v)
        if symmetrize:
            succ[v].add(u)
    return DiGraph(tuple(tuple(sorted(s)) for s in succ), tuple(labels))


def parse_edge_list(path, symmetrize: bool = False) -> DiGraph:
    """Read ``u v`` integer pairs, one per line; ``#`` starts a comment line.

    Node ids are compacted to ``0..n-1`` in ascending label order. Self loops
    and repeated edges are dropped.
    """
    raw = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ParseError(f"expected two node ids, got {text!r}", path, lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"node ids must be integers: {text!r}", path, lineno) from None
            raw.append((u, v))
    labels = sorted({x for e in raw for x in e})
    index = {lab: i for i, lab in enumerate(labels)}
    loops = sum(1 for u, v in raw if u == v)
    if loops:
        log.warning("%s: dropped %d self loops", path, loops)
    return from_edges(len(labels), ((index[u], index[v]) for u, v in raw), labels, symmetrize)


def write_edge_list(graph: DiGraph, path, header: str | None = None) -> None:
    lines = [f"# {header}"] if header else []
    lines += [f"{graph.labels[u]} {graph.labels[v]}" for u, v in graph.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def random_tree(n: int, rng) -> DiGraph:
    """Uniform random recursive tree on ``n`` nodes rooted at 0."""
    rng = philox(rng)
    parents = [int(rng.integers(0, k)) for k in range(1, n)]
    return from_edges(n, ((p, k) for k, p in enumerate(parents, 1)), symmetrize=True)


def preferential_attachment(n: int, k: int = 2, rng=0) -> DiGraph:
    """Barabasi-Albert graph: each new node links to ``k`` distinct nodes chosen by degree."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = philox(rng)
    core = min(n, k + 1)
    edges = [(u, v) for u in range(core) for v in range(u + 1, core)]
    pool = [x for e in edges for x in e] or [0]
    for new in range(core, n):
        chosen: set[int] = set()
        while len(chosen) < min(k, new):
            chosen.add(pool[int(rng.integers(0, len(pool)))])
        for t in sorted(chosen):
            edges.append((new, t))
            pool += (new, t)
    return from_edges(n, edges, symmetrize=True)


def er_attachment(n: int, p: float = 0.01, rng=0) -> DiGraph:
    """Random recursive tree plus Erdos-Renyi extra edges with probability ``p``."""
    rng = philox(rng)
    edges = [(int(rng.integers(0, k)), k) for k in range(1, n)]
    pairs = n * (n - 1) // 2
    extra = int(rng.binomial(pairs, p)) if pairs else 0
    if extra:
        u = rng.integers(0, n, size=extra)
        v = rng.integers(0, n, size=extra)
        edges += [(int(a), int(b)) for a, b in zip(u, v) if a != b]
    return from_edges(n, edges, symmetrize=True)


GENERATORS = {"tree": random_tree, "pa": preferential_attachment, "er": er_attachment}


def generate_graph(spec: str, rng) -> DiGraph:
    """Build a graph from ``kind:key=value,...``, e.g. ``pa:n=500,k=2``."""
    kind, _, params = spec.partition(":")
    if kind not in GENERATORS:
        raise ValueError(f"unknown graph generator {kind!r}; expected one of {sorted(GENERATORS)}")
    kwargs = {}
    for item in filter(None, params.split(",")):
        key, _, value = item.partition("=")
        kwargs[key.strip()] = float(value) if key.strip() == "p" else int(value)
    if "n" not in kwargs:
        raise ValueError(f"graph spec {spec!r} needs n=<nodes>")
    return GENERATORS[kind](rng=rng, **kwargs)


def reachable_from(graph: DiGraph, source: int) -> list[int]:
    seen = {source}
    stack = [source]
    while stack:
        for v in graph.successors[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return sorted(seen)
