"""Profile CSV files and assembling auction instances from graphs."""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Sequence

from .errors import ParseError
from .graphs import DiGraph, parse_edge_list, reachable_from
from .multidemand import MultiInstance
from .network import AuctionInstance, Profile

log = logging.getLogger(__name__)


def _number(text: str):
    value = float(text)
    return int(value) if value.is_integer() and "." not in text and "e" not in text.lower() else value


def parse_profiles(path, multi_demand: bool = False, agents: Sequence[int] | None = None) -> dict:
    """Read ``agent_id,v1[,v2,...]`` rows into ``{agent_id: value}``.

    Multi-demand rows become descending tuples (unsorted rows are sorted with
    a warning). ``agents`` restricts the accepted ids.
    """
    known = set(agents) if agents is not None else None
    out: dict = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                agent = int(row[0])
                values = [_number(x.strip()) for x in row[1:] if x.strip()]
            except ValueError:
                raise ParseError(f"non-numeric field in {row!r}", path, lineno) from None
            if not values:
                raise ParseError(f"agent {agent} has no valuation", path, lineno)
            if any(v < 0 for v in values):
                raise ParseError(f"agent {agent} has a negative valuation", path, lineno)
            if known is not None and agent not in known:
                raise ParseError(f"unknown agent id {agent}", path, lineno)
            if agent in out:
                raise ParseError(f"agent {agent} listed twice", path, lineno)
            if multi_demand:
                ordered = sorted(values, reverse=True)
                if ordered != values:
                    log.warning("%s:%d: sorted valuations of agent %d into descending order",
                                path, lineno, agent)
                out[agent] = tuple(ordered)
            else:
                if len(values) > 1:
                    raise ParseError(f"agent {agent} has {len(values)} values in single-demand mode",
                                     path, lineno)
                out[agent] = values[0]
    return out


def write_profiles(valuations: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for agent in sorted(valuations):
            v = valuations[agent]
            w.writerow([agent, *(v if isinstance(v, tuple) else (v,))])


def instance_from_graph(graph: DiGraph, seller: int, valuations, m: int,
                        multi_demand: bool = False) -> tuple[AuctionInstance, list[int]]:
    """Auction rooted at graph node ``seller`` over the nodes it reaches.

    ``valuations[node]`` gives each node's value (or vector). Returns the
    instance and, for each buyer id, the graph node it came from.
    """
    nodes = [v for v in reachable_from(graph, seller) if v != seller]
    index = {v: i for i, v in enumerate(nodes)}
    profiles = []
    for v in nodes:
        value = valuations[v]
        if multi_demand:
            value = tuple(value) if isinstance(value, (tuple, list)) else tuple(value.tolist())
        profiles.append(Profile(value, frozenset(index[u] for u in graph.successors[v] if u != seller)))
    seller_nb = frozenset(index[u] for u in graph.successors[seller])
    cls = MultiInstance if multi_demand else AuctionInstance
    return cls(m, seller_nb, tuple(profiles)), nodes


def load_instance(edges_path, profiles_path, seller_label: int, m: int, multi_demand: bool = False,
                  symmetrize: bool = False) -> tuple[AuctionInstance, list[int]]:
    """Instance from an edge list and a profile CSV keyed by edge-list labels.

    Returns the instance and the label of every buyer.
    """
    graph = parse_edge_list(edges_path, symmetrize)
    seller = graph.index(seller_label)
    profiles = parse_profiles(profiles_path, multi_demand, agents=graph.labels)
    nodes = [v for v in reachable_from(graph, seller) if v != seller]
    missing = [graph.labels[v] for v in nodes if graph.labels[v] not in profiles]
    if missing:
        raise ParseError(f"no valuation for reachable agents {missing[:10]}", profiles_path)
    dropped = graph.n - 1 - len(nodes)
    if dropped:
        log.info("%d nodes are unreachable from seller %d and were dropped", dropped, seller_label)
    vals = {v: profiles[graph.labels[v]] for v in nodes}
    inst, nodes = instance_from_graph(graph, seller, vals, m, multi_demand)
    return inst, [graph.labels[v] for v in nodes]


def write_instance(instance: AuctionInstance, edges_path, profiles_path, labels=None,
                   seller_label: int | None = None) -> int:
    """Write ``instance`` as an edge list plus profile CSV; returns the seller label used."""
    labels = list(labels) if labels is not None else list(range(instance.n))
    if seller_label is None:
        seller_label = max(labels, default=-1) + 1
    lines = [f"{seller_label} {labels[j]}" for j in sorted(instance.seller_neighbors)]
    for i, p in enumerate(instance.profiles):
        lines += [f"{labels[i]} {labels[j]}" for j in sorted(p.neighbors)]
    Path(edges_path).write_text("\n".join(lines) + "\n")
    write_profiles({labels[i]: p.valuation for i, p in enumerate(instance.profiles)}, profiles_path)
    return seller_label
