"""Worked example networks.

``seven_buyers`` is the seven-buyer tree ``s -> a, b``; ``b -> c``; ``c -> d, e``;
``e -> f``; ``f -> g``, with valuations
``a=3, b=1, c=1, d=6, e=4, f=7, g=5``.
"""

from __future__ import annotations

from .network import AuctionInstance, Profile

EXAMPLE_NAMES = "abcdefg"
EXAMPLE_VALUES = {"a": 3, "b": 1, "c": 1, "d": 6, "e": 4, "f": 7, "g": 5}
EXAMPLE_EDGES = {"a": "", "b": "c", "c": "de", "d": "", "e": "f", "f": "g", "g": ""}
EXAMPLE_SELLER = "ab"


def agent(name: str) -> int:
    return EXAMPLE_NAMES.index(name)


def names(agents) -> list[str]:
    return [EXAMPLE_NAMES[i] for i in agents]


def seven_buyers(m: int = 4, values: dict | None = None) -> AuctionInstance:
    values = {**EXAMPLE_VALUES, **(values or {})}
    profiles = tuple(
        Profile(values[x], frozenset(agent(y) for y in EXAMPLE_EDGES[x])) for x in EXAMPLE_NAMES
    )
    return AuctionInstance(m, frozenset(agent(x) for x in EXAMPLE_SELLER), profiles)


def tightness_family(m: int, n_value, tau) -> AuctionInstance:
    """Network with ``2m`` buyers on which no-reward truthful auctions lose a factor ``m``.

    A chain ``s -> i_1 -> ... -> i_{m-1}`` whose last node reveals the
    ``m-1`` buyers ``j_k`` (valuation ``n^2 - tau``) and ``i_m`` (valuation
    ``n^2``); ``i_m`` alone leads to ``i_{m+1}`` (valuation ``n^3``). The
    chain buyers ``i_1..i_{m-1}`` value an item at ``n``.

    Ids: ``i_k`` is ``k-1`` for ``k = 1..m+1``, ``j_k`` is ``m + k`` for ``k = 1..m-1``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    i_ids = list(range(m + 1))
    j_ids = [m + 1 + k for k in range(m - 1)]
    n_buyers = len(i_ids) + len(j_ids)
    values = [0] * n_buyers
    neighbors: list[set[int]] = [set() for _ in range(n_buyers)]
    for k in range(m - 1):
        values[i_ids[k]] = n_value
    values[i_ids[m - 1]] = n_value ** 2
    values[i_ids[m]] = n_value ** 3
    for j in j_ids:
        values[j] = n_value ** 2 - tau
    for k in range(m - 2):
        neighbors[i_ids[k]].add(i_ids[k + 1])
    if m >= 2:
        hub = i_ids[m - 2]
        neighbors[hub].update(j_ids)
        neighbors[hub].add(i_ids[m - 1])
    neighbors[i_ids[m - 1]].add(i_ids[m])
    profiles = tuple(Profile(v, frozenset(nb)) for v, nb in zip(values, neighbors))
    return AuctionInstance(m, frozenset({i_ids[0]}), profiles)
