"""Synthetic valuation generators for experiments.

Three models, all drawing from a Philox generator (see :func:`strategies.philox`):

``uniform_iid``
    every slot uniform on ``(0, C)``, sorted descending per buyer.
``top_anchored``
    top slot uniform on ``(0, C)``, the rest uniform on ``(1, top)``.
``degroot``
    top slots start uniform on ``(0, C)`` and are then smoothed by ``T``
    synchronous rounds of ``x <- alpha * x + (1 - alpha) * mean(neighbour x)``;
    remaining slots as in ``top_anchored``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .strategies import philox

MODELS = ("uniform_iid", "top_anchored", "degroot")
ALIASES = {"1": "uniform_iid", "2": "top_anchored", "3": "degroot",
           "model1": "uniform_iid", "model2": "top_anchored", "model3": "degroot"}


@dataclass(frozen=True)
class ValuationModel:
    kind: str = "uniform_iid"
    ceiling: float = 200000.0
    alpha: float = 0.5
    rounds: int = 10

    def __post_init__(self):
        kind = ALIASES.get(str(self.kind).lower(), self.kind)
        if kind not in MODELS:
            raise ValueError(f"unknown valuation model {self.kind!r}; expected one of {MODELS}")
        object.__setattr__(self, "kind", kind)
        if self.ceiling <= 0:
            raise ValueError("ceiling must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.rounds < 0:
            raise ValueError("rounds must be non-negative")


def degroot_round(x: np.ndarray, edges: np.ndarray, alpha: float) -> np.ndarray:
    """One synchronous averaging round over an ``(E, 2)`` array of directed edges.

    A node's neighbours are its out-neighbours; nodes without any keep their value.
    """
    n = len(x)
    if len(edges) == 0:
        return x.copy()
    src, dst = edges[:, 0], edges[:, 1]
    count = np.bincount(src, minlength=n)
    total = np.bincount(src, weights=x[dst], minlength=n)
    out = x.copy()
    has = count > 0
    out[has] = alpha * x[has] + (1 - alpha) * total[has] / count[has]
    return out


def _edge_array(graph) -> np.ndarray:
    if isinstance(graph, np.ndarray):
        return graph.reshape(-1, 2).astype(np.int64)
    pairs = [(u, v) for u, nbrs in enumerate(graph) for v in nbrs]
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def generate(model: ValuationModel | str, graph: Sequence | None, n: int, m: int, rng) -> np.ndarray:
    """Return an ``(n, m)`` array of non-increasing valuation vectors.

    ``graph`` is an adjacency list (``graph[u]`` iterates over neighbours of
    ``u``) or an ``(E, 2)`` edge array; only the ``degroot`` model reads it.
    """
    if not isinstance(model, ValuationModel):
        model = ValuationModel(model)
    if m < 1:
        raise ValueError("m must be at least 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    if model.kind == "degroot" and graph is None:
        raise ValueError("the degroot model needs a graph")
    rng = philox(rng)
    c = model.ceiling
    if model.kind == "uniform_iid":
        vals = rng.uniform(0, c, size=(n, m))
        return -np.sort(-vals, axis=1)
    top = rng.uniform(0, c, size=n)
    if model.kind == "degroot":
        edges = _edge_array(graph)
        for _ in range(model.rounds):
            top = degroot_round(top, edges, model.alpha)
    rest = rng.uniform(0, 1, size=(n, m - 1))
    low = np.minimum(1.0, top)
    rest = low[:, None] + rest * (top - low)[:, None]
    vals = np.concatenate([top[:, None], rest], axis=1)
    return -np.sort(-vals, axis=1)
