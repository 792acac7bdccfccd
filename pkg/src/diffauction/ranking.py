"""Descending-valuation ranking of explored agents with insertion on arrival."""

from __future__ import annotations

from bisect import bisect_left, insort


class Ranking:
    """Agents kept in descending reported valuation, ties by ascending AgentId."""

    __slots__ = ("_keys",)

    def __init__(self):
        self._keys: list[tuple] = []

    def __len__(self):
        return len(self._keys)

    def add(self, agent: int, value) -> None:
        insort(self._keys, (-value, agent))

    def remove(self, agent: int, value) -> None:
        key = (-value, agent)
        idx = bisect_left(self._keys, key)
        if idx == len(self._keys) or self._keys[idx] != key:
            raise KeyError(agent)
        del self._keys[idx]

    def top(self, k: int) -> list[int]:
        return [a for _, a in self._keys[:k]]

    def value_at(self, k: int, default=0):
        """Valuation at 0-based rank ``k`` (the (k+1)-th highest), or ``default``."""
        if k < len(self._keys):
            return -self._keys[k][0]
        return default

    def agents(self) -> list[int]:
        return [a for _, a in self._keys]
