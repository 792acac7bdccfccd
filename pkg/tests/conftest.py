import pytest

from diffauction.fixtures import agent, seven_buyers
from diffauction.network import AuctionInstance


def chain(values, m=1):
    """s -> 0 -> 1 -> ... with the given valuations."""
    n = len(values)
    return AuctionInstance.from_lists(values, [[i + 1] if i + 1 < n else [] for i in range(n)], [0], m)


def star(values, m=1):
    n = len(values)
    return AuctionInstance.from_lists(values, [[] for _ in range(n)], range(n), m)


@pytest.fixture
def example():
    return seven_buyers()


@pytest.fixture
def A():
    return agent
