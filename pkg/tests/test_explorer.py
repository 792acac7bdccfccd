import pytest

from diffauction.errors import ContractViolation
from diffauction.explorer import ExplorationRules, run_exploration
from diffauction.fixtures import seven_buyers, names
from diffauction.mudan import MudanRules
from diffauction.mudar import MudarRules
from diffauction.network import AuctionInstance, build_profile_graph
from diffauction.oracle import random_instance
from diffauction.strategies import PriorityStrategy


def explore(inst, rules, kind="degree"):
    g = build_profile_graph(inst, inst.truthful_reports())
    return run_exploration(g, rules, PriorityStrategy(kind).bind(g))


def test_example_mudan_increments():
    state, trace = explore(seven_buyers(), MudanRules(4))
    assert [names(sorted(x)) for x in trace.increments] == [["a", "b"], ["c"], ["d", "e"], ["f"]]
    assert names(trace.winners) == list("bcef")


def test_example_mudar_increments():
    state, trace = explore(seven_buyers(), MudarRules(4))
    incs = [names(sorted(x)) for x in trace.increments]
    assert incs == [["a", "b"], ["c"], ["d", "e"], ["f"], ["g"], []]
    assert trace.closing_increment == ()
    assert names(trace.winners) == list("bcefdg")


def test_single_buyer():
    inst = AuctionInstance.from_lists([3], [[]], [0], 1)
    state, trace = explore(inst, MudarRules(1))
    assert state.winners == [0] and len(trace.iterations) == 1


class _Greedy(ExplorationRules):
    """Everyone explored is a candidate; used to provoke contract checks."""

    def __init__(self, bad):
        self.bad = bad
        self.calls = 0

    def update_candidates(self, state):
        self.calls += 1
        if self.bad == "unexplored":
            return [6]
        if self.bad == "readmit" and self.calls > 3:
            return sorted(state.exhausted)[:1] or []
        if self.bad == "readmit":
            return [i for i in state.explored if i not in state.winner_set][:1]
        return []


def test_contract_unexplored_candidate():
    with pytest.raises(ContractViolation):
        explore(seven_buyers(), _Greedy("unexplored"))


def test_contract_readmitting_exhausted():
    with pytest.raises(ContractViolation):
        explore(seven_buyers(), _Greedy("readmit"))


class _Checking(MudarRules):
    """MUDAR hooks that assert the loop-head invariants on every call."""

    def update_candidates(self, state):
        cand = super().update_candidates(state)
        assert state.winner_set <= set(state.explored)
        assert set(cand) <= state.explored_set
        for i in state.marked:
            assert set(state.graph.successors[i]) <= state.explored_set
        return cand


@pytest.mark.parametrize("seed", range(60))
def test_invariants_and_replay(seed):
    inst = random_instance(8, 3, 9, seed)
    g = build_profile_graph(inst, inst.truthful_reports())
    s1, t1 = run_exploration(g, _Checking(inst.m), PriorityStrategy("new_agent").bind(g))
    for i in s1.marked:
        assert set(g.successors[i]) <= s1.explored_set
    assert not (s1.exhausted & s1.winner_set)
    s2, t2 = run_exploration(g, MudarRules(inst.m), PriorityStrategy("new_agent").bind(g))
    assert t1 == t2 and s1.winners == s2.winners
    # MUDAR explores the whole reachable graph
    assert s1.explored_set == set(g.reachable_agents)
