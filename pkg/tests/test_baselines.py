from diffauction.baselines import DNAMU, run_dnamu
from diffauction.fixtures import agent, seven_buyers, names
from diffauction.network import AuctionInstance, Report
from diffauction.oracle import best_deviation, replay


def pays(res, who):
    return {x: res.outcome.payment[agent(x)] for x in who}


def test_truthful_run():
    res = run_dnamu(seven_buyers())
    assert names(res.outcome.winners) == list("bcde")
    assert pays(res, "bcde") == {"b": 0, "c": 0, "d": 5, "e": 3}


def test_f_hides_g():
    inst = seven_buyers()
    res = run_dnamu(inst, inst.truthful_reports().replace(agent("f"), Report(7)))
    assert names(res.outcome.winners) == list("abcf")
    assert pays(res, "abcf") == {"a": 1, "b": 0, "c": 0, "f": 6}


def test_weak_comparator_agrees_on_example():
    # no buyer in the example ties her threshold, so both readings agree
    assert run_dnamu(seven_buyers()).outcome == run_dnamu(seven_buyers(), weak=True).outcome


def test_weak_comparator_wins_ties():
    inst = AuctionInstance.from_lists([2, 2], [[], []], [0, 1], 1)
    assert run_dnamu(inst).outcome.winners == []
    assert run_dnamu(inst, weak=True).outcome.winners == [0]


def test_single_buyer():
    res = run_dnamu(AuctionInstance.from_lists([3], [[]], [0], 1))
    assert res.outcome.winners == [0] and res.outcome.payment == (0,)


def test_oracle_finds_f():
    rep = best_deviation(DNAMU(), seven_buyers(), None, agent("f"))
    assert rep.verdict == "violation" and rep.gap > 0
    assert rep.deviation.neighbors == frozenset()
    u0, u1 = replay(DNAMU(), seven_buyers(), rep)
    assert (u0, u1) == (rep.truthful_utility, rep.deviating_utility)


def test_ir_under_truthful_reports():
    from diffauction.oracle import check_static, random_instance

    for s in range(50):
        inst = random_instance(7, 3, 9, [1, s])
        assert check_static(DNAMU(), inst).ir
