import pytest

from diffauction.experiment import (
    COLUMNS,
    SCHEMA,
    ExperimentConfig,
    read_csv,
    replay_row,
    rows_to_csv,
    summarize,
    sweep,
)

SMALL = dict(graph="pa:n=60,k=2", m=3, trials=4, model="degroot", ceiling=100,
             mechanisms="mudan,mudar", strategies="degree,new_agent,random")


def test_csv_is_byte_identical_across_runs():
    cfg = ExperimentConfig(**SMALL, seed=3)
    a = rows_to_csv(sweep(cfg), cfg)
    assert a == rows_to_csv(sweep(cfg), cfg)
    assert a.splitlines()[0] == f"# schema={SCHEMA}"
    assert a != rows_to_csv(sweep(ExperimentConfig(**SMALL, seed=4)), cfg)


def test_rows_and_columns():
    cfg = ExperimentConfig(**SMALL)
    rows = read_csv(rows_to_csv(sweep(cfg), cfg))
    assert list(rows[0]) == list(COLUMNS)
    assert len(rows) == 4 * 2 * 3
    for r in rows:
        sw, opt = float(r["sw"]), float(r["sw_opt"])
        if r["mechanism"] == "mudar":
            assert sw == pytest.approx(opt, rel=1e-9)
        else:
            assert sw <= opt * (1 + 1e-9)
        assert float(r["sw_per_item"]) == pytest.approx(sw / 3)


def test_timing_column_opt_in():
    cfg = ExperimentConfig(**dict(SMALL, trials=1), timing=True)
    header = [ln for ln in rows_to_csv(sweep(cfg), cfg).splitlines() if not ln.startswith("#")][0]
    assert header.endswith(",runtime_s")


def test_replay_row():
    cfg = ExperimentConfig(**SMALL, seed=7)
    rows = sweep(cfg)
    target = rows[-1]
    assert replay_row(cfg, target) == target


def test_single_demand_with_dnamu():
    cfg = ExperimentConfig(**dict(SMALL, mechanisms="mudan,dnamu"), demand="single")
    rows = sweep(cfg)
    assert {r["strategy"] for r in rows if r["mechanism"] == "dnamu"} == {"-"}
    assert replay_row(cfg, rows[-1]) == rows[-1]


def test_summarize():
    rows = [{"mechanism": "a", "strategy": "x", "sw": 2, "rv": 1, "sw_opt": 4},
            {"mechanism": "a", "strategy": "x", "sw": 4, "rv": 3, "sw_opt": 4}]
    assert summarize(rows)[("a", "x")] == {"sw": 3.0, "rv": 2.0, "sw_opt": 4.0, "trials": 2}


def test_config_round_trip_and_overrides():
    cfg = ExperimentConfig(**SMALL, seed=9)
    assert ExperimentConfig.from_text(cfg.to_text()) == cfg
    assert cfg.with_overrides(["m=5", "timing=yes"]).m == 5
    for bad in (["nope=1"], ["mechanisms=vcg"], ["demand=both"], ["m=0"], ["seller=x"], ["trials"]):
        with pytest.raises(ValueError):
            cfg.with_overrides(bad)
    with pytest.raises(ValueError):
        ExperimentConfig(mechanisms="dnamu", demand="multi")


def test_edge_list_graph_and_fixed_seller(tmp_path):
    (tmp_path / "g.edges").write_text("0 1\n1 2\n2 3\n")
    cfg = ExperimentConfig(graph=str(tmp_path / "g.edges"), seller="0", m=2, trials=2, model="uniform_iid",
                           mechanisms="mudar")
    rows = sweep(cfg)
    assert all(r["seller"] == 0 and r["buyers"] == 3 for r in rows)
