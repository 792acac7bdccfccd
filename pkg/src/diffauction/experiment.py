"""Seeded experiment sweeps producing a versioned CSV.

Each trial draws a seller and the valuations from its own Philox stream keyed
by ``(seed, trial)``, so every row can be recomputed from the config alone and
all mechanisms/strategies of a trial see the same auction.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .baselines import DNAMU
from .core import compute_metrics
from .datasets import instance_from_graph
from .graphs import DiGraph, generate_graph, parse_edge_list
from .mudan import MUDAN
from .mudar import MUDAR
from .multidemand import MUDANm, MUDARm, compute_multi_metrics
from .strategies import KINDS, PriorityStrategy, philox
from .valuations import ValuationModel, generate

log = logging.getLogger(__name__)

SCHEMA = "diffauction-sweep/1"
COLUMNS = ("trial", "seller", "buyers", "mechanism", "strategy", "model", "m",
           "sw", "rv", "sw_opt", "sw_per_item", "rv_per_item")
MECHANISMS = ("mudan", "mudar", "dnamu")
GRAPH_STREAM = 2**32 - 1  # trial ids stay below this, so the graph stream never collides


def _tuple(value) -> tuple[str, ...]:
    if isinstance(value, str):
        return tuple(x.strip() for x in value.split(",") if x.strip())
    return tuple(value)


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs. ``graph`` is an edge-list path or ``kind:n=..,..``."""

    graph: str = "pa:n=500,k=2"
    symmetrize: bool = True
    mechanisms: tuple[str, ...] = ("mudan", "mudar")
    strategies: tuple[str, ...] = ("degree",)
    model: str = "degroot"
    ceiling: float = 200000.0
    alpha: float = 0.5
    rounds: int = 10
    m: int = 20
    trials: int = 10
    seller: str = "uniform"
    demand: str = "multi"
    seed: int = 0
    timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mechanisms", _tuple(self.mechanisms))
        object.__setattr__(self, "strategies", _tuple(self.strategies))
        for name in ("m", "trials", "seed", "rounds"):
            object.__setattr__(self, name, int(getattr(self, name)))
        for name in ("ceiling", "alpha"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("symmetrize", "timing"):
            object.__setattr__(self, name, _bool(getattr(self, name)))
        bad = [x for x in self.mechanisms if x not in MECHANISMS]
        if bad:
            raise ValueError(f"unknown mechanisms {bad}; expected some of {MECHANISMS}")
        bad = [x for x in self.strategies if x not in KINDS]
        if bad:
            raise ValueError(f"unknown strategies {bad}; expected some of {KINDS}")
        if self.demand not in ("single", "multi"):
            raise ValueError("demand must be 'single' or 'multi'")
        if self.demand == "multi" and "dnamu" in self.mechanisms:
            raise ValueError("dnamu is single-demand only")
        if self.seller not in ("uniform", "root") and not self.seller.lstrip("-").isdigit():
            raise ValueError("seller must be 'uniform', 'root' or a node label")
        if self.m < 1 or self.trials < 0:
            raise ValueError("need m >= 1 and trials >= 0")
        ValuationModel(self.model, self.ceiling, self.alpha, self.rounds)

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        return cls.from_mapping(parse_key_values(text.splitlines()))

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())

    def with_overrides(self, items) -> "ExperimentConfig":
        data = asdict(self)
        data.update(parse_key_values(items))
        return self.from_mapping(data)

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if isinstance(value, tuple):
                value = ",".join(value)
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"


def parse_key_values(lines) -> dict:
    out = {}
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected key=value, got {text!r}")
        out[key.strip()] = value.strip()
    return out


def load_graph(config: ExperimentConfig) -> DiGraph:
    kind = config.graph.partition(":")[0]
    if kind in ("tree", "pa", "er"):
        return generate_graph(config.graph, philox([config.seed, GRAPH_STREAM]))
    return parse_edge_list(config.graph, config.symmetrize)


def pick_seller(graph: DiGraph, config: ExperimentConfig, rng, max_tries: int = 1000) -> int:
    if config.seller == "root":
        return 0
    if config.seller not in ("uniform",):
        return graph.index(int(config.seller))
    for _ in range(max_tries):
        s = int(rng.integers(0, graph.n))
        if graph.successors[s]:
            return s
        log.info("seller %d has no neighbours, resampling", graph.labels[s])
    raise ValueError("could not find a seller with neighbours")


def _mechanism(name: str, strategy: PriorityStrategy, multi: bool):
    if name == "dnamu":
        return DNAMU()
    if multi:
        return (MUDANm if name == "mudan" else MUDARm)(strategy)
    return (MUDAN if name == "mudan" else MUDAR)(strategy)


def trial_rows(config: ExperimentConfig, graph: DiGraph, trial: int) -> list[dict]:
    rng = philox([config.seed, trial])
    seller = pick_seller(graph, config, rng)
    model = ValuationModel(config.model, config.ceiling, config.alpha, config.rounds)
    multi = config.demand == "multi"
    vals = generate(model, graph.successors, graph.n, config.m if multi else 1, rng)
    inst, _ = instance_from_graph(graph, seller, vals if multi else vals[:, 0].tolist(),
                                  config.m, multi)
    rows = []
    for mech_name in config.mechanisms:
        strategies = ("-",) if mech_name == "dnamu" else config.strategies
        for kind in strategies:
            strategy = PriorityStrategy(kind if kind != "-" else "degree", seed=(config.seed, trial))
            mech = _mechanism(mech_name, strategy, multi)
            start = time.perf_counter()
            outcome = mech(inst)
            elapsed = time.perf_counter() - start
            metrics = (compute_multi_metrics if multi else compute_metrics)(inst, outcome)
            row = {
                "trial": trial, "seller": graph.labels[seller], "buyers": inst.n,
                "mechanism": mech_name, "strategy": kind, "model": model.kind, "m": config.m,
                "sw": float(metrics.social_welfare), "rv": float(metrics.revenue),
                "sw_opt": float(metrics.sw_opt),
                "sw_per_item": float(metrics.social_welfare) / config.m,
                "rv_per_item": float(metrics.revenue) / config.m,
            }
            if config.timing:
                row["runtime_s"] = elapsed
            rows.append(row)
    return rows


def sweep(config: ExperimentConfig, graph: DiGraph | None = None) -> list[dict]:
    graph = graph if graph is not None else load_graph(config)
    rows = []
    for trial in range(config.trials):
        rows.extend(trial_rows(config, graph, trial))
    return rows


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def rows_to_csv(rows: list[dict], config: ExperimentConfig) -> str:
    columns = COLUMNS + (("runtime_s",) if config.timing else ())
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    for line in config.to_text().splitlines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def summarize(rows: list[dict]) -> dict:
    """Mean of sw, rv and sw_opt for each (mechanism, strategy)."""
    groups: dict = {}
    for r in rows:
        key = (r["mechanism"], r["strategy"])
        g = groups.setdefault(key, {"sw": 0.0, "rv": 0.0, "sw_opt": 0.0, "trials": 0})
        for c in ("sw", "rv", "sw_opt"):
            g[c] += float(r[c])
        g["trials"] += 1
    for g in groups.values():
        for c in ("sw", "rv", "sw_opt"):
            g[c] /= g["trials"]
    return groups


def replay_row(config: ExperimentConfig, row: dict, graph: DiGraph | None = None) -> dict:
    """Recompute a single row from the config and its trial index."""
    graph = graph if graph is not None else load_graph(config)
    single = replace(config, mechanisms=(row["mechanism"],),
                     strategies=(config.strategies if row["strategy"] == "-" else (row["strategy"],)))
    for r in trial_rows(single, graph, int(row["trial"])):
        if r["strategy"] == row["strategy"]:
            return r
    raise KeyError("row not reproducible from this config")
