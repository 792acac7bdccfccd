"""Command line entry point: ``diffauction run|check|sweep|reduce``.

Exit codes: 0 success / all checks pass, 1 a property violation was found,
2 usage or input error. The default seed comes from ``DIFFAUCTION_SEED``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import oracle
from .baselines import run_dnamu
from .core import compute_metrics
from .datasets import load_instance, write_instance
from .errors import DiffAuctionError
from .experiment import ExperimentConfig, rows_to_csv, sweep
from .mudan import MUDAN, run_mudan
from .mudar import MUDAR, run_mudar
from .multidemand import MUDANm, MUDARm, compute_multi_metrics, reduce_instance, run_reduced
from .strategies import KINDS, PriorityStrategy

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("diffauction")


def default_seed() -> int:
    raw = os.environ.get("DIFFAUCTION_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise DiffAuctionError(f"DIFFAUCTION_SEED must be an integer, got {raw!r}") from None


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", required=True, help="edge list file (u v per line)")
    p.add_argument("--profiles", required=True, help="profile CSV: agent_id,v1[,v2,...]")
    p.add_argument("--seller", type=int, required=True, help="label of the seller node")
    p.add_argument("-m", "--items", type=int, required=True, help="number of items")
    p.add_argument("--multi", action="store_true", help="multi-demand valuation vectors")
    p.add_argument("--symmetrize", action="store_true", help="treat edges as undirected")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffauction", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one mechanism on one instance")
    _instance_args(run)
    run.add_argument("--mechanism", choices=("mudan", "mudar", "dnamu"), default="mudan")
    run.add_argument("--strategy", choices=KINDS, default="degree")
    run.add_argument("--seed", type=int, default=None, help="seed for the random strategy")
    run.add_argument("--trace", action="store_true", help="include the exploration trace")

    check = sub.add_parser("check", help="brute-force property checks")
    check.add_argument("--mechanism", choices=("mudan", "mudar", "dnamu"), default="mudan")
    check.add_argument("--strategy", choices=KINDS, default="degree")
    check.add_argument("--mode", choices=("full", "mu_bounded"), default=None,
                       help="deviation space (default: full, mu_bounded for mudar)")
    check.add_argument("--instances", type=int, default=100, help="random instances to draw")
    check.add_argument("--n-max", type=int, default=6)
    check.add_argument("--m-max", type=int, default=3)
    check.add_argument("--ceiling", type=int, default=9)
    check.add_argument("--multi", action="store_true")
    check.add_argument("--spot", type=int, default=0, help="random opponent profiles per buyer")
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("--edges", help="check this instance instead of random ones")
    check.add_argument("--profiles")
    check.add_argument("--seller", type=int)
    check.add_argument("-m", "--items", type=int)
    check.add_argument("--symmetrize", action="store_true")

    sw = sub.add_parser("sweep", help="run an experiment sweep and emit CSV")
    sw.add_argument("--config", help="key=value config file")
    sw.add_argument("--out", help="output CSV (default stdout)")
    sw.add_argument("--timing", action="store_true", help="add a runtime column")
    sw.add_argument("--seed", type=int, default=None)
    sw.add_argument("overrides", nargs="*", metavar="KEY=VALUE")

    red = sub.add_parser("reduce", help="write the single-demand reduction of a multi-demand instance")
    _instance_args(red)
    red.add_argument("--out-prefix", required=True, help="writes PREFIX.edges and PREFIX.csv")
    return parser


def _strategy(args) -> PriorityStrategy:
    seed = args.seed if args.seed is not None else default_seed()
    return PriorityStrategy(args.strategy, seed)


def _load(args):
    return load_instance(args.edges, args.profiles, args.seller, args.items, args.multi, args.symmetrize)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def cmd_run(args) -> int:
    inst, labels = _load(args)
    strategy = _strategy(args)
    out = {"mechanism": args.mechanism, "strategy": strategy.kind, "buyers": labels}
    if args.multi:
        if args.mechanism == "dnamu":
            raise DiffAuctionError("dnamu is single-demand only")
        res = run_reduced(inst, None, args.mechanism, strategy)
        outcome, metrics = res.outcome, compute_multi_metrics(inst, res.outcome)
        trace = res.trace
    else:
        if args.mechanism == "dnamu":
            res = run_dnamu(inst)
            trace = None
        else:
            res = (run_mudan if args.mechanism == "mudan" else run_mudar)(inst, None, strategy)
            trace = res.trace
        outcome, metrics = res.outcome, compute_metrics(inst, res.outcome)
    out["allocation"] = {labels[i]: a for i, a in enumerate(outcome.allocation)}
    out["payment"] = {labels[i]: p for i, p in enumerate(outcome.payment)}
    out["utilities"] = {labels[i]: u for i, u in enumerate(metrics.utilities)}
    out.update(social_welfare=metrics.social_welfare, revenue=metrics.revenue, sw_opt=metrics.sw_opt)
    if args.trace and trace is not None:
        out["trace"] = [
            {"increment": list(r.increment), "candidates": list(r.candidates), "winner": r.winner,
             "payment": r.payment}
            for r in trace.iterations
        ]
    print(json.dumps(_jsonable(out), indent=2))
    return EXIT_OK


def _mechanism(name, strategy, multi):
    from .baselines import DNAMU

    if name == "dnamu":
        if multi:
            raise DiffAuctionError("dnamu is single-demand only")
        return DNAMU()
    if multi:
        return (MUDANm if name == "mudan" else MUDARm)(strategy)
    return (MUDAN if name == "mudan" else MUDAR)(strategy)


def _check_one(mech, inst, mode, spot, ceiling, rng) -> dict:
    violations = oracle.find_violations(mech, inst, None, mode=mode)
    if spot:
        violations += oracle.spot_check(mech, inst, ceiling, rng, k=spot, mode=mode)
    static = oracle.check_static(mech, inst)
    failed = [k for k in ("ir", "nd", "nw") if not getattr(static, k)]
    if isinstance(mech, (MUDAR, MUDARm)) and not static.efficient:
        failed.append("efficient")
    if isinstance(mech, (MUDAN, MUDANm)):
        if not static.nonnegative_payments:
            failed.append("nonnegative_payments")
        if not static.weakly_efficient(1 / inst.m):
            failed.append("weak_efficiency")
    return {
        "violations": [
            {"agent": v.agent, "valuation": v.deviation.valuation,
             "neighbors": sorted(v.deviation.neighbors), "truthful_utility": v.truthful_utility,
             "deviating_utility": v.deviating_utility,
             "opponents": [[r.valuation, sorted(r.neighbors)] for r in v.base_reports]}
            for v in violations
        ],
        "failed": failed,
    }


def cmd_check(args) -> int:
    from .strategies import philox

    seed = args.seed if args.seed is not None else default_seed()
    strategy = PriorityStrategy(args.strategy, seed)
    mode = args.mode or ("mu_bounded" if args.mechanism == "mudar" else "full")
    rng = philox([seed, 1])
    reports = []
    if args.edges:
        if args.profiles is None or args.seller is None or args.items is None:
            raise DiffAuctionError("--edges needs --profiles, --seller and -m")
        inst, _ = load_instance(args.edges, args.profiles, args.seller, args.items, args.multi,
                                args.symmetrize)
        instances = [inst]
    else:
        instances = (oracle.random_instance(args.n_max, args.m_max, args.ceiling, [seed, 0, k],
                                            multi_demand=args.multi)
                     for k in range(args.instances))
    bad = 0
    for k, inst in enumerate(instances):
        mech = _mechanism(args.mechanism, strategy, args.multi)
        res = _check_one(mech, inst, mode, args.spot, args.ceiling, rng)
        if res["violations"] or res["failed"]:
            bad += 1
            res["instance"] = k
            res["m"] = inst.m
            res["seller_neighbors"] = sorted(inst.seller_neighbors)
            res["profiles"] = [[p.valuation, sorted(p.neighbors)] for p in inst.profiles]
            reports.append(res)
    summary = {"mechanism": args.mechanism, "mode": mode, "seed": seed, "failing_instances": bad,
               "reports": reports}
    print(json.dumps(_jsonable(summary), indent=2))
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_sweep(args) -> int:
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    elif not args.config and not any(o.startswith("seed=") for o in overrides):
        overrides.append(f"seed={default_seed()}")
    if args.timing:
        overrides.append("timing=true")
    try:
        config = config.with_overrides(overrides)
    except ValueError as exc:
        raise DiffAuctionError(str(exc)) from None
    text = rows_to_csv(sweep(config), config)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    if not args.multi:
        raise DiffAuctionError("reduce expects a multi-demand instance (--multi)")
    inst, labels = _load(args)
    red, _, mapping = reduce_instance(inst)
    prefix = Path(args.out_prefix)
    seller = write_instance(red, f"{prefix}.edges", f"{prefix}.csv")
    mapping_rows = [{"reduced": k, "buyer": labels[mapping.backward(k)[0]], "slot": mapping.backward(k)[1]}
                    for k in range(red.n)]
    print(json.dumps({"seller": seller, "items": red.m, "nodes": mapping_rows}))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "check": cmd_check, "sweep": cmd_sweep, "reduce": cmd_reduce}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DiffAuctionError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
