"""Brute-force property checks for diffusion auction mechanisms.

The deviation search fixes every other buyer's report and tries, for one
buyer, every neighbour subset of her true neighbours together with every
valuation on a small grid. Outcomes of the mechanisms here only change when a
reported value crosses another reported value, so ``{0, own value, others'
values}`` widened by ``+-delta`` covers every outcome on integer instances
with ``delta <= 1/2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .core import Outcome, compute_metrics, kth_highest, sw_wopt, top_sum
from .multidemand import (
    MultiInstance,
    MultiOutcome,
    compute_multi_metrics,
    normalize_reports,
    reduce_instance,
)
from .network import SELLER, AuctionInstance, Profile, Report, ReportVector, build_profile_graph
from .strategies import philox

DELTA = 0.5
SUBSET_CAP = 12
FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class Deviation:
    valuation: Any
    neighbors: frozenset[int]

    def report(self) -> Report:
        return Report(self.valuation, self.neighbors)


@dataclass(frozen=True)
class DeviationReport:
    agent: int
    deviation: Deviation | None
    truthful_utility: Any
    deviating_utility: Any
    verdict: str
    tolerance: float = 0
    evaluated: int = 0
    mode: str = "full"
    base_reports: ReportVector | None = field(default=None, repr=False, compare=False)

    @property
    def gap(self):
        return self.deviating_utility - self.truthful_utility

    @property
    def violation(self) -> bool:
        return self.verdict == "violation"

    def witness(self) -> ReportVector:
        """Report vector that reproduces the best deviation."""
        return self.base_reports.replace(self.agent, self.deviation.report())


def agent_utility(instance: AuctionInstance, outcome, agent: int):
    """Utility of ``agent`` measured with her TRUE valuation."""
    v = instance.profiles[agent].valuation
    if isinstance(outcome, MultiOutcome):
        alloc, pay = outcome.allocation[agent], outcome.payment[agent]
        return sum(x * a for x, a in zip(v, alloc)) - sum(pay)
    return v * outcome.allocation[agent] - outcome.payment[agent]


def _outcome_of(result):
    return result if isinstance(result, (Outcome, MultiOutcome)) else result.outcome


def replay(mechanism, instance, report: DeviationReport):
    """Re-run the witness; returns ``(truthful_utility, deviating_utility)``."""
    truthful = report.base_reports.replace(report.agent, _truthful(instance, report.agent))
    u0 = agent_utility(instance, _outcome_of(mechanism(instance, truthful)), report.agent)
    u1 = agent_utility(instance, _outcome_of(mechanism(instance, report.witness())), report.agent)
    return u0, u1


def _truthful(instance, agent) -> Report:
    p = instance.profiles[agent]
    return Report(p.valuation, p.neighbors)


def _flat(valuation) -> Iterable:
    if isinstance(valuation, (tuple, list)):
        return valuation
    return (valuation,)


def value_grid(instance: AuctionInstance, reports: Sequence[Report], agent: int, delta=DELTA) -> list:
    """Candidate reported (slot) values for ``agent``.

    Contains 0, her true value(s), every other buyer's reported value(s), and
    each of those shifted by ``+-delta``; negatives are dropped.
    """
    base = {0, *_flat(instance.profiles[agent].valuation)}
    for j, r in enumerate(reports):
        if j != agent:
            base.update(_flat(r.valuation))
    grid = set()
    for x in base:
        grid.update((x - delta, x, x + delta))
    return sorted(g for g in grid if g >= 0)


def dense_grid(ceiling, step=DELTA) -> list:
    """Every multiple of ``step`` in ``[0, ceiling + 1]``; used to validate :func:`value_grid`."""
    k = int(math.floor((ceiling + 1) / step))
    return [i * step for i in range(k + 1)]


def neighbor_subsets(neighbors: Iterable[int], cap: int = SUBSET_CAP, rng=None, samples: int = 256):
    """All subsets of ``neighbors`` (largest first), or a random sample if there are more than ``2**cap``."""
    items = sorted(neighbors)
    if len(items) <= cap:
        for k in range(len(items), -1, -1):
            for combo in itertools.combinations(items, k):
                yield frozenset(combo)
        return
    rng = philox(0 if rng is None else rng)
    yield frozenset(items)
    yield frozenset()
    for _ in range(samples):
        mask = rng.random(len(items)) < 0.5
        yield frozenset(x for x, keep in zip(items, mask) if keep)


def mu_threshold(instance: AuctionInstance, reports: Sequence[Report] | None = None, agent: int | None = None):
    """The ``m``-th highest (slot) valuation.

    With ``reports`` and ``agent`` given, other buyers contribute their reported
    values and ``agent`` her true one; otherwise true valuations are used.
    """
    values = []
    for j, p in enumerate(instance.profiles):
        src = p.valuation if reports is None or j == agent else reports[j].valuation
        values.extend(_flat(src))
    return kth_highest(values, instance.m)


def _allowed(v_true, v_new, mu, inclusive=True) -> bool:
    return v_new < v_true or (v_new >= mu if inclusive else v_new > mu)


def _slot_ok(true_vec, new_vec, mu, slot_rule, inclusive=True) -> bool:
    changed = [(a, b) for a, b in zip(true_vec, new_vec) if a != b]
    if not changed:
        return True
    if slot_rule == "any":
        return any(_allowed(a, b, mu, inclusive) for a, b in changed)
    if slot_rule == "all":
        return all(_allowed(a, b, mu, inclusive) for a, b in changed)
    raise ValueError(f"unknown slot rule {slot_rule!r}")


def vector_candidates(grid: Sequence, true_vec: tuple, cap: int | None = 2000, rng=None) -> list[tuple]:
    """Non-increasing vectors over ``grid``.

    All of them when there are at most ``cap``; otherwise the true vector,
    every vector differing from it in one slot, and random vectors up to ``cap``.
    """
    m = len(true_vec)
    desc = sorted(set(grid), reverse=True)
    total = math.comb(len(desc) + m - 1, m)
    if cap is None or total <= cap:
        return list(itertools.combinations_with_replacement(desc, m))
    out = {tuple(true_vec)}
    for j in range(m):
        hi = true_vec[j - 1] if j else math.inf
        lo = true_vec[j + 1] if j + 1 < m else 0
        for g in desc:
            if lo <= g <= hi:
                out.add(true_vec[:j] + (g,) + true_vec[j + 1:])
    rng = philox(0 if rng is None else rng)
    attempts = 0
    while len(out) < cap and attempts < 20 * cap:
        attempts += 1
        picks = rng.integers(0, len(desc), size=m)
        out.add(tuple(sorted((desc[k] for k in picks), reverse=True)))
    return sorted(out, reverse=True)


def _tolerance(instance) -> float:
    for p in instance.profiles:
        for v in _flat(p.valuation):
            if isinstance(v, (float, np.floating)) and not float(v).is_integer():
                return FLOAT_TOL
    return 0


def best_deviation(mechanism, instance: AuctionInstance, truthful_reports: Sequence[Report] | None,
                   agent: int, grid: Sequence | None = None, mode: str = "full", mu=None,
                   tolerance=None, slot_rule: str = "all", mu_inclusive: bool = True, subset_cap: int = SUBSET_CAP,
                   vector_cap: int | None = 2000, rng=None) -> DeviationReport:
    """Search ``agent``'s deviations against fixed opponent reports.

    ``truthful_reports`` supplies the opponents' reports; ``agent``'s own entry
    is replaced by her true profile for the baseline. ``mode`` is ``"full"``
    or ``"mu_bounded"``; in the latter only values below her true value or at
    least ``mu`` are tried (``mu`` defaults to the ``m``-th highest value).
    For valuation vectors ``slot_rule`` decides whether ``"all"`` changed
    slots or ``"any"`` one of them must satisfy that restriction.
    ``mu_inclusive=False`` excludes bids exactly at ``mu``.
    """
    if mode not in ("full", "mu_bounded"):
        raise ValueError(f"unknown mode {mode!r}")
    base = ReportVector(truthful_reports if truthful_reports is not None else instance.truthful_reports())
    multi = isinstance(instance, MultiInstance)
    if multi:
        base = normalize_reports(instance, base)
    truth = _truthful(instance, agent)
    base = base.replace(agent, truth)
    if grid is None:
        grid = value_grid(instance, base, agent)
    grid = list(grid)
    if not grid:
        raise ValueError("deviation grid is empty")
    if tolerance is None:
        tolerance = _tolerance(instance)
    if mode == "mu_bounded" and mu is None:
        mu = mu_threshold(instance, base, agent)

    v_true = truth.valuation
    if multi:
        values = vector_candidates(grid, v_true, vector_cap, rng)
        if mode == "mu_bounded":
            values = [v for v in values if _slot_ok(v_true, v, mu, slot_rule, mu_inclusive)]
    else:
        values = [g for g in grid if mode == "full" or _allowed(v_true, g, mu, mu_inclusive)]
        if v_true not in values:
            values.append(v_true)  # neighbour-only deviations

    u_truth = agent_utility(instance, _outcome_of(mechanism(instance, base)), agent)
    best, best_u, count = None, None, 0
    for nb in neighbor_subsets(truth.neighbors, subset_cap, rng):
        for v in values:
            if nb == truth.neighbors and v == v_true:
                continue
            reports = base.replace(agent, Report(v, nb))
            u = agent_utility(instance, _outcome_of(mechanism(instance, reports)), agent)
            count += 1
            if best_u is None or u > best_u:
                best, best_u = Deviation(v, nb), u
    if best_u is None:
        best_u = u_truth
    verdict = "violation" if best_u > u_truth + tolerance else "pass"
    return DeviationReport(agent, best, u_truth, best_u, verdict, tolerance, count, mode, base)


def find_violations(mechanism, instance, reports=None, mode="full", **kw) -> list[DeviationReport]:
    """Run :func:`best_deviation` for every buyer; return the violating reports."""
    out = []
    for i in range(instance.n):
        rep = best_deviation(mechanism, instance, reports, i, mode=mode, **kw)
        if rep.violation:
            out.append(rep)
    return out


def random_opponent_reports(instance: AuctionInstance, agent: int, value_ceiling, rng) -> ReportVector:
    """Random misreports for everyone but ``agent`` (who reports truthfully)."""
    rng = philox(rng)
    reports = []
    for j, p in enumerate(instance.profiles):
        if j == agent:
            reports.append(_truthful(instance, j))
            continue
        items = sorted(p.neighbors)
        keep = rng.random(len(items)) < 0.7
        nb = frozenset(x for x, k in zip(items, keep) if k)
        if isinstance(instance, MultiInstance):
            vec = sorted(rng.integers(0, value_ceiling + 1, size=instance.m).tolist(), reverse=True)
            reports.append(Report(tuple(vec), nb))
        else:
            reports.append(Report(int(rng.integers(0, value_ceiling + 1)), nb))
    return ReportVector(reports)


def spot_check(mechanism, instance, value_ceiling, rng, k: int = 10, mode: str = "full",
               **kw) -> list[DeviationReport]:
    """Deviation search against ``k`` random opponent misreport vectors per buyer."""
    rng = philox(rng)
    out = []
    for i in range(instance.n):
        for _ in range(k):
            base = random_opponent_reports(instance, i, value_ceiling, rng)
            rep = best_deviation(mechanism, instance, base, i, mode=mode, **kw)
            if rep.violation:
                out.append(rep)
    return out


@dataclass(frozen=True)
class StaticCheck:
    ir: bool
    nd: bool
    nw: bool
    efficient: bool
    nonnegative_payments: bool
    social_welfare: Any
    revenue: Any
    sw_opt: Any
    sw_wopt: Any = None
    weak_eff_ratio: float | None = None
    items_allocated: int = 0
    reachable: int = 0

    def weakly_efficient(self, eps) -> bool:
        if self.sw_wopt is None:
            return True
        return self.social_welfare >= eps * self.sw_wopt - FLOAT_TOL


def check_static(mechanism, instance: AuctionInstance, truthful_reports=None, outcome=None) -> StaticCheck:
    """IR, ND, NW, efficiency and weak efficiency of one run.

    Pass ``outcome`` to judge a precomputed outcome instead of running ``mechanism``.
    """
    reports = truthful_reports if truthful_reports is not None else instance.truthful_reports()
    multi = isinstance(instance, MultiInstance)
    result = None
    if outcome is None:
        result = mechanism.run(instance, reports) if hasattr(mechanism, "run") else mechanism(instance, reports)
        outcome = _outcome_of(result)
    if multi:
        metrics = compute_multi_metrics(instance, outcome)
        red, red_reports, _ = reduce_instance(instance, reports)
        reachable = len(build_profile_graph(red, red_reports).reachable_agents)
        payments = [p for row in outcome.payment for p in row]
    else:
        metrics = compute_metrics(instance, outcome)
        reachable = len(build_profile_graph(instance, reports).reachable_agents)
        payments = list(outcome.payment)
    tol = _tolerance(instance)
    wopt = ratio = None
    w_star = getattr(result, "w_star", None)
    if w_star is not None:
        if multi:
            wopt = result.reduced_sw_wopt()
        else:
            wopt = sw_wopt(instance, w_star, reports)
        ratio = metrics.social_welfare / wopt if wopt else None
    return StaticCheck(
        ir=all(u >= -tol for u in metrics.utilities),
        nd=metrics.revenue >= -tol,
        nw=outcome.items_allocated == min(instance.m, reachable),
        efficient=abs(metrics.social_welfare - metrics.sw_opt) <= tol,
        nonnegative_payments=all(p >= -tol for p in payments),
        social_welfare=metrics.social_welfare,
        revenue=metrics.revenue,
        sw_opt=metrics.sw_opt,
        sw_wopt=wopt,
        weak_eff_ratio=ratio,
        items_allocated=outcome.items_allocated,
        reachable=reachable,
    )


def random_instance(n_max: int, m_max: int, value_ceiling: int, rng, multi_demand: bool = False,
                    edge_prob: float = 0.3, n_min: int = 1) -> AuctionInstance:
    """Random seller-connected instance with integer valuations in ``[0, value_ceiling]``.

    Buyers join in a random order; each gets one incoming edge from the seller
    or an earlier buyer, then every other ordered pair is linked with
    probability ``edge_prob``.
    """
    if n_max < 1 or n_min < 1 or n_min > n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    rng = philox(rng)
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    order = rng.permutation(n).tolist()
    nbrs: list[set[int]] = [set() for _ in range(n)]
    seller: set[int] = set()
    for k, b in enumerate(order):
        parent = int(rng.integers(-1, k))
        (seller if parent == -1 else nbrs[order[parent]]).add(b)
    for u in [SELLER, *range(n)]:
        for v in range(n):
            if u != v and rng.random() < edge_prob:
                (seller if u == SELLER else nbrs[u]).add(v)
    if multi_demand:
        vals = [tuple(sorted(rng.integers(0, value_ceiling + 1, size=m).tolist(), reverse=True))
                for _ in range(n)]
        profiles = tuple(Profile(v, frozenset(nb)) for v, nb in zip(vals, nbrs))
        return MultiInstance(m, frozenset(seller), profiles)
    vals = rng.integers(0, value_ceiling + 1, size=n).tolist()
    profiles = tuple(Profile(int(v), frozenset(nb)) for v, nb in zip(vals, nbrs))
    return AuctionInstance(m, frozenset(seller), profiles)


def sw_opt_of(instance) -> Any:
    if isinstance(instance, MultiInstance):
        return top_sum(instance.slot_values(), instance.m)
    return top_sum(instance.valuations, instance.m)
