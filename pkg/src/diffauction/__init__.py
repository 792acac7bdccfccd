"""Multi-unit diffusion auctions on social networks.

MUDAN and MUDAR sell ``m`` identical items through a seller's social network,
the multi-demand variants run them on a chain reduction, DNA-MU is included
as a baseline, and :mod:`diffauction.oracle` brute-forces the incentive
properties on small instances.
"""

from .baselines import DNAMU, run_dnamu
from .core import Metrics, Outcome, compute_metrics, sw_wopt, weak_benchmark_set
from .errors import (
    ContractViolation,
    DiffAuctionError,
    InfeasibleReportError,
    InstanceError,
    MalformedReportError,
    ParseError,
    SilentAgentError,
)
from .explorer import ExplorationRules, ExplorationTrace, run_exploration
from .mudan import MUDAN, run_mudan
from .mudar import MUDAR, run_mudar
from .multidemand import (
    MUDANm,
    MUDARm,
    MultiInstance,
    MultiOutcome,
    ReductionMap,
    compute_multi_metrics,
    reduce_instance,
    run_mudan_m,
    run_mudar_m,
)
from .network import (
    SELLER,
    AuctionInstance,
    Profile,
    ProfileGraph,
    Report,
    ReportVector,
    build_profile_graph,
    critical_tree,
    is_critical,
    silent_report,
)
from .strategies import PriorityStrategy

__all__ = [
    "SELLER", "AuctionInstance", "Profile", "ProfileGraph", "Report", "ReportVector",
    "build_profile_graph", "critical_tree", "is_critical", "silent_report",
    "Outcome", "Metrics", "compute_metrics", "sw_wopt", "weak_benchmark_set",
    "ExplorationRules", "ExplorationTrace", "run_exploration",
    "MUDAN", "run_mudan", "MUDAR", "run_mudar", "DNAMU", "run_dnamu",
    "MultiInstance", "MultiOutcome", "ReductionMap", "reduce_instance", "compute_multi_metrics",
    "run_mudan_m", "run_mudar_m", "MUDANm", "MUDARm", "PriorityStrategy",
    "DiffAuctionError", "InstanceError", "MalformedReportError", "InfeasibleReportError",
    "SilentAgentError", "ContractViolation", "ParseError",
]
