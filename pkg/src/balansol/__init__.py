"""Exact-arithmetic Graph Balancing: configuration LP, local search, dual certificates."""

from .certificate import DualCertificate, certify_infeasibility, verify
from .configlp import lp_feasible, opt_star
from .general import run_general
from .graph import Orientation, WeightedMultigraph, format_graph, makespan, parse_graph
from .oracle import brute_force_opt, enumerate_instances, gen_family
from .params import GeneralParams, SimpleParams
from .simple import run_simple

__version__ = "0.1.0"

__all__ = [
    "DualCertificate",
    "GeneralParams",
    "Orientation",
    "SimpleParams",
    "WeightedMultigraph",
    "brute_force_opt",
    "certify_infeasibility",
    "enumerate_instances",
    "format_graph",
    "gen_family",
    "lp_feasible",
    "makespan",
    "opt_star",
    "parse_graph",
    "run_general",
    "run_simple",
    "verify",
]
