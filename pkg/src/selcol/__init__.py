"""Exact solvers for Selective Coloring.

Pick one vertex from every part of a vertex partition so that the chosen
vertices induce a k-colorable subgraph.  Three parameterized algorithms are
provided (treewidth and parts, distance to cluster, cotreewidth and colors)
alongside an exhaustive oracle and instance generators.
"""
from .cluster import (
    ClusterStructure, build_flow_network, extend_precoloring, find_cluster_modulator, solve_cluster,
)
from .cotw import early_reject, solve_cotw
from .errors import (
    BudgetExhausted, CapacityError, InvalidDecomposition, ParseError, PreconditionError, SelcolError,
)
from .flow import FlowNetwork, FlowResult, max_flow
from .generators import ComposeInput, compose, gen_random, named_graph
from .instance import (
    Graph, Instance, Solution, Verdict, complement, induced_subgraph, parse_graph, parse_instance,
    serialize_instance, verdict_from_json, verdict_to_json, verify_solution,
)
from .oracle import OracleLimits, brute_force, is_k_colorable, restricted_brute_force
from .treedecomp import (
    NiceTreeDecomposition, TreeDecomposition, heuristic_decompose, make_nice, parse_td, serialize_td,
    validate_td, width,
)
from .twdp import solve_tw

__version__ = "0.1.0"
