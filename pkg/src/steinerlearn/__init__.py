"""Steiner tree instances, exact and approximate solvers, and learned node scorers."""
from .approx import metric_closure, two_approx
from .exact import brute_force_steiner, dreyfus_wagner, verify_steiner_tree
from .generators import Dataset, GeneratorConfig, build_dataset, generate_instance
from .graph import Graph, STPInstance, SteinerTree
from .heuristics import h1_induced_mst, h2_terminal_promotion
from .steinlib import parse_stp, serialize_stp

__version__ = "0.1.0"
