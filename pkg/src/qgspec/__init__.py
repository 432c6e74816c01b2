"""Eigenvalues of Schroedinger operators on metric graphs with delta couplings,
and the closed-form upper bounds they must satisfy."""

from .bounds import BoundReport, evaluate_all
from .graph import MetricGraph, build_graph, graph_invariants
from .io import parse_graph_file
from .potential import Potential
from .secular import secular_spectrum_q0
from .solver import solve_spectrum

__all__ = ["BoundReport", "MetricGraph", "Potential", "build_graph", "evaluate_all",
           "graph_invariants", "parse_graph_file", "secular_spectrum_q0", "solve_spectrum"]
