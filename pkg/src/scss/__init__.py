"""Solvers for the Strongly Connected Steiner Subgraph problem and relatives:
a Cut&Count decision procedure over tree decompositions, an exact
subset-DP optimizer, a vertex-cover kernel and supporting reductions."""
from .errors import SCSSError
from .exact import solve_exact
from .formats import Instance, parse_instance
from .graph import Digraph, Graph

__version__ = "0.1.0"

__all__ = ["Digraph", "Graph", "Instance", "SCSSError", "parse_instance", "solve_exact"]
