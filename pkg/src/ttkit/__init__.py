"""Train track maps, Nielsen paths and lone-axis certificates for free group automorphisms."""
from .classify import Certificate, classify
from .graph import Graph, GraphError, rose, tighten
from .graphmap import GraphMap, MapError, compose, power, transition_matrix
from .mapfile import ParseError, ValidationError, parse
from .verdict import Verdict

__all__ = ["Certificate", "classify", "Graph", "GraphError", "rose", "tighten", "GraphMap", "MapError",
           "compose", "power", "transition_matrix", "ParseError", "ValidationError", "parse", "Verdict"]
__version__ = "0.1.0"
