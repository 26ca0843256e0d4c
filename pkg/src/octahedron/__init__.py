"""Laurent-polynomial solutions of the octahedron recurrence, computed from graphs with open faces."""

from .graph import GraphWithOpenFaces, build_subgraph
from .lattice import HeightFunction, LatticePoint, builtin_height, gale_robinson_height, running_example_height
from .laurent import LaurentPoly
from .matching import count_matchings, enumerate_matchings, matching_polynomial
from .recurrence import EvalContext, eval_f

__version__ = "0.1.0"

__all__ = [
    "EvalContext",
    "GraphWithOpenFaces",
    "HeightFunction",
    "LatticePoint",
    "LaurentPoly",
    "build_subgraph",
    "builtin_height",
    "count_matchings",
    "enumerate_matchings",
    "eval_f",
    "gale_robinson_height",
    "matching_polynomial",
    "running_example_height",
]
