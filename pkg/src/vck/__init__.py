"""Randomized k-vertex-connectivity: sketches, local cuts, fractional cuts and rounding."""

from .graph import (INF, FractionalCut, Graph, GraphError, Path, VertexCut, WeightFunction,
                    exact_vertex_distance, load_graph, dump_graph, validate_fractional_cut,
                    validate_integral_cut)

__version__ = "0.1.0"
