"""Graphs, vertex cuts and the exact flow oracle.

A cycle on 12 vertices has vertex connectivity 2: removing any two
non-adjacent vertices splits it.  The oracle finds a minimum separator by
max flow on the split graph and Menger paths certify it is tight.
"""

from vck.graph import Graph, validate_integral_cut, separates
from vck.oracle import disjoint_paths, exact_st_vertex_connectivity, exact_vertex_connectivity

G = Graph(12, [(i, (i + 1) % 12) for i in range(12)])
print("n=%d m=%d" % (G.n, G.m))

kappa, sep = exact_vertex_connectivity(G)
print("kappa(G) =", kappa, "witness separator", sorted(sep))
print("valid vertex cut:", validate_integral_cut(G, sep))

k_st, sep_st = exact_st_vertex_connectivity(G, 0, 6)
paths = disjoint_paths(G, 0, 6)
print("kappa(0, 6) =", k_st, "separator", sorted(sep_st), "separates:", separates(G, sep_st, 0, 6))
print("vertex-disjoint 0-6 paths:", [list(p) for p in paths])

# adjacent pairs have no separator; the convention is n - 1
print("kappa(0, 1) =", exact_st_vertex_connectivity(G, 0, 1)[0])
