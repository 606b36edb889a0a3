"""End to end: is the graph k-vertex-connected?

Small graphs go to the exact solver.  The sampled route (forced here with
small_threshold=0 and a reduced local iteration count) samples degree
levels mu and seed vertices, runs local cut searches and rounds any
fractional cut it finds into a real separator.  Work and depth are counted
by the cost model.
"""

from vck import cost
from vck.framework import SolveConfig, k_vertex_connectivity
from vck.graph import Graph, validate_integral_cut
from vck.ssf import SSFConfig

G = Graph(20, [(i, (i + 1) % 20) for i in range(20)])
print("C20, k=3, default route:", sorted(k_vertex_connectivity(G, 3, seed=1).separator))

cfg = SolveConfig(small_threshold=0, r=30, ssf=SSFConfig(replication=0.5))
stats = {}
with cost.measure() as c:
    S = k_vertex_connectivity(G, 3, seed=1, repetitions=3, config=cfg, stats=stats)
print("C20, k=3, sampled route:", sorted(S.separator), "valid", validate_integral_cut(G, S))
print("  local searches %d, returns %d, work %d, depth %d"
      % (stats["local_calls"], stats["local_returns"], c.work, c.depth))

K = Graph(8, [(u, v) for u in range(8) for v in range(u + 1, 8)])
print("K8, k=4, sampled route:", k_vertex_connectivity(K, 4, seed=1, repetitions=2, config=cfg))
