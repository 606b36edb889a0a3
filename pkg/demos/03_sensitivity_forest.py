"""Sensitivity spanning forest: one batch of edge failures, then queries.

The structure is built once on a graph.  A session applies a single batch of
failed edges and then answers component identity, weight sums and XOR
aggregates.  The base is never mutated, so many sessions can share it.
"""

from vck.graph import Graph
from vck.ssf import SSFConfig, ssf_init

# two triangles joined by a bridge 2-3
G = Graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
base = ssf_init(G, [G.degree(v) for v in range(G.n)], seed=0, config=SSFConfig(replication=0.5))

sess = base.session()
sess.fail([])
print("no failures, ids:", sess.id(range(6)))

sess = base.session()
bridge = G.edges.index((2, 3))
sess.fail([bridge, G.edges.index((0, 1))])
ids = sess.id(range(6))
print("bridge and 0-1 failed, ids:", ids)
print("components:", sess.components(sorted(set(ids))))
print("degree sums per component:", sess.sum(sorted(set(ids))))
