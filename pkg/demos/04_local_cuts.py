"""Local cut search around a seed vertex.

A planted graph has a small left side L (a path) hanging off the rest
through a single separator vertex.  local_cuts explores only around x,
with cost tied to the volume scale mu, and returns a fractional (x, tau)-cut.
"""

from vck.graph import validate_fractional_cut
from vck.localcuts import LocalCutParams, local_cuts
from vck.oracle import generate_planted
from vck.ssf import SSFConfig

pl = generate_planted(6, 1, 30, 0.3, 0.3, seed=2, shape="path")
G = pl.graph
print("n=%d m=%d  |L|=%d  separator %s  mu=%d  x=%d" % (G.n, G.m, len(pl.L), pl.S, pl.mu, pl.x))

# low-degree vertices away from a far target vertex, as the solver builds them
S = set(pl.S)
t = next(v for v in pl.R if not any(u in S for u in G.adj[v]))
blocked = G.closed_neighborhood([t])
low = [v for v in range(G.n) if G.degree(v) <= 5 * pl.mu and v not in blocked]
inner = next(c for c in G.components(low) if pl.x in c)

params = LocalCutParams(2, pl.mu, pl.x, inner)
# the default sketch replication aims at n^-100 failure; far smaller is plenty here
sketch = SSFConfig(replication=1.0)
print("faithful iteration count r =", params.rounds(G.n))
for seed in range(3):
    st = {}
    C = local_cuts(G, params, seed=seed, ssf_config=sketch, stats=st)
    print("seed %d: %s after %d iterations" % (seed, st["outcome"], st["iterations"]), end="")
    if C is not None:
        print(", tau=%d size=%.3f valid=%s" % (C.t, C.size, validate_fractional_cut(G, C, 2)))
    else:
        print()
