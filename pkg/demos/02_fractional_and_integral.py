"""Fractional (s, t)-cuts from multiplicative weights, then rounding.

fractional_st_cut returns vertex lengths C with C(s) = C(t) = 0, total at
most k - 0.5, and every s-t path of length at least 1 (both endpoints
counted).  integral_st_cut turns that into a separator of minimum size.
"""

from vck.graph import exact_vertex_distance, validate_fractional_cut
from vck.mwu import fractional_st_cut
from vck.oracle import exact_st_vertex_connectivity, generate_planted
from vck.rounding import integral_st_cut

pl = generate_planted(6, 2, 10, 0.6, 0.5, seed=3)
G = pl.graph
s, t = pl.L[0], pl.R[0]
kappa = exact_st_vertex_connectivity(G, s, t)[0]
print("planted graph n=%d m=%d, kappa(s, t) = %d" % (G.n, G.m, kappa))

C = fractional_st_cut(G, kappa + 1, s, t)
print("fractional cut size %.3f (limit %.1f)" % (C.size, kappa + 0.5))
print("s-t distance under C: %.3f" % exact_vertex_distance(G, C.dense(G.n), s)[t])
print("valid:", validate_fractional_cut(G, C, kappa + 1))

# asking for fewer than kappa + 1 is impossible: the answer is None
print("k = kappa:", fractional_st_cut(G, kappa, s, t, rounds=2000))

stats = {}
S = integral_st_cut(G, kappa + 1, s, t, seed=1, stats=stats)
print("integral separator", sorted(S.separator), "size", len(S))
print("thresholds sampled %d, rounds %d, sizes %s" % (stats["thetas"], stats["rounds"], stats["sizes"]))
