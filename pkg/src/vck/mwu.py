"""Deterministic multiplicative-weights solver for fractional (s, t)-vertex cuts."""

import math
from collections import Counter

from . import cost
from .graph import FractionalCut
from .sssp import apx_sssp

# returned values are shrunk by this factor so that rounding in the float
# sum cannot push the size above k - 0.5
SIZE_GUARD = 1.0 - 1e-12


def mwu_rounds(k, n):
    return max(1, math.ceil(320 * k ** 3 * math.log(max(n, 2))))


def fractional_st_cut(G, k, s, t, rounds=None, stats=None, engine=None, on_round=None):
    """Fractional (s, t)-cut of size at most k - 0.5, or None.

    Weights start at 0 on s and t and 1 elsewhere.  Each round takes an
    approximate shortest s-t path P; if w(P) > W / (k - 0.6) the scaled
    weights are returned, otherwise every vertex of P is multiplied by
    1 + eps.  A returned cut always satisfies dist(s, t) >= 1.

    If t is unreachable the empty cut is returned.  Pass a dict as stats to
    receive the number of rounds run and per-vertex bump counts; on_round,
    if given, is called as on_round(i, w, P) before each decision.
    """
    n = G.n
    if k < 2:
        raise ValueError("k must be at least 2")
    if s == t or not (0 <= s < n and 0 <= t < n):
        raise ValueError("need two distinct vertices of the graph")
    if rounds is None:
        rounds = mwu_rounds(k, n)
    eps = 1.0 / (16 * (k - 1))
    bumps = Counter()
    if stats is not None:
        stats.update(rounds=0, bumps=bumps, limit=rounds)
    if t not in G.reachable(s):
        return FractionalCut(s, t, {})
    if G.has_edge(s, t):
        # every path has weight 0, so no round could ever return
        return None
    w = [1.0] * n
    w[s] = w[t] = 0.0
    comp = None
    with cost.region("mwu"):
        for i in range(rounds):
            if stats is not None:
                stats["rounds"] = i + 1
            if comp is None:
                comp = G.reachable(s)
                if len(comp) < n:
                    sub, old = G.induced(sorted(comp))
                    local = {v: j for j, v in enumerate(old)}
                else:
                    sub, old, local = G, None, None
            if old is None:
                T = apx_sssp(sub, w, s, eps, engine=engine)
                P = T.path_to(t)
            else:
                T = apx_sssp(sub, [w[v] for v in old], local[s], eps, engine=engine)
                P = [old[v] for v in T.path_to(local[t])]
            wp = math.fsum(w[v] for v in P)
            W = math.fsum(w)
            cost.charge(n + len(P), cost.log_depth(n))
            if on_round is not None:
                on_round(i, w, P)
            if wp > W / (k - 0.6):
                scale = (k - 0.5) / W * SIZE_GUARD
                return FractionalCut(s, t, {v: x * scale for v, x in enumerate(w) if x > 0})
            for v in P[1:-1]:
                w[v] *= 1.0 + eps
                bumps[v] += 1
    return None

