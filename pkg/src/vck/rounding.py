"""From fractional to integral (s, t)-vertex cuts.

Thresholding shortest-path distances under a fractional cut C at a level
theta gives a separator whose expected size is the size of C.  The iterative
procedure contracts the two sides of a random threshold cut, solves the
smaller instance again, and finishes with an exact sweep once the graph has
shrunk.
"""

import bisect
import math
import random
from dataclasses import dataclass

from . import cost
from .graph import Graph, VertexCut, exact_vertex_distance, separates, validate_fractional_cut
from .mwu import fractional_st_cut
from .sssp import apx_sssp

EPS = 1.0 / 200


class RoundingError(AssertionError):
    pass


@dataclass
class ThetaCut:
    theta: float
    L: frozenset
    S: frozenset
    R: frozenset


def theta_cut(dist, C, theta, eps=0.0):
    """Threshold partition at theta.  eps = 0 is the exact-distance variant;
    eps > 0 widens the middle band for (1 + eps)-approximate distances."""
    f = 1.0 + eps
    L, S, R = [], [], []
    for v, d in enumerate(dist):
        c = C[v]
        if d < theta:
            L.append(v)
        elif d <= f * (theta + c):
            S.append(v)
        else:
            R.append(v)
    cost.charge(len(dist))
    return ThetaCut(theta, frozenset(L), frozenset(S), frozenset(R))


def _best_theta(dist, C, n):
    """theta in (0, 1) minimising |S_theta|.

    Intervals [d(v) - C(v), d(v)] are closed, so a minimum is attained inside
    an open gap between consecutive breakpoints; the midpoints are the
    candidates.  Counts come from sorted endpoints and are confirmed with the
    exact predicate, since float rounding can blur points that nearly coincide.
    """
    lo = sorted(dist[v] - C[v] for v in range(n))
    hi = sorted(dist[v] for v in range(n))
    pts = sorted({x for x in lo + hi if 0.0 < x < 1.0} | {0.0, 1.0})
    cands = []
    for a, b in zip(pts, pts[1:]):
        th = (a + b) / 2
        if a < th < b:
            cands.append((bisect.bisect_right(lo, th) - bisect.bisect_left(hi, th), th))
    cands.sort()
    cost.charge(len(cands) * max(1, int(math.log2(n + 1))) + n)
    best = None
    for cnt, th in cands:
        if best is not None and cnt >= best[0]:
            break
        size = len(theta_cut(dist, C, th).S)
        if best is None or size < best[0]:
            best = (size, th)
        if size == cnt:
            break
    return best[1]


def sweep_round(G, C):
    """Integral separator from a valid fractional cut by the best exact threshold."""
    s, t = C.s, C.t
    if t not in G.reachable(s):
        return VertexCut(frozenset())
    dist = exact_vertex_distance(G, C, s)
    th = _best_theta(dist, C, G.n)
    cut = theta_cut(dist, C, th)
    if not separates(G, cut.S, s, t):
        raise RoundingError("threshold cut does not separate; the fractional cut is invalid")
    if len(cut.S) > math.floor(C.size + 0.5):
        raise RoundingError("threshold cut larger than the fractional size allows")
    return VertexCut(cut.S, cut.L, cut.R)


@dataclass
class ThetaContraction:
    graph: Graph
    s: int            # new source s'
    t: int            # new sink t'
    orig: list        # local vertex -> vertex of the parent graph (None for s', t')
    cut: ThetaCut


def theta_contract(G, C, s, theta, eps, dist=None):
    """Contract the left side of the approximate theta-cut into s' and the right side into t'."""
    if dist is None:
        if eps > 0:
            dist = apx_sssp(G, C, s, eps, require_connected=False).dist
        else:
            dist = exact_vertex_distance(G, C, s)
    cut = theta_cut(dist, C, theta, eps)
    mid = sorted(cut.S)
    loc = {v: i for i, v in enumerate(mid)}
    sp, tp = len(mid), len(mid) + 1
    edges = set()
    for u, v in G.edges:
        iu, iv = loc.get(u), loc.get(v)
        if iu is not None and iv is not None:
            edges.add((iu, iv))
        elif iu is not None or iv is not None:
            i, other = (iu, v) if iu is not None else (iv, u)
            if other in cut.L:
                edges.add((i, sp))
            else:
                edges.add((i, tp))
    cost.charge(G.m + G.n)
    H = Graph(len(mid) + 2, [(min(a, b), max(a, b)) for a, b in edges])
    return ThetaContraction(H, sp, tp, mid + [None, None], cut)


def smallest_k(G, k, s, t, rounds=None):
    """Least k' in [2, k] with a fractional cut, by binary search; (k', C) or None."""
    C = fractional_st_cut(G, k, s, t, rounds=rounds)
    if C is None:
        return None
    lo, hi, best = 2, k, C
    while lo < hi:
        mid = (lo + hi) // 2
        Cm = fractional_st_cut(G, mid, s, t, rounds=rounds)
        if Cm is None:
            lo = mid + 1
        else:
            hi, best = mid, Cm
    return lo, best


def integral_st_cut(G, k, s, t, seed=0, eps=EPS, stats=None, checks=True, mwu_rounds=None):
    """(s, t)-separator of size kappa(s, t) when kappa(s, t) < k, else None.

    Returns None always when kappa(s, t) >= k.  When kappa(s, t) < k, None
    means no good threshold was found in some round (low probability).
    """
    if s == t:
        raise ValueError("s and t must differ")
    if stats is not None:
        stats.update(rounds=0, thetas=0, separator_checks=0, sizes=[(G.n, G.m)], outcome=None)
    if t not in G.reachable(s):
        if stats is not None:
            stats["outcome"] = "disconnected"
        return VertexCut(frozenset())
    if k < 2:
        return None
    with cost.region("rounding"):
        found = smallest_k(G, k, s, t, mwu_rounds)
        if found is None:
            if stats is not None:
                stats["outcome"] = "no-fractional-cut"
            return None
        k, C = found
        rng = random.Random(seed)
        n = G.n
        h_max = max(0, math.ceil(4 * math.log10(n / k)))
        K = math.ceil(100 * math.log(max(n, 2)) / math.log(10 / 9))
        cur, cs, ct = G, s, t
        chain = []
        for h in range(h_max):
            dist = apx_sssp(cur, C, cs, eps, require_connected=False).dist
            if dist[ct] > 1.9:
                C = C.scaled(1.9 / dist[ct])
                dist = apx_sssp(cur, C, cs, eps, require_connected=False).dist
            nV, nE = cur.n, cur.m
            nxt = None
            for i in range(K):
                theta = rng.uniform(0.0, 1.0 / (1.0 + eps))
                while theta <= 0.0:
                    theta = rng.uniform(0.0, 1.0 / (1.0 + eps))
                tc = theta_contract(cur, C, cs, theta, eps, dist)
                if stats is not None:
                    stats["thetas"] += 1
                if checks:
                    if not separates(cur, tc.cut.S, cs, ct):
                        raise RoundingError("approximate threshold cut is not a separator")
                    if stats is not None:
                        stats["separator_checks"] += 1
                Hg = tc.graph
                if Hg.n > 10 * (2 * eps * nV + 4 * k):
                    continue
                if Hg.m > 10 * (6 * eps * nE + (k / eps) * nV):
                    continue
                Ci = fractional_st_cut(Hg, k, tc.s, tc.t, rounds=mwu_rounds)
                if Ci is None or not validate_fractional_cut(Hg, Ci, k):
                    continue
                nxt = (tc, Ci)
                break
            if nxt is None:
                if stats is not None:
                    stats["outcome"] = "no-good-threshold"
                return None
            tc, C = nxt
            if checks:
                assert tc.graph.n <= 0.1 * nV + 40 * k + 1e-9
                assert tc.graph.m <= 0.3 * nE + 2000 * k * nV + 1e-9
            chain.append(tc.orig)
            cur, cs, ct = tc.graph, tc.s, tc.t
            if stats is not None:
                stats["rounds"] = h + 1
                stats["sizes"].append((cur.n, cur.m))
        S = sweep_round(cur, C).separator
        if len(S) != k - 1:
            raise RoundingError("final sweep found %d vertices, expected %d" % (len(S), k - 1))
        for orig in reversed(chain):
            S = frozenset(orig[v] for v in S)
        if checks and not separates(G, S, s, t):
            raise RoundingError("lifted separator does not separate s and t")
        if stats is not None:
            stats["outcome"] = "cut"
        return VertexCut(S)
