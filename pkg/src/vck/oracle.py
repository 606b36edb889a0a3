"""Exact vertex connectivity by unit-capacity max flow, and a planted-cut generator."""

import json
import math
import random
from collections import deque
from dataclasses import dataclass

from .graph import Graph, VertexCut

BIG = 1 << 30


class _SplitNetwork:
    """Vertex-split flow network: v_in = 2v, v_out = 2v + 1."""

    def __init__(self, G, s, t):
        self.G = G
        self.s, self.t = s, t
        self.cap = {}
        self.nbr = [[] for _ in range(2 * G.n)]
        for v in range(G.n):
            self._arc(2 * v, 2 * v + 1, BIG if v in (s, t) else 1)
        for u, v in G.edges:
            self._arc(2 * u + 1, 2 * v, BIG)
            self._arc(2 * v + 1, 2 * u, BIG)

    def _arc(self, a, b, c):
        if (a, b) not in self.cap:
            self.nbr[a].append(b)
            self.nbr[b].append(a)
            self.cap.setdefault((b, a), 0)
        self.cap[(a, b)] = self.cap.get((a, b), 0) + c

    def augment(self):
        src, snk = 2 * self.s + 1, 2 * self.t
        prev = {src: None}
        dq = deque([src])
        cap = self.cap
        while dq and snk not in prev:
            a = dq.popleft()
            for b in self.nbr[a]:
                if b not in prev and cap[(a, b)] > 0:
                    prev[b] = a
                    dq.append(b)
        if snk not in prev:
            return False
        b = snk
        while prev[b] is not None:
            a = prev[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        return True

    def source_side(self):
        src = 2 * self.s + 1
        seen = {src}
        dq = deque([src])
        while dq:
            a = dq.popleft()
            for b in self.nbr[a]:
                if b not in seen and self.cap[(a, b)] > 0:
                    seen.add(b)
                    dq.append(b)
        return seen


def max_vertex_flow(G, s, t, limit=None):
    """Number of internally disjoint s-t paths (capped at limit) and the network."""
    net = _SplitNetwork(G, s, t)
    flow = 0
    while (limit is None or flow < limit) and net.augment():
        flow += 1
    return flow, net


def exact_st_vertex_connectivity(G, s, t, limit=None):
    """(kappa(s, t), minimum separator).  Adjacent pairs give (n - 1, None).

    With limit, stops once kappa >= limit and returns (limit, None).
    """
    if s == t:
        raise ValueError("s and t must differ")
    if G.has_edge(s, t):
        return G.n - 1, None
    flow, net = max_vertex_flow(G, s, t, limit)
    if limit is not None and flow >= limit:
        return flow, None
    side = net.source_side()
    sep = frozenset(v for v in range(G.n) if v not in (s, t)
                    and 2 * v in side and 2 * v + 1 not in side)
    assert len(sep) == flow
    return flow, sep


def disjoint_paths(G, s, t):
    """Decompose a maximum flow into internally vertex-disjoint s-t paths."""
    if G.has_edge(s, t):
        raise ValueError("adjacent endpoints")
    flow, net = max_vertex_flow(G, s, t)
    used = {}
    for u, v in G.edges:
        for a, b in ((u, v), (v, u)):
            f = BIG - net.cap[(2 * a + 1, 2 * b)]
            if f > 0:
                used.setdefault(a, []).extend([b] * f)
    paths = []
    for _ in range(flow):
        p = [s]
        while p[-1] != t:
            p.append(used[p[-1]].pop())
        paths.append(p)
    return paths


def exact_vertex_connectivity(G, limit=None):
    """(kappa(G), separator or None).  Complete graphs give n - 1.

    Pairs: a minimum-degree vertex against every non-neighbour, plus every
    non-adjacent pair of its neighbours.  With limit, stops as soon as a
    cut smaller than limit is known or kappa >= limit is certain.
    """
    n = G.n
    if n < 2:
        raise ValueError("need at least two vertices")
    comps = G.components()
    if len(comps) > 1:
        return 0, frozenset()
    s = min(range(n), key=lambda v: (G.degree(v), v))
    best, best_sep = n - 1, None
    pairs = [(s, v) for v in range(n) if v != s and not G.has_edge(s, v)]
    nb = G.adj[s]
    for i in range(len(nb)):
        for j in range(i + 1, len(nb)):
            if not G.has_edge(nb[i], nb[j]):
                pairs.append((nb[i], nb[j]))
    for a, b in pairs:
        cap = best if limit is None else min(best, limit)
        k, sep = exact_st_vertex_connectivity(G, a, b, limit=cap)
        if sep is not None and k < best:
            best, best_sep = k, sep
            if limit is not None and best < limit:
                break
    return best, best_sep


def small_instance_cut(G, k):
    """Exact decision: a separator of size < k, or None.

    A complete graph has kappa = n - 1; when that is below k the answer is
    n - 1 vertices, leaving a single vertex behind.
    """
    if G.n < 2:
        return None
    kappa, sep = exact_vertex_connectivity(G, limit=k)
    if kappa >= k:
        return None
    if sep is None:
        return VertexCut(frozenset(range(1, G.n)))
    return VertexCut(sep)


# ---------------------------------------------------------------- generator

@dataclass
class Planted:
    graph: Graph
    L: list
    S: list
    R: list
    mu: int
    x: int

    def witness(self):
        return {"L": self.L, "S": self.S, "R": self.R, "mu": self.mu, "x": self.x}

    def dump_witness(self, stream):
        json.dump(self.witness(), stream, indent=1)
        stream.write("\n")


def _connected(vertices, edges):
    vs = list(vertices)
    if not vs:
        return True
    adj = {v: [] for v in vs}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def generate_planted(nL, nS, nR, p_in, p_cross, seed, mu_target=None, shape="random"):
    """Random graph with a planted vertex cut (L, S, R).

    Edges inside L and inside R appear with probability p_in (shape="path"
    makes G[L] a path instead), edges between S and L or R with p_cross, and
    every separator vertex touches both sides.  There are no L-R edges.
    """
    if nS < 1:
        raise ValueError("nS must be at least 1")
    if not (nS < nL and nS < nR):
        raise ValueError("need nS < nL and nS < nR")
    for p in (p_in, p_cross):
        if not 0 < p <= 1:
            raise ValueError("densities must lie in (0, 1]")
    rng = random.Random(seed)
    n = nL + nS + nR
    for _ in range(100):
        ids = list(range(n))
        rng.shuffle(ids)
        L, S, R = ids[:nL], ids[nL:nL + nS], ids[nL + nS:]
        edges = set()

        def add(a, b):
            edges.add((min(a, b), max(a, b)))

        if shape == "path":
            for i in range(nL - 1):
                add(L[i], L[i + 1])
        else:
            for i in range(nL):
                for j in range(i + 1, nL):
                    if rng.random() < p_in:
                        add(L[i], L[j])
        for i in range(nR):
            for j in range(i + 1, nR):
                if rng.random() < p_in:
                    add(R[i], R[j])
        for i in range(nS):
            for j in range(i + 1, nS):
                if rng.random() < p_in:
                    add(S[i], S[j])
        for s in S:
            side_l = [v for v in L if rng.random() < p_cross] or [rng.choice(L)]
            side_r = [v for v in R if rng.random() < p_cross] or [rng.choice(R)]
            for v in side_l + side_r:
                add(s, v)
        inner_l = [e for e in edges if e[0] in set(L) and e[1] in set(L)]
        inner_r = [e for e in edges if e[0] in set(R) and e[1] in set(R)]
        if not (_connected(L, inner_l) and _connected(R, inner_r)):
            continue
        G = Graph(n, edges)
        vol = G.volume(L)
        mu = mu_target if mu_target is not None else (vol + 1) // 2
        if not (mu <= vol <= 2 * mu):
            continue
        if any(G.degree(v) > 5 * mu for v in L):
            continue
        x = rng.choice(L)
        return Planted(G, sorted(L), sorted(S), sorted(R), mu, x)
    raise ValueError("could not build a planted instance with connected sides in 100 tries")


def generate_gnp(n, p, seed):
    """Erdos-Renyi G(n, p) in O(n + m) time by geometric skipping."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    edges = []
    if p > 0:
        lq = math.log(1.0 - p) if p < 1 else None
        v, w = 1, -1
        while v < n:
            if lq is None:
                w += 1
            else:
                w += 1 + int(math.log(1.0 - rng.random()) / lq)
            while w >= v and v < n:
                w -= v
                v += 1
            if v < n:
                edges.append((w, v))
    return Graph(n, edges)
