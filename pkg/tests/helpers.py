"""Shared fixtures and small reference implementations for the tests."""

import itertools
import math
import random

from vck.graph import Graph


def gnp(n, p, seed):
    rng = random.Random(seed)
    es = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, es)


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def clique(n):
    return Graph(n, list(itertools.combinations(range(n), 2)))


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def all_simple_paths(G, s, t):
    """Every simple s-t path, by plain DFS (tiny graphs only)."""
    out = []
    stack = [(s, [s])]
    while stack:
        u, pth = stack.pop()
        if u == t:
            out.append(pth)
            continue
        for w in G.adj[u]:
            if w not in pth:
                stack.append((w, pth + [w]))
    return out


def brute_distance(G, lens, s, t):
    if s == t:
        return lens[s]
    best = math.inf
    for pth in all_simple_paths(G, s, t):
        best = min(best, sum(lens[v] for v in pth))
    return best


def naive_components(G, removed=()):
    removed = set(removed)
    left = [v for v in range(G.n) if v not in removed]
    label = {}
    comps = []
    for s in left:
        if s in label:
            continue
        label[s] = len(comps)
        comp = [s]
        i = 0
        while i < len(comp):
            u = comp[i]
            i += 1
            for w in G.adj[u]:
                if w not in removed and w not in label:
                    label[w] = len(comps)
                    comp.append(w)
        comps.append(sorted(comp))
    return comps


def brute_st_connectivity(G, s, t):
    """Smallest separator size by subset enumeration; n - 1 if adjacent."""
    if G.has_edge(s, t):
        return G.n - 1
    others = [v for v in range(G.n) if v not in (s, t)]
    for size in range(len(others) + 1):
        for S in itertools.combinations(others, size):
            if t not in G.reachable(s, removed=S):
                return size
    return G.n - 1


def brute_connectivity(G):
    n = G.n
    if all(G.degree(v) == n - 1 for v in range(n)):
        return n - 1
    for size in range(n - 1):
        for S in itertools.combinations(range(n), size):
            if len(naive_components(G, S)) >= 2:
                return size
    return n - 1


def inner_for_planted(pl, seed):
    """V_inner the way the top level builds it: pick t in R away from S, keep
    low-degree vertices outside N[t], and take the component of x."""
    G, mu = pl.graph, pl.mu
    rng = random.Random(seed)
    S = set(pl.S)
    far = [v for v in pl.R if not any(u in S for u in G.adj[v])] or pl.R
    t = rng.choice(far)
    bad = G.closed_neighborhood([t])
    low = [v for v in range(G.n) if G.degree(v) <= 5 * mu and v not in bad]
    return next(c for c in G.components(low) if pl.x in c)
