"""Shortest path trees under vertex lengths.

Vertex lengths are turned into edge lengths w(u, v) = l(u) + l(v); any edge
engine then yields a tree whose paths are shortest (or (1+eps)-short) for
the vertex lengths as well.  Distances on the tree are recomputed from the
vertex lengths so that d(v) = d(parent(v)) + l(v) holds exactly.
"""

import heapq
import math

from . import cost
from .graph import INF, dense_lengths


class DisconnectedError(ValueError):
    def __init__(self, vertex):
        super().__init__("vertex %d is unreachable from the source" % vertex)
        self.vertex = vertex


def vertex_to_edge_length(G, ell):
    """Edge lengths w(e) = l(u) + l(v), indexed by edge id."""
    lens = dense_lengths(ell, G.n)
    return [lens[u] + lens[v] for u, v in G.edges]


def dijkstra_engine(G, wlen, source):
    """Exact edge-length Dijkstra.  Returns (parent, order of settlement)."""
    n = G.n
    dist = [INF] * n
    parent = [-1] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    order = []
    adj, adj_eid = G.adj, G.adj_eid
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        order.append(u)
        for w, e in zip(adj[u], adj_eid[u]):
            if done[w]:
                continue
            nd = d + wlen[e]
            if nd < dist[w]:
                dist[w] = nd
                parent[w] = u
                heapq.heappush(heap, (nd, w))
    k = len(order)
    cost.charge(G.m + k * max(1, int(math.log2(k + 1))), k)
    return parent, order


class ShortestPathTree:
    """Tree rooted at `source`; dist[v] is the vertex length of the tree path."""

    def __init__(self, source, parent, dist, order):
        self.source = source
        self.parent = parent
        self.dist = dist
        self.order = order

    def path_to(self, v):
        if self.dist[v] == INF:
            raise DisconnectedError(v)
        out = [v]
        p = self.parent
        while out[-1] != self.source:
            out.append(p[out[-1]])
        out.reverse()
        return out

    def __repr__(self):
        return "ShortestPathTree(source=%d, reached=%d)" % (self.source, len(self.order))


def apx_sssp(G, ell, s, eps, engine=None, require_connected=True):
    """(1+eps)-approximate shortest path tree from s for vertex lengths ell.

    The default engine is exact, which meets every eps.  With
    require_connected the graph must be connected; otherwise unreachable
    vertices keep distance INF.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    lens = dense_lengths(ell, G.n)
    for x in lens:
        if x < 0:
            raise ValueError("negative vertex length")
    wlen = [lens[u] + lens[v] for u, v in G.edges]
    cost.charge(G.m)
    parent, order = (engine or dijkstra_engine)(G, wlen, s)
    if require_connected and len(order) != G.n:
        reached = set(order)
        missing = next(v for v in range(G.n) if v not in reached)
        raise DisconnectedError(missing)
    dist = [INF] * G.n
    dist[s] = lens[s]
    for v in order:
        if v != s:
            dist[v] = dist[parent[v]] + lens[v]
    return ShortestPathTree(s, parent, dist, order)
