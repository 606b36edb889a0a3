"""Graph representation, cut objects and exact vertex-length distances.

Vertices are 0..n-1 internally.  The DIMACS-like text format is 1-based.
"""

import heapq
import math
from dataclasses import dataclass, field

from . import cost

INF = math.inf   # unreachable marker; never replaced by a large finite value


class GraphError(ValueError):
    pass


class Graph:
    """Immutable undirected simple graph.

    Edge ids are dense 0..m-1 in lexicographic order of (min, max) endpoints.
    """

    __slots__ = ("n", "m", "edges", "adj", "adj_eid", "_eid", "_deg")

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 0:
            raise GraphError("negative vertex count")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError("self-loop at vertex %d" % u)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError("edge (%d, %d) out of range" % (u, v))
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise GraphError("parallel edge (%d, %d)" % e)
            norm.add(e)
        self.n = n
        self.edges = tuple(sorted(norm))
        self.m = len(self.edges)
        self._eid = {e: i for i, e in enumerate(self.edges)}
        nbrs = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            nbrs[u].append((v, i))
            nbrs[v].append((u, i))
        for lst in nbrs:
            lst.sort()
        self.adj = tuple(tuple(w for w, _ in lst) for lst in nbrs)
        self.adj_eid = tuple(tuple(i for _, i in lst) for lst in nbrs)
        self._deg = tuple(len(a) for a in self.adj)

    def __repr__(self):
        return "Graph(n=%d, m=%d)" % (self.n, self.m)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def degree(self, v):
        return self._deg[v]

    @property
    def degrees(self):
        return self._deg

    def volume(self, vertices):
        """deg_G(S): sum of degrees over S."""
        d = self._deg
        return sum(d[v] for v in vertices)

    def neighbors(self, v):
        return self.adj[v]

    def has_edge(self, u, v):
        return ((u, v) if u < v else (v, u)) in self._eid

    def edge_id(self, u, v):
        try:
            return self._eid[(u, v) if u < v else (v, u)]
        except KeyError:
            raise GraphError("no edge (%d, %d)" % (u, v)) from None

    def boundary(self, vertices):
        """N(S): vertices outside S adjacent to S."""
        inside = set(vertices)
        out = set()
        adj = self.adj
        for v in inside:
            for w in adj[v]:
                if w not in inside:
                    out.add(w)
        return out

    def closed_neighborhood(self, vertices):
        s = set(vertices)
        return s | self.boundary(s)

    def incident_edges(self, vertices):
        """Edge ids of the union of delta(v) over the given vertices."""
        out = set()
        ae = self.adj_eid
        for v in vertices:
            out.update(ae[v])
        return out

    def induced(self, vertices):
        """Induced subgraph.  Returns (H, old_of_new) with local ids 0..|S|-1."""
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        es = []
        adj = self.adj
        for v in old:
            iv = new_of[v]
            for w in adj[v]:
                if w > v and w in new_of:
                    es.append((iv, new_of[w]))
        return Graph(len(old), es), old

    def components(self, vertices=None, removed=()):
        """Connected components of G[vertices] - removed, as sorted lists."""
        if vertices is None:
            alive = [True] * self.n
        else:
            alive = [False] * self.n
            for v in vertices:
                alive[v] = True
        for v in removed:
            alive[v] = False
        seen = [False] * self.n
        adj = self.adj
        comps = []
        touched = 0
        for s in range(self.n):
            if not alive[s] or seen[s]:
                continue
            seen[s] = True
            stack = [s]
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    touched += 1
                    if alive[w] and not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comp.sort()
            comps.append(comp)
        cost.charge(self.n + touched)
        return comps

    def is_connected(self):
        return self.n <= 1 or len(self.components()) == 1

    def reachable(self, s, removed=()):
        """Set of vertices reachable from s in G - removed."""
        blocked = set(removed)
        if s in blocked:
            return set()
        seen = {s}
        stack = [s]
        adj = self.adj
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen and w not in blocked:
                    seen.add(w)
                    stack.append(w)
        return seen


@dataclass(frozen=True)
class Path:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def edge_pairs(self):
        vs = self.vertices
        return [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def is_valid(self, G, simple=True):
        vs = self.vertices
        if not vs:
            return False
        if simple and len(set(vs)) != len(vs):
            return False
        return all(G.has_edge(u, v) for u, v in self.edge_pairs())

    def length(self, ell):
        return math.fsum(ell[v] for v in self.vertices)

    def __len__(self):
        return len(self.vertices)


class WeightFunction:
    """Vertex weights stored sparsely: only entries different from 1 are kept."""

    __slots__ = ("_w",)

    def __init__(self, init=None):
        self._w = {}
        if init:
            for v, x in dict(init).items():
                self[v] = x

    def __getitem__(self, v):
        return self._w.get(v, 1.0)

    def __setitem__(self, v, x):
        x = float(x)
        if not x >= 0.0:
            raise ValueError("negative weight %r at vertex %r" % (x, v))
        if x == 1.0:
            self._w.pop(v, None)
        else:
            self._w[v] = x

    def nontrivial(self):
        """Dict of vertex -> weight for every vertex with weight != 1."""
        return self._w

    def total(self, n):
        """Sum of all n weights."""
        w = self._w
        return math.fsum(w.values()) + (n - len(w))

    def copy(self):
        out = WeightFunction()
        out._w = dict(self._w)
        return out

    def dense(self, n):
        out = [1.0] * n
        for v, x in self._w.items():
            out[v] = x
        return out

    def __len__(self):
        return len(self._w)

    def __repr__(self):
        return "WeightFunction(%r)" % (self._w,)


@dataclass
class FractionalCut:
    """Sparse non-negative vertex lengths with endpoints (s, t).  Missing entries are 0."""
    s: int
    t: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = {}
        for v, x in self.values.items():
            x = float(x)
            if x < 0 or math.isnan(x):
                raise ValueError("negative cut value at %r" % (v,))
            if x > 0:
                vals[int(v)] = x
        self.values = vals

    def __getitem__(self, v):
        return self.values.get(v, 0.0)

    @property
    def size(self):
        return math.fsum(self.values.values())

    def support(self):
        return sorted(self.values)

    def dense(self, n):
        out = [0.0] * n
        for v, x in self.values.items():
            out[v] = x
        return out

    def scaled(self, factor):
        return FractionalCut(self.s, self.t, {v: x * factor for v, x in self.values.items()})


@dataclass
class VertexCut:
    separator: frozenset
    L: frozenset = None
    R: frozenset = None

    def __post_init__(self):
        self.separator = frozenset(self.separator)
        if self.L is not None:
            self.L = frozenset(self.L)
        if self.R is not None:
            self.R = frozenset(self.R)

    def __len__(self):
        return len(self.separator)

    def sorted(self):
        return sorted(self.separator)


def dense_lengths(ell, n):
    """Turn any supported length object into a list of n floats."""
    if isinstance(ell, WeightFunction):
        return ell.dense(n)
    if isinstance(ell, FractionalCut):
        return ell.dense(n)
    if isinstance(ell, dict):
        return [float(ell.get(v, 0.0)) for v in range(n)]
    out = [float(x) for x in ell]
    if len(out) != n:
        raise ValueError("length vector has %d entries, expected %d" % (len(out), n))
    return out


def exact_vertex_distance(G, ell, s):
    """Exact dist_{G,ell}(s, .) where a path costs the sum of its vertex lengths.

    Both endpoints count.  Unreachable vertices get INF.
    """
    lens = dense_lengths(ell, G.n)
    for x in lens:
        if x < 0:
            raise ValueError("negative vertex length")
    dist = [INF] * G.n
    dist[s] = lens[s]
    done = [False] * G.n
    heap = [(lens[s], s)]
    adj = G.adj
    pops = 0
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        pops += 1
        for w in adj[u]:
            nd = d + lens[w]
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    cost.charge(G.m + pops * max(1, int(math.log2(pops + 1))))
    return dist


def _shortest_path(G, lens, s, t):
    """Vertex-length Dijkstra returning (distance, path) or (INF, None)."""
    dist = {s: lens[s]}
    parent = {s: -1}
    heap = [(lens[s], s)]
    done = set()
    adj = G.adj
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if u == t:
            path = [t]
            while parent[path[-1]] != -1:
                path.append(parent[path[-1]])
            return d, path[::-1]
        done.add(u)
        for w in adj[u]:
            nd = d + lens[w]
            if nd < dist.get(w, INF):
                dist[w] = nd
                parent[w] = u
                heapq.heappush(heap, (nd, w))
    return INF, None


def fractional_cut_distance(G, C):
    """dist_{G,C}(s, t), cross-checked against an exactly rounded path sum."""
    lens = C.dense(G.n)
    d, path = _shortest_path(G, lens, C.s, C.t)
    if path is not None:
        exact = math.fsum(lens[v] for v in path)
        assert abs(exact - d) <= 1e-9 * max(1.0, exact), "path sum drift"
    return d


def validate_fractional_cut(G, C, k):
    """True iff C(s) = C(t) = 0, dist_{G,C}(s,t) >= 1 and size <= k - 0.5."""
    s, t = C.s, C.t
    if s == t or not (0 <= s < G.n and 0 <= t < G.n):
        return False
    if C[s] != 0.0 or C[t] != 0.0:
        return False
    if C.size > k - 0.5:
        return False
    return fractional_cut_distance(G, C) >= 1.0


def validate_integral_cut(G, S):
    """True iff G - S is disconnected, or S leaves at most one vertex."""
    sep = S.separator if isinstance(S, VertexCut) else frozenset(S)
    if len(sep) >= G.n - 1:
        return True
    return len(G.components(removed=sep)) >= 2


def separates(G, S, s, t):
    """True iff S avoids s, t and no s-t path survives in G - S."""
    sep = S.separator if isinstance(S, VertexCut) else frozenset(S)
    if s in sep or t in sep:
        return False
    return t not in G.reachable(s, removed=sep)


def witness_partition(G, S, s=None):
    """Build (L, S, R) for a separator; L is the component of s (or the first one)."""
    sep = frozenset(S)
    comps = G.components(removed=sep)
    if len(comps) < 2:
        return VertexCut(sep)
    if s is None:
        L = comps[0]
    else:
        L = next(c for c in comps if s in c)
    Lset = frozenset(L)
    R = frozenset(range(G.n)) - Lset - sep
    return VertexCut(sep, Lset, R)


# ---------------------------------------------------------------- file I/O

def load_graph(stream, format="dimacs"):
    if format != "dimacs":
        raise GraphError("unsupported format %r" % (format,))
    if isinstance(stream, (bytes, str)):
        text = stream.decode() if isinstance(stream, bytes) else stream
        lines = text.splitlines()
    else:
        lines = stream
    n = m = None
    edges = []
    seen = {}
    for lineno, raw in enumerate(lines, 1):
        if isinstance(raw, bytes):
            raw = raw.decode()
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        try:
            if tag == "p":
                if n is not None:
                    raise GraphError("line %d: duplicate header" % lineno)
                if len(parts) != 4 or parts[1] not in ("edge", "col"):
                    raise GraphError("line %d: bad header %r" % (lineno, raw.strip()))
                n, m = int(parts[2]), int(parts[3])
            elif tag == "e":
                if n is None:
                    raise GraphError("line %d: edge before header" % lineno)
                if len(parts) != 3:
                    raise GraphError("line %d: bad edge line" % lineno)
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
                if not (0 <= u < n and 0 <= v < n):
                    raise GraphError("line %d: vertex out of range in edge (%s, %s)"
                                     % (lineno, parts[1], parts[2]))
                if u == v:
                    raise GraphError("line %d: self-loop (%d, %d)" % (lineno, u + 1, v + 1))
                key = (min(u, v), max(u, v))
                if key in seen:
                    raise GraphError("line %d: duplicate edge (%d, %d), first on line %d"
                                     % (lineno, key[0] + 1, key[1] + 1, seen[key]))
                seen[key] = lineno
                edges.append(key)
            else:
                raise GraphError("line %d: unknown line type %r" % (lineno, tag))
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError("line %d: %s" % (lineno, exc)) from None
    if n is None:
        raise GraphError("missing header line")
    if len(edges) != m:
        raise GraphError("header declares %d edges, found %d" % (m, len(edges)))
    return Graph(n, edges)


def dump_graph(G, stream):
    stream.write("p edge %d %d\n" % (G.n, G.m))
    for u, v in G.edges:
        stream.write("e %d %d\n" % (u + 1, v + 1))


def dump_fractional_cut(C, stream):
    for v in sorted(C.values):
        stream.write("c %d %r\n" % (v + 1, C.values[v]))
    stream.write("endpoints %d %d\n" % (C.s + 1, C.t + 1))


def load_fractional_cut(stream):
    if isinstance(stream, str):
        stream = stream.splitlines()
    vals = {}
    ends = None
    for lineno, raw in enumerate(stream, 1):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "c" and len(parts) == 3:
            try:
                vals[int(parts[1]) - 1] = float(parts[2])
            except ValueError:
                raise GraphError("line %d: bad cut entry" % lineno) from None
        elif parts[0] == "endpoints" and len(parts) == 3:
            ends = (int(parts[1]) - 1, int(parts[2]) - 1)
        elif parts[0] == "c":
            continue
        else:
            raise GraphError("line %d: unknown line %r" % (lineno, raw.strip()))
    if ends is None:
        raise GraphError("missing endpoints line")
    return FractionalCut(ends[0], ends[1], vals)


def dump_vertex_cut(S, stream):
    sep = S.sorted() if isinstance(S, VertexCut) else sorted(S)
    stream.write("s %d\n" % len(sep))
    stream.write(" ".join(str(v + 1) for v in sep) + "\n")


def load_vertex_cut(stream):
    if isinstance(stream, str):
        stream = stream.splitlines()
    lines = [ln.split() for ln in stream if ln.strip()]
    if not lines or lines[0][0] != "s":
        raise GraphError("missing size line")
    size = int(lines[0][1])
    verts = [int(x) - 1 for ln in lines[1:] for x in ln]
    if len(verts) != size:
        raise GraphError("cut declares %d vertices, found %d" % (size, len(verts)))
    return VertexCut(frozenset(verts))
