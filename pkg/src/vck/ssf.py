"""Sensitivity spanning forest.

A base is built once on G[K]: a spanning forest, Euler tours stored in treaps,
and leveled XOR cutset sketches.  A session applies one batch of edge
failures, repairs the forest from the sketches, then answers component,
sum and tree queries.  Sessions write only to a private overlay, so many of
them can share one base.
"""

import math
import random
import threading
from dataclasses import dataclass

import numpy as np

from . import cost
from .sequence import (L, P, R, SIG, TreapStore, ThresholdUnreachable, bottom_up_agg,
                       build_treap, circular_search)

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(z):
    """Vectorised splitmix64 finaliser over a uint64 array."""
    with np.errstate(over="ignore"):
        z = np.asarray(z, dtype=np.uint64) + _GOLD
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


class SSFError(RuntimeError):
    pass


@dataclass(frozen=True)
class SSFConfig:
    """Sketch sizing.

    replication is the constant c in the ceil(c * log_{9/8} n) copies per round;
    the default targets failure probability n^-100.  rounds overrides the
    number of recovery rounds ceil(log_{3/2} n).
    """
    replication: float = 100.0
    rounds: int = None

    def dims(self, n):
        n = max(n, 2)
        levels = max(1, math.ceil(2 * math.log2(n)) - 1)
        copies = max(1, math.ceil(self.replication * math.log(n) / math.log(9 / 8)))
        rounds = self.rounds if self.rounds is not None else max(1, math.ceil(math.log(n) / math.log(1.5)))
        return levels, copies, rounds


class ForestLayout:
    """Spanning forest of H and its Euler tours as treaps.  Shared, read-only."""

    def __init__(self, H, sigma, seed):
        n = H.n
        self.H = H
        self.n = n
        self.sigma = [float(s) for s in sigma]
        parent = [-1] * n
        children = [[] for _ in range(n)]
        seen = [False] * n
        roots = []
        tree_edges = set()
        for r in range(n):
            if seen[r]:
                continue
            seen[r] = True
            roots.append(r)
            queue = [r]
            for u in queue:
                for w in H.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        parent[w] = u
                        children[u].append(w)
                        tree_edges.add(H.edge_id(u, w))
                        queue.append(w)
        self.tree_edges = frozenset(tree_edges)
        edge_of = [(v, v) for v in range(n)]
        edge_node = {}
        tours = []
        for r in roots:
            order = [r]
            stack = [(r, 0)]
            while stack:
                v, i = stack[-1]
                if i < len(children[v]):
                    stack[-1] = (v, i + 1)
                    c = children[v][i]
                    a = len(edge_of)
                    edge_of.append((v, c))
                    edge_node[(v, c)] = a
                    order.append(a)
                    order.append(c)
                    stack.append((c, 0))
                else:
                    stack.pop()
                    if stack:
                        p = stack[-1][0]
                        b = len(edge_of)
                        edge_of.append((v, p))
                        edge_node[(v, p)] = b
                        order.append(b)
            tours.append(order)
        total = len(edge_of)
        rng = np.random.default_rng(seed)
        self.prios = rng.random(total).tolist()
        node_sigma = self.sigma + [0.0] * (total - n)
        base = [None] * total
        self.tour_roots = []
        for order in tours:
            root, recs = build_treap(order, self.prios, node_sigma)
            self.tour_roots.append(root)
            for i, rec in recs.items():
                base[i] = rec
        self.base = base
        self.edge_of = edge_of
        self.edge_node = edge_node
        self.tours = tours
        cost.charge(3 * n + H.m)


class SSFBase:
    """One initialised structure: a layout plus its own sketch randomness."""

    def __init__(self, layout, vertices, local_of, G, seed, config):
        self.layout = layout
        self.vertices = vertices      # local -> global
        self.local_of = local_of      # global -> local
        self.G = G
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.config = config
        self.levels, self.copies, self.rounds = config.dims(layout.n)
        self.width = self.levels * self.copies * self.rounds
        self._lock = threading.Lock()
        self._tables = None
        H = layout.H
        # edge labels are local edge id + 1, all within 1..n(n-1)/2
        self._eu = np.fromiter((u for u, _ in H.edges), dtype=np.int64, count=H.m)
        self._ev = np.fromiter((v for _, v in H.edges), dtype=np.int64, count=H.m)

    @property
    def n(self):
        return self.layout.n

    def _slot_keys(self):
        slots = np.arange(self.width, dtype=np.uint64)
        seed = splitmix64(np.uint64(self.seed))
        keys = splitmix64(slots * _GOLD ^ seed)
        levels = (np.arange(self.width) % self.levels + 1).astype(np.uint64)
        return keys, levels

    def contributions(self, eids):
        """Rows l(e) * c(i, e) over every sketch slot, one row per local edge id."""
        eids = np.asarray(eids, dtype=np.uint64)
        keys, levels = self._slot_keys()
        out = np.empty((len(eids), self.width), dtype=np.uint64)
        shift = np.uint64(64) - levels
        for a in range(0, len(eids), 1024):
            chunk = eids[a:a + 1024]
            ek = splitmix64(chunk * np.uint64(0xD6E8FEB86659FD93) + np.uint64(0x632BE59BD9B4E019))
            h = splitmix64(keys[None, :] ^ ek[:, None])
            hit = (h >> shift[None, :]) == 0
            out[a:a + len(chunk)] = np.where(hit, (chunk + np.uint64(1))[:, None], np.uint64(0))
        cost.charge(len(eids) * self.width)
        return out

    def vertex_sketches(self):
        H = self.layout.H
        n = H.m
        sk = np.zeros((self.layout.n, self.width), dtype=np.uint64)
        if n == 0:
            return sk
        contrib = self.contributions(np.arange(n))
        ends = np.concatenate([self._eu, self._ev])
        rows = np.concatenate([contrib, contrib])
        order = np.argsort(ends, kind="stable")
        ends = ends[order]
        rows = rows[order]
        starts = np.flatnonzero(np.r_[True, ends[1:] != ends[:-1]])
        sk[ends[starts]] = np.bitwise_xor.reduceat(rows, starts, axis=0)
        return sk

    def tables(self):
        """(node data, node subtree aggregates), built on first use."""
        if self._tables is None:
            with self._lock:
                if self._tables is None:
                    lay = self.layout
                    data = np.zeros((len(lay.base), self.width), dtype=np.uint64)
                    data[:lay.n] = self.vertex_sketches()
                    agg = bottom_up_agg(lay.base, data)
                    self._tables = (data, agg)
        return self._tables

    def session(self):
        return SSFSession(self)

    def local_edge(self, geid):
        u, v = self.G.edges[geid]
        lo = self.local_of
        if u not in lo or v not in lo:
            raise SSFError("edge (%d, %d) is not inside the structure's vertex set" % (u, v))
        return self.layout.H.edge_id(lo[u], lo[v])


class LazyBases:
    """Indexable family of bases over one layout; base i is built on first access."""

    def __init__(self, G, vertices, sigma, count, seed, config):
        self.G = G
        self.count = count
        self.seed = seed
        self.config = config
        verts = sorted(vertices)
        H, old = G.induced(verts)
        local_of = {v: i for i, v in enumerate(old)}
        sig = [sigma[v] for v in old]
        for s in sig:
            if s < 1:
                raise ValueError("sigma must be >= 1")
        self.layout = ForestLayout(H, sig, (seed, 0x7A11))
        self.vertices = old
        self.local_of = local_of
        self._cache = {}

    def __len__(self):
        return self.count

    def __getitem__(self, i):
        if not 0 <= i < self.count:
            raise IndexError(i)
        b = self._cache.get(i)
        if b is None:
            s = int(splitmix64(np.uint64((hash((self.seed, i)) & 0xFFFFFFFFFFFFFFFF))))
            b = SSFBase(self.layout, self.vertices, self.local_of, self.G, s, self.config)
            self._cache[i] = b
        return b

    def release(self, i):
        """Drop a cached base (its session results do not depend on the cache)."""
        self._cache.pop(i, None)


def ssf_init(G, sigma, seed, config=None, vertices=None):
    """Build one base on G[vertices] (all of V by default) with weights sigma."""
    config = config or SSFConfig()
    if vertices is None:
        vertices = range(G.n)
    return LazyBases(G, vertices, sigma, 1, seed, config)[0]


def ssf_bases(G, sigma, count, seed, config=None, vertices=None):
    config = config or SSFConfig()
    if vertices is None:
        vertices = range(G.n)
    return LazyBases(G, vertices, sigma, count, seed, config)


@dataclass
class SSFTree:
    vertices: list     # global ids, sorted
    edges: list        # global vertex pairs
    weight: float      # sigma of the vertex set


_GONE = object()


class SSFSession:
    """One Fail followed by queries.  Only the overlay is ever written."""

    def __init__(self, base):
        self.base = base
        self.layout = base.layout
        self.st = None
        self.degraded = False
        self.failed_local = frozenset()
        self._edge_node = {}
        self._edge_of = {}
        self._rng = random.Random(base.seed ^ 0x51E5)

    # -- edge-node bookkeeping over the shared layout
    def _node_of(self, a, b):
        x = self._edge_node.get((a, b))
        if x is _GONE:
            return None
        if x is not None:
            return x
        return self.layout.edge_node.get((a, b))

    def _pair_of(self, node):
        x = self._edge_of.get(node)
        if x is not None:
            return x
        return self.layout.edge_of[node]

    def _reroot(self, v):
        st = self.st
        t = st.root(v)
        k = st.rank(v)
        if k == 0:
            return t
        a, b = st.split(t, k)
        return st.merge(b, a)

    def _link(self, u, v):
        st = self.st
        tu = self._reroot(u)
        tv = self._reroot(v)
        e1 = st.new_node(self._rng.random())
        e2 = st.new_node(self._rng.random())
        self._edge_node[(u, v)] = e1
        self._edge_node[(v, u)] = e2
        self._edge_of[e1] = (u, v)
        self._edge_of[e2] = (v, u)
        st.merge(st.merge(st.merge(tu, e1), tv), e2)

    def _cut(self, u, v):
        st = self.st
        a = self._node_of(u, v)
        b = self._node_of(v, u)
        t = st.root(a)
        ra, rb = st.rank(a), st.rank(b)
        if ra > rb:
            a, b, ra, rb = b, a, rb, ra
        left, rest = st.split(t, ra)
        mid, right = st.split(rest, rb - ra + 1)
        _, mid = st.split(mid, 1)
        inner, _ = st.split(mid, st.size(mid) - 1)
        st.merge(right, left)
        self._edge_node[(u, v)] = _GONE
        self._edge_node[(v, u)] = _GONE

    # -- Fail
    def fail(self, edges=()):
        """Remove a batch of edges (global edge ids of G) and repair the forest."""
        if self.st is not None:
            raise SSFError("fail already executed on this session")
        base = self.base
        lay = self.layout
        loc = sorted({base.local_edge(e) for e in edges})
        self.failed_local = frozenset(loc)
        if not loc:
            self.st = TreapStore(lay.base, 0)
            return
        data, agg = base.tables()
        st = TreapStore(lay.base, base.width, data, agg, data_rows=len(lay.base))
        self.st = st
        H = lay.H
        contrib = base.contributions(loc)
        touched = {}
        for row, e in enumerate(loc):
            u, v = H.edges[e]
            for w in (u, v):
                cur = touched.get(w)
                touched[w] = (data[w] if cur is None else cur) ^ contrib[row]
        for w, x in touched.items():
            st.set_data(w, x)
        for e in loc:
            if e in lay.tree_edges:
                u, v = H.edges[e]
                self._cut(u, v)
        exposed = sorted(touched)
        span = base.levels * base.copies
        for d in range(base.rounds):
            lo, hi = d * span, (d + 1) * span
            links = []
            for chi in sorted({st.root(v) for v in exposed}):
                e = self._decode(chi, lo, hi)
                if e is not None:
                    links.append(e)
            if links:
                self._link_acyclic(links)
        # leftover crossing edges visible in any slot mean the repair fell short
        for chi in sorted({st.root(v) for v in exposed}):
            if self._decode(chi, 0, base.width) is not None:
                self.degraded = True
                break
        cost.charge(st.touched + st.recomputed * base.width + len(loc), base.rounds * max(1, int(math.log2(lay.n + 1))))

    def _decode(self, chi, lo, hi):
        """First valid surviving edge crossing component chi seen in slots lo..hi."""
        st = self.st
        H = self.layout.H
        vals = st.agg(chi)[lo:hi]
        vals = vals[(vals != 0) & (vals <= H.m)]
        if len(vals) == 0:
            return None
        seen = set()
        for val in vals.tolist():
            if val in seen:
                continue
            seen.add(val)
            e = val - 1
            if e in self.failed_local:
                continue
            u, v = H.edges[e]
            if (st.root(u) == chi) != (st.root(v) == chi):
                return e
        return None

    def _link_acyclic(self, links):
        st = self.st
        H = self.layout.H
        uf = {}

        def find(a):
            while uf.get(a, a) != a:
                nxt = uf.get(uf[a], uf[a])
                uf[a] = nxt
                a = nxt
            return a

        chosen = []
        for e in sorted(set(links)):
            u, v = H.edges[e]
            ru, rv = find(st.root(u)), find(st.root(v))
            if ru != rv:
                uf[ru] = rv
                chosen.append((u, v))
        for u, v in chosen:
            self._link(u, v)

    # -- queries
    def _need(self):
        if self.st is None:
            raise SSFError("queries require fail() first")

    def _check_id(self, chi):
        st = self.st
        if not isinstance(chi, int) or chi < 0 or chi >= st._next:
            raise SSFError("unknown component id %r" % (chi,))
        if st.rec(chi)[P] != -1:
            raise SSFError("unknown component id %r" % (chi,))
        if chi >= self.layout.n and self._node_of(*self._pair_of(chi)) != chi:
            raise SSFError("unknown component id %r" % (chi,))

    def id(self, vertices):
        self._need()
        lo = self.base.local_of
        out = []
        for v in vertices:
            if v not in lo:
                raise SSFError("vertex %r is not in the structure" % (v,))
            out.append(self.st.root(lo[v]))
        cost.charge(len(out))
        return out

    def sum(self, ids):
        self._need()
        out = []
        for chi in ids:
            self._check_id(chi)
            out.append(self.st.wsum(chi))
        cost.charge(len(out))
        return out

    def components(self, ids):
        self._need()
        n = self.layout.n
        glob = self.base.vertices
        out = []
        work = 0
        for chi in ids:
            self._check_id(chi)
            nodes = self.st.inorder(chi)
            work += len(nodes)
            out.append(sorted(glob[i] for i in nodes if i < n))
        cost.charge(work)
        return out

    def agg(self, ids):
        self._need()
        if self.st.width == 0:
            raise SSFError("aggregates are only kept after a non-empty fail")
        before = self.st.recomputed
        out = [self.st.agg(chi).copy() for chi in ids]
        cost.charge((self.st.recomputed - before + len(ids)) * self.st.width)
        return out

    def tree(self, chi, x, q):
        """A tree through x inside component chi with weight in [q, 2q], or a
        lighter tree next to a vertex heavier than q."""
        self._need()
        self._check_id(chi)
        st = self.st
        lay = self.layout
        sig = lay.sigma
        lo = self.base.local_of
        if x not in lo:
            raise SSFError("vertex %r is not in the structure" % (x,))
        xl = lo[x]
        if st.root(xl) != chi:
            raise SSFError("vertex %r is not in component %r" % (x, chi))
        total = st.wsum(chi)
        if total < 2 * q:
            raise SSFError("component weight %g below 2q = %g" % (total, 2 * q))
        if sig[xl] > 2 * q:
            raise SSFError("start vertex weight %g exceeds 2q" % sig[xl])
        e = circular_search(st, chi, xl, q)
        size = st.size(chi)
        length = (st.rank(e) - st.rank(xl)) % size + 1
        cap = 3 * math.ceil(q) - 2
        nodes = [xl]
        cur = xl
        while len(nodes) < min(length, cap):
            cur = st.successor(cur)
            if cur < 0:
                cur = st.first(chi)
            nodes.append(cur)
        hat = None
        if length <= cap:
            on_tour = set()
            ends = set()
            for nd in nodes:
                a, b = self._pair_of(nd)
                if a == b:
                    on_tour.add(a)
                else:
                    ends.update((a, b))
            if not (ends - on_tour):
                verts = on_tour | ends
                hat = (verts, [self._pair_of(nd) for nd in nodes if nd >= lay.n], self._pair_of(e)[0])
        if hat is None:
            disc = []
            found = set()
            key = None
            cut_at = None
            acc = 0.0
            for pos, nd in enumerate(nodes):
                a, b = self._pair_of(nd)
                for v in (a, b):
                    if v not in found:
                        found.add(v)
                        disc.append(v)
                        acc += sig[v]
                        if acc >= q and key is None:
                            key, cut_at = v, pos
                if key is not None:
                    break
            if key is None:
                raise AssertionError("tree prefix did not reach the target weight")
            prefix = nodes[:cut_at + 1]
            verts = set()
            edges = []
            for nd in prefix:
                a, b = self._pair_of(nd)
                verts.update((a, b))
                if a != b:
                    edges.append((a, b))
            hat = (verts, edges, key)
        verts, edges, y = hat
        weight = sum(sig[v] for v in verts)
        if weight > 2 * q:
            # y is heavier than q; keep the side of x
            adj = {}
            for a, b in edges:
                if a != y and b != y:
                    adj.setdefault(a, set()).add(b)
                    adj.setdefault(b, set()).add(a)
            keep = {xl}
            stack = [xl]
            while stack:
                u = stack.pop()
                for w in adj.get(u, ()):
                    if w not in keep:
                        keep.add(w)
                        stack.append(w)
            verts = keep
            edges = [(a, b) for a, b in edges if a in keep and b in keep]
            weight = sum(sig[v] for v in verts)
        glob = self.base.vertices
        und = sorted({(min(a, b), max(a, b)) for a, b in edges})
        cost.charge(len(nodes) + len(verts))
        return SSFTree(sorted(glob[v] for v in verts), [(glob[a], glob[b]) for a, b in und], weight)

    def dump(self):
        """Debug listing, one 'comp <id>: v1 v2 ...' line per component."""
        self._need()
        roots = sorted({self.st.root(v) for v in range(self.layout.n)})
        lines = []
        for chi, vs in zip(roots, self.components(roots)):
            lines.append("comp %d: %s" % (chi, " ".join(map(str, vs))))
        return "\n".join(lines)


def sketch_hex(base, v):
    """Hex dump of one vertex sketch, for fixtures."""
    lo = base.local_of[v]
    return base.tables()[0][lo].tobytes().hex()


def tree_subroutine(K, sigma, v, q, seed=0):
    """Tree query on a fresh structure over the connected graph K.

    sigma is indexed by the vertices of K and must be >= 1 with total >= 2q.
    """
    if sum(sigma[u] for u in range(K.n)) < 2 * q:
        raise SSFError("total weight below 2q")
    base = ssf_init(K, sigma, seed, SSFConfig(replication=1.0))
    sess = base.session()
    sess.fail(())
    chi = sess.id([0])[0]
    return sess.tree(chi, v, q)
