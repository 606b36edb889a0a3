"""Local fractional vertex cuts around a seed vertex.

Each iteration contracts the trivial (weight 1) part of H = G[V_inner] with a
fresh sensitivity spanning forest session, runs shortest paths on the small
contracted graph, and then either finds a short path leaving V_inner or
samples a random target inside a ball of bounded volume.  Weights along the
chosen path are raised multiplicatively until the path carries a large
enough share of the total non-trivial weight.
"""

import math
import random
from dataclasses import dataclass, field

from . import cost
from .graph import INF, FractionalCut, Graph, WeightFunction
from .ssf import LazyBases, SSFConfig, tree_subroutine
from .sssp import DisconnectedError, apx_sssp


class InputError(ValueError):
    pass


def default_rounds(k, n):
    return max(1, math.ceil(400 * k ** 3 * math.log(max(n, 2))))


@dataclass
class LocalCutParams:
    k: int
    mu: float
    x: int
    V_inner: frozenset
    r: int = None
    budget: int = None    # r used in the volume thresholds; defaults to the iteration count

    def __post_init__(self):
        self.V_inner = frozenset(self.V_inner)
        if self.k < 2:
            raise InputError("k must be at least 2")
        if not self.mu > 0:
            raise InputError("mu must be positive")

    @property
    def eps(self):
        """Multiplicative step of the weight updates."""
        return 1.0 / (10 * self.k)

    @property
    def sssp_eps(self):
        """Shortest path precision; also the inflation (1 + 5 sssp_eps) of a returned cut."""
        return 1.0 / (50 * self.k)

    def rounds(self, n):
        return self.r if self.r is not None else default_rounds(self.k, n)


@dataclass
class ContractedGraph:
    graph: Graph          # over local indices 0..len(ids)-1
    ids: list             # local index -> component id
    index: dict           # component id -> local index
    ell: list             # vertex lengths
    chi_of: dict          # vertex of V_{!=1} -> component id
    witness: dict = field(default_factory=dict)   # (i, j) local, i < j -> smallest edge id of G


def contract(G, V_inner, sess, w):
    """Contract the trivial part of H = G[V_inner] through a fresh session."""
    inner = V_inner if isinstance(V_inner, (set, frozenset)) else frozenset(V_inner)
    nontriv = [u for u in w.nontrivial() if u in inner]
    if not nontriv:
        raise InputError("V_inner holds no non-trivial vertex")
    V1 = set()
    E1 = set()
    for u in nontriv:
        V1.add(u)
        for v, e in zip(G.adj[u], G.adj_eid[u]):
            if v in inner:
                V1.add(v)
                E1.add(e)
    sess.fail(sorted(E1))
    V1 = sorted(V1)
    chis = sess.id(V1)
    chi_of = dict(zip(V1, chis))
    ids = sorted(set(chis))
    index = {c: i for i, c in enumerate(ids)}
    ell = [1.0] * len(ids)
    for u in nontriv:
        ell[index[chi_of[u]]] = w[u]
    witness = {}
    for e in sorted(E1):
        a, b = G.edges[e]
        i, j = index[chi_of[a]], index[chi_of[b]]
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        if key not in witness:
            witness[key] = e
    cost.charge(len(E1) + len(V1))
    return ContractedGraph(Graph(len(ids), witness.keys()), ids, index, ell, chi_of, witness)


def threshold_distance(dist, sigma, bound):
    """Largest d with sum{sigma : dist < d} <= bound (INF if the total fits).

    Equivalently the smallest realised distance value whose closed prefix
    exceeds the bound.
    """
    cost.charge(len(dist) * max(1, int(math.log2(len(dist) + 1))))
    order = sorted(range(len(dist)), key=lambda i: (dist[i], i))
    acc = 0.0
    j = 0
    while j < len(order):
        d = dist[order[j]]
        while j < len(order) and dist[order[j]] == d:
            acc += sigma[order[j]]
            j += 1
        if acc > bound:
            return d
    return INF


def edge_subgraph(G, eids):
    """(graph over the endpoints of eids, local -> global list, global -> local dict)."""
    verts = sorted({v for e in eids for v in G.edges[e]})
    loc = {v: i for i, v in enumerate(verts)}
    edges = [(loc[G.edges[e][0]], loc[G.edges[e][1]]) for e in eids]
    return Graph(len(verts), edges), verts, loc


def _connected_in(G, verts):
    vs = set(verts)
    if not vs:
        return True
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in G.adj[u]:
            if v in vs and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(vs)


def check_input(G, p):
    x, inner = p.x, p.V_inner
    if x not in inner:
        raise InputError("x must lie in V_inner")
    for v in inner:
        if G.degree(v) > 5 * p.mu:
            raise InputError("vertex %d of V_inner has degree above 5 mu" % v)
    if len(G.closed_neighborhood(inner)) >= G.n:
        raise InputError("N[V_inner] covers every vertex")
    if not _connected_in(G, inner):
        raise InputError("G[V_inner] is disconnected")


class InvariantLog:
    """Counts of per-iteration invariant checks (all are asserted)."""

    def __init__(self):
        self.counts = {}

    def ok(self, name):
        self.counts[name] = self.counts.get(name, 0) + 1


def local_cuts(G, params, bases=None, seed=0, ssf_config=None, checks=True, stats=None):
    """Fractional (x, tau)-cut of size <= k - 0.5 (returned as C with C.t = tau), or None.

    bases is an indexable family of structures on G[V_inner] with sigma = deg_G;
    base i is used only in iteration i.  When omitted a lazy family is built.
    """
    p = params
    n = G.n
    k, mu, x, inner = p.k, p.mu, p.x, p.V_inner
    check_input(G, p)
    r = p.rounds(n)
    eps, eps2 = p.eps, p.sssp_eps
    log = InvariantLog()
    if stats is not None:
        stats.update(iterations=0, step3=0, step4=0, case1=0, case2=0, outcome=None, invariants=log)

    def finish(outcome, C=None):
        if stats is not None:
            stats["outcome"] = outcome
        return C

    NH_x = [v for v in G.adj[x] if v in inner]
    if G.volume(NH_x) > 2 * mu + (k - 1) * 5 * mu:
        return finish("degree-gate")
    big = float(n) ** 3
    assert big < 2.0 ** 53
    w = WeightFunction({x: 0.0})
    for v in G.adj[x]:
        w[v] = big
    owned = bases is None
    if owned:
        bases = LazyBases(G, inner, G.degrees, r, seed, ssf_config or SSFConfig())
    if len(bases) < r:
        raise InputError("need one structure per iteration")
    rng = random.Random(seed)
    closed = G.closed_neighborhood(inner)
    far = next(v for v in range(n) if v not in closed)
    krmu = k * (p.budget if p.budget is not None else r) * mu
    budget0 = G.volume(v for v in w.nontrivial() if v in inner)

    with cost.region("localcuts"):
        for it in range(1, r + 1):
            if stats is not None:
                stats["iterations"] = it
            if checks:
                _check_basicw(G, w, x, closed, big)
                log.ok("basicw")
            # Step 1: contract and run shortest paths on the small graph
            sess = bases[it - 1].session()
            if owned:
                # each base serves one iteration only
                bases.release(it - 1)
            CG = contract(G, inner, sess, w)
            if sess.degraded:
                return finish("ssf-degraded")
            chi_x = CG.chi_of[x]
            try:
                T = apx_sssp(CG.graph, CG.ell, CG.index[chi_x], eps2)
            except DisconnectedError:
                return finish("ssf-disconnected")
            # Step 2: threshold distance on the contracted graph
            sig = sess.sum(CG.ids)
            dth = threshold_distance(T.dist, sig, 10 * krmu)
            # Step 3: a short path leaving V_inner
            V_lt = [c for i, c in enumerate(CG.ids) if T.dist[i] < dth]
            VH_lt = set()
            for comp in sess.components(V_lt):
                VH_lt.update(comp)
            if checks:
                assert G.volume(VH_lt) <= 10 * krmu
                assert _connected_in(G, VH_lt)
                log.ok("ball-below-threshold")
            E_aug = sorted({e for v in VH_lt for e in G.adj_eid[v]})
            outer = sorted({u for v in VH_lt for u in G.adj[v] if u not in inner})
            step3 = False
            if outer:
                A, verts, loc = edge_subgraph(G, E_aug)
                Ta = apx_sssp(A, [w[v] for v in verts], loc[x], eps2)
                v_star = min(outer, key=lambda u: (Ta.dist[loc[u]], u))
                if Ta.dist[loc[v_star]] <= dth:
                    P = [verts[i] for i in Ta.path_to(loc[v_star])]
                    wt = w
                    tau = far
                    step3 = True
            elif dth == INF:
                # the component of x has no way out at all
                return finish("isolated", FractionalCut(x, far, {}))
            if step3:
                if stats is not None:
                    stats["step3"] += 1
            else:
                # Step 4: a random target inside a ball of bounded volume
                assert dth != INF
                if stats is not None:
                    stats["step4"] += 1
                VH_le = _step4_ball(G, CG, T, sess, sig, dth, chi_x, VH_lt, krmu, rng, stats)
                if checks:
                    vol = G.volume(VH_le)
                    assert 2 * krmu <= vol <= 20 * krmu, (vol, krmu)
                E_le = sorted({e for v in VH_le for e in G.adj_eid[v]})
                e = E_le[rng.randrange(len(E_le))]
                a, b = G.edges[e]
                v_H = min(a, b) if (a in VH_le and b in VH_le) else (a if a in VH_le else b)
                wt = w.copy()
                wt[v_H] = 0.0
                B, verts, loc = edge_subgraph(G, E_le)
                if checks:
                    assert B.is_connected()
                    log.ok("ball-at-threshold")
                Tb = apx_sssp(B, [wt[v] for v in verts], loc[x], eps2)
                P = [verts[i] for i in Tb.path_to(loc[v_H])][:-1]
                tau = v_H
            # Step 5: return or update
            nz = wt.nontrivial()
            W = math.fsum(nz.values())
            wp = math.fsum(wt[v] for v in P)
            cost.charge(len(nz) + len(P), cost.log_depth(len(nz) + len(P)))
            if wp / W >= 1.0 / (k - 0.6):
                scale = (k - 0.6) * (1 + 5 * eps2) / W
                C = FractionalCut(x, tau, {u: v * scale for u, v in nz.items() if v > 1.0})
                return finish("step3" if step3 else "step4", C)
            for v in P:
                w[v] = w[v] * (1.0 + eps)
            if checks:
                used = G.volume(v for v in w.nontrivial() if v in inner)
                assert used <= budget0 + 20 * it * krmu
                log.ok("nontrivial-budget")
    return finish("exhausted")


def _check_basicw(G, w, x, closed, big):
    assert w[x] == 0.0
    for v in w.nontrivial():
        assert v in closed, "weight moved outside N[V_inner]"
    for v in G.adj[x]:
        assert w[v] >= big


def _step4_ball(G, CG, T, sess, sig, dth, chi_x, VH_lt, krmu, rng, stats):
    """V_{H, <= d_TH}: a connected vertex set of G-volume between 2krmu and 20krmu."""
    le = [i for i in range(len(CG.ids)) if T.dist[i] <= dth]
    pos = {i: j for j, i in enumerate(le)}
    root = CG.index[chi_x]
    tedges = []
    for i in le:
        if i != root:
            par = T.parent[i]
            assert par in pos, "tree prefix left the threshold ball"
            tedges.append((pos[par], pos[i]))
    K = Graph(len(le), tedges)
    ksig = [sig[i] for i in le]
    q = 5 * krmu
    hat = tree_subroutine(K, ksig, pos[root], q, seed=rng.getrandbits(64))
    hat_ids = [CG.ids[le[j]] for j in hat.vertices]
    ball = set(VH_lt)
    for comp in sess.components(hat_ids):
        ball.update(comp)
    if hat.weight >= q:
        if stats is not None:
            stats["case1"] += 1
        return ball
    # Case 2: a heavy cluster hangs off the tree; grow a piece of it
    if stats is not None:
        stats["case2"] += 1
    inside = set(hat.vertices)
    best = None
    for a, b in K.edges:
        for u, v in ((a, b), (b, a)):
            if u in inside and v not in inside and ksig[v] > q:
                i, j = le[u], le[v]
                e = CG.witness[(min(i, j), max(i, j))]
                if best is None or e < best[0]:
                    best = (e, j)
    assert best is not None, "no heavy cluster next to the light tree"
    e, j = best
    chi_big = CG.ids[j]
    ea, eb = G.edges[e]
    b_big = eb if CG.chi_of.get(eb) == chi_big else ea
    assert CG.chi_of.get(b_big) == chi_big
    T_big = sess.tree(chi_big, b_big, 2 * krmu)
    ball.update(T_big.vertices)
    return ball
