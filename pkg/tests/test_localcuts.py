import math
import random

import pytest

from vck.graph import Graph, WeightFunction, validate_fractional_cut
from vck.localcuts import (InputError, LocalCutParams, contract, default_rounds, local_cuts,
                           threshold_distance)
from vck.oracle import generate_planted
from vck.ssf import SSFConfig, SSFError, ssf_init, tree_subroutine

from helpers import clique, gnp, inner_for_planted, naive_components, path, star

SMALL = SSFConfig(replication=0.5)
INF = math.inf


def fresh_session(G, inner, seed=0):
    return ssf_init(G, G.degrees, seed, SMALL, vertices=inner).session()


# ---------------------------------------------------------------- contract

def test_contract_star_all_singletons():
    G = star(6)
    n = G.n
    w = WeightFunction({0: 0.0})
    for v in range(1, n):
        w[v] = float(n) ** 3
    CG = contract(G, range(n), fresh_session(G, range(n)), w)
    assert CG.graph.n == n and CG.graph.m == 6
    centre = CG.index[CG.chi_of[0]]
    assert all(CG.graph.degree(i) == (6 if i == centre else 1) for i in range(n))


def test_contract_trivial_suffix():
    G = path(4)
    w = WeightFunction({0: 0.0})
    CG = contract(G, range(4), fresh_session(G, range(4)), w)
    assert CG.graph.n == 2 and CG.graph.m == 1
    assert sorted(CG.ell) == [0.0, 1.0]
    sess_groups = {}
    for v, c in CG.chi_of.items():
        sess_groups.setdefault(c, []).append(v)
    assert sorted(sess_groups.values()) == [[0], [1]]


def test_contract_requires_nontrivial():
    G = path(4)
    with pytest.raises(InputError):
        contract(G, range(4), fresh_session(G, range(4)), WeightFunction())


def random_simple_path(G, rng, inner):
    s = rng.choice(sorted(inner))
    pth = [s]
    for _ in range(rng.randint(0, 12)):
        nxt = [u for u in G.adj[pth[-1]] if u in inner and u not in pth]
        if not nxt:
            break
        pth.append(rng.choice(nxt))
    return pth


def run_contract_trials(trials, seed, paths_per=50):
    """Counts (graphs, paths) checked; every check is asserted."""
    rng = random.Random(seed)
    checked = 0
    for t in range(trials):
        n = rng.randint(3, 30)
        G = gnp(n, rng.choice([0.15, 0.3]), rng.getrandbits(32))
        inner = max(naive_components(G), key=len)
        if len(inner) < 2:
            continue
        w = WeightFunction()
        for v in rng.sample(inner, rng.randint(1, max(1, len(inner) // 3))):
            w[v] = rng.choice([0.0, 2.5, float(n) ** 3, 1.3])
        sess = fresh_session(G, inner, rng.getrandbits(32))
        CG = contract(G, inner, sess, w)
        assert CG.graph.is_connected()
        cid = dict(zip(inner, sess.id(inner)))
        for u in w.nontrivial():
            if u in cid:
                assert sess.components([cid[u]]) == [[u]]
        ell_of = {c: CG.ell[i] for i, c in enumerate(CG.ids)}
        for _ in range(paths_per):
            pth = random_simple_path(G, rng, set(inner))
            blocks = [cid[pth[0]]]
            for v in pth[1:]:
                if cid[v] != blocks[-1]:
                    blocks.append(cid[v])
            for a, b in zip(blocks, blocks[1:]):
                assert CG.graph.has_edge(CG.index[a], CG.index[b])
            lc = sum(ell_of[c] for c in blocks)
            wp = sum(w[v] for v in pth)
            assert wp - n - 1e-9 <= lc <= wp + 1e-9
            checked += 1
    return checked


def test_contract_length_preservation():
    assert run_contract_trials(200, 5) > 5000


# ---------------------------------------------------------------- threshold

def test_threshold_examples():
    assert threshold_distance(list(range(10)), [1] * 10, 5) == 5
    assert threshold_distance([0, 1, 2], [1, 1, 1], 3) == INF
    assert threshold_distance([0, 2, 2, 3], [1, 3, 3, 1], 4) == 2


def definitional_threshold(dist, sigma, bound):
    cands = sorted(set(dist)) + [INF]
    best = None
    for d in cands:
        below = sum(s for x, s in zip(dist, sigma) if x < d)
        if below <= bound:
            best = d
    return best


def test_threshold_random_vs_definition():
    rng = random.Random(3)
    for _ in range(500):
        m = rng.randint(1, 25)
        dist = [rng.choice([0.0, 1.0, 1.5, 2.0, 3.25, 7.0]) for _ in range(m)]
        sigma = [rng.randint(1, 9) for _ in range(m)]
        bound = rng.uniform(0, sum(sigma) * 1.2)
        assert threshold_distance(dist, sigma, bound) == definitional_threshold(dist, sigma, bound)


# ---------------------------------------------------------------- tree

def test_tree_subroutine_random():
    rng = random.Random(4)
    for t in range(300):
        n = rng.randint(1, 40)
        K = Graph(n, [(rng.randrange(i), i) for i in range(1, n)])
        sigma = [rng.choice([1, 1, 2, 5, 20]) for _ in range(n)]
        tot = sum(sigma)
        v = rng.randrange(n)
        q = rng.uniform(max(0.5, sigma[v] / 2), max(tot / 2, 0.5))
        if tot < 2 * q or sigma[v] > 2 * q:
            continue
        T = tree_subroutine(K, sigma, v, q, seed=t)
        vs = set(T.vertices)
        assert v in vs and vs <= set(range(n))
        wt = sum(sigma[u] for u in vs)
        if not q <= wt <= 2 * q:
            assert wt < q
            assert any(sigma[u] > q for a in vs for u in K.adj[a] if u not in vs)


def test_tree_subroutine_light_total():
    with pytest.raises(SSFError):
        tree_subroutine(path(3), [1, 1, 1], 0, 2)


# ---------------------------------------------------------------- local_cuts

def test_default_rounds():
    assert default_rounds(2, 100) == math.ceil(3200 * math.log(100))


def test_input_guarantees():
    G = path(6)
    with pytest.raises(InputError):
        local_cuts(G, LocalCutParams(2, 1, 0, range(6)))        # N[V_inner] = V
    with pytest.raises(InputError):
        local_cuts(G, LocalCutParams(2, 1, 0, [0, 2]))          # disconnected
    with pytest.raises(InputError):
        local_cuts(G, LocalCutParams(2, 0.2, 0, [0, 1]))        # degree above 5 mu
    with pytest.raises(InputError):
        local_cuts(G, LocalCutParams(2, 1, 3, [0, 1]))          # x outside


def test_degree_gate():
    # x has four neighbours of degree 5; 2 mu + 5 mu (k - 1) = 7 for mu = 1, k = 2
    edges = [(0, i) for i in range(1, 5)]
    nxt = 5
    for i in range(1, 5):
        for _ in range(4):
            edges.append((i, nxt))
            nxt += 1
    edges.append((5, nxt))
    G = Graph(nxt + 1, edges)
    st = {}
    assert local_cuts(G, LocalCutParams(2, 1, 0, range(5)), stats=st) is None
    assert st["outcome"] == "degree-gate"


def test_clique_with_pendant():
    G = Graph(7, [(a, b) for a in range(6) for b in range(a + 1, 6)] + [(5, 6)])
    C = local_cuts(G, LocalCutParams(6, 1.2, 0, [0], r=5), ssf_config=SMALL)
    assert C is not None and C.t == 6
    assert validate_fractional_cut(G, C, 6)
    for seed in range(3):
        C = local_cuts(G, LocalCutParams(2, 1.2, 0, [0], r=60), seed=seed, ssf_config=SMALL)
        assert C is None or validate_fractional_cut(G, C, 2)


def test_planted_returns_are_valid():
    for inst in range(3):
        pl = generate_planted(8, 1, 30, 0.3, 0.3, seed=inst, shape="path")
        inner = inner_for_planted(pl, inst)
        k = len(pl.S) + 1
        for seed in range(3):
            st = {}
            C = local_cuts(pl.graph, LocalCutParams(k, pl.mu, pl.x, inner), seed=seed,
                           ssf_config=SMALL, stats=st)
            assert C is not None, st["outcome"]
            assert C.s == pl.x and C[pl.x] == 0 and C[C.t] == 0
            assert validate_fractional_cut(pl.graph, C, k)


def test_inner_ball_branch_exercised():
    """A small threshold budget makes the bounded-ball branch run; returned
    cuts stay valid and every invariant holds (they are asserted inside)."""
    pl = generate_planted(8, 1, 40, 0.3, 0.3, seed=0, shape="path")
    inner = inner_for_planted(pl, 0)
    totals = {"step4": 0, "case1": 0, "case2": 0}
    for seed in range(6):
        st = {}
        C = local_cuts(pl.graph, LocalCutParams(2, pl.mu, pl.x, inner, budget=2), seed=seed,
                       ssf_config=SMALL, stats=st)
        for key in totals:
            totals[key] += st[key]
        assert C is None or validate_fractional_cut(pl.graph, C, 2)
        assert st["invariants"].counts["basicw"] == st["iterations"]
    assert totals["step4"] > 0 and totals["case1"] > 0 and totals["case2"] > 0
