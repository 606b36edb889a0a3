"""Quick invariant suite behind ``vck selftest``.

Each check runs a few seeded random instances against an independent
reference and reports one PASS/FAIL line.  The full test suite lives in
tests/; this is the part that needs nothing beyond the package itself.
"""

import random
import sys
import traceback

from .framework import SolveConfig, k_vertex_connectivity
from .graph import Graph, exact_vertex_distance, separates, validate_fractional_cut, validate_integral_cut
from .localcuts import LocalCutParams, local_cuts
from .mwu import fractional_st_cut
from .oracle import disjoint_paths, exact_st_vertex_connectivity, exact_vertex_connectivity, generate_gnp, \
    generate_planted
from .rounding import integral_st_cut
from .sequence import IntervalSequence
from .ssf import SSFConfig, ssf_init
from .sssp import apx_sssp

SMALL = SSFConfig(replication=0.5)


def _cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def check_oracle(rng):
    for n in (5, 9, 14):
        assert exact_vertex_connectivity(_cycle(n))[0] == 2
    for trial in range(20):
        G = generate_gnp(rng.randint(4, 12), 0.4, rng.random())
        s, t = 0, G.n - 1
        if G.has_edge(s, t):
            continue
        k, sep = exact_st_vertex_connectivity(G, s, t)
        assert len(disjoint_paths(G, s, t)) == k
        assert separates(G, sep, s, t)


def check_sequence(rng):
    for trial in range(10):
        n = rng.randint(1, 40)
        data = [rng.getrandbits(20) for _ in range(n)]
        sig = [rng.choice([0.0, 1.0, 2.5]) for _ in range(n)]
        seq = IntervalSequence(data, sig, seed=trial)
        for _ in range(20):
            i = rng.randrange(n)
            data[i] = rng.getrandbits(20)
            seq.it_update([(i, data[i])])
            a, b = rng.randrange(n), rng.randrange(n)
            want = 0
            for j in range(((b - a) % n) + 1):
                want ^= data[(a + j) % n]
            assert int(seq.it_agg([(a, b)])[0][0]) == want


def check_ssf(rng):
    wrong = 0
    for trial in range(30):
        G = generate_gnp(rng.randint(4, 40), 0.15, rng.random())
        if G.m == 0:
            continue
        fail = rng.sample(range(G.m), min(G.m, rng.randint(0, 8)))
        s = ssf_init(G, [1] * G.n, trial, SMALL).session()
        s.fail(fail)
        H = Graph(G.n, [e for i, e in enumerate(G.edges) if i not in set(fail)])
        truth = {v: i for i, c in enumerate(H.components()) for v in c}
        ids = s.id(range(G.n))
        # never coarser than the truth
        for u in range(G.n):
            for v in range(u + 1, G.n):
                if ids[u] == ids[v]:
                    assert truth[u] == truth[v]
        wrong += len(set(ids)) != len(set(truth.values()))
    assert wrong <= 1


def check_sssp(rng):
    for trial in range(20):
        G = generate_gnp(rng.randint(3, 30), 0.3, rng.random())
        lens = [rng.uniform(0, 3) for _ in range(G.n)]
        T = apx_sssp(G, lens, 0, 0.05, require_connected=False)
        exact = exact_vertex_distance(G, lens, 0)
        for v in range(G.n):
            if exact[v] == float("inf"):
                assert T.dist[v] == exact[v]
            else:
                assert exact[v] - 1e-9 <= T.dist[v] <= 1.05 * exact[v] + 1e-9


def check_mwu(rng):
    for trial in range(10):
        n = rng.randint(6, 12)
        G = _cycle(n)
        C = fractional_st_cut(G, 3, 0, n // 2)
        assert C is not None and validate_fractional_cut(G, C, 3)
        assert fractional_st_cut(G, 2, 0, n // 2) is None


def check_localcuts(rng):
    pl = generate_planted(5, 1, 20, 0.5, 0.4, seed=rng.randrange(1000))
    G = pl.graph
    far = [v for v in pl.R if not any(u in pl.S for u in G.adj[v])]
    blocked = G.closed_neighborhood([far[0]])
    low = [v for v in range(G.n) if G.degree(v) <= 5 * pl.mu and v not in blocked]
    inner = next(c for c in G.components(low) if pl.x in c)
    C = local_cuts(G, LocalCutParams(2, pl.mu, pl.x, inner), seed=1, ssf_config=SMALL)
    assert C is not None and validate_fractional_cut(G, C, 2)


def check_rounding(rng):
    for trial in range(5):
        pl = generate_planted(5, 1 + trial % 2, 8, 0.6, 0.5, seed=rng.randrange(1000))
        G = pl.graph
        s, t = pl.L[0], pl.R[0]
        kappa = exact_st_vertex_connectivity(G, s, t)[0]
        S = integral_st_cut(G, kappa + 1, s, t, seed=trial)
        assert S is not None and len(S) == kappa and validate_integral_cut(G, S)


def check_framework(rng):
    G = _cycle(20)
    cfg = SolveConfig(small_threshold=0, r=30, ssf=SMALL)
    S = k_vertex_connectivity(G, 3, seed=rng.randrange(1000), repetitions=3, config=cfg)
    assert S is not None and len(S) == 2 and validate_integral_cut(G, S)
    K = Graph(8, [(u, v) for u in range(8) for v in range(u + 1, 8)])
    assert k_vertex_connectivity(K, 4, repetitions=2, config=cfg) is None


CHECKS = [
    ("oracle", check_oracle),
    ("sequence", check_sequence),
    ("ssf", check_ssf),
    ("sssp", check_sssp),
    ("mwu", check_mwu),
    ("localcuts", check_localcuts),
    ("rounding", check_rounding),
    ("framework", check_framework),
]


def run(seed, out):
    """Run every check; returns the number of failures."""
    failed = 0
    for name, fn in CHECKS:
        try:
            fn(random.Random("%s/%s" % (seed, name)))
        except AssertionError:
            failed += 1
            tb = traceback.extract_tb(sys.exc_info()[2])[-1]
            out.write("FAIL %s (line %d)\n" % (name, tb.lineno))
        else:
            out.write("PASS %s\n" % name)
    return failed
