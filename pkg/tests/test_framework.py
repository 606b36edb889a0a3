import math
import random

import pytest
from scipy import stats as sps

from vck import cost
from vck.framework import (SolveConfig, default_repetitions, k_vertex_connectivity,
                           sample_degree_proportional)
from vck.graph import Graph, validate_integral_cut
from vck.oracle import exact_vertex_connectivity, generate_planted
from vck.ssf import SSFConfig

from helpers import clique, cycle, gnp, star

SMALL = SSFConfig(replication=0.5)


def forced(r, **kw):
    """Randomized route on any size, with a reduced local cut iteration count."""
    return SolveConfig(small_threshold=0, r=r, ssf=SMALL, **kw)


def test_cycle_c20():
    G = cycle(20)
    st = {}
    S = k_vertex_connectivity(G, 3, seed=7, stats=st)
    assert st["route"] == "exact"
    assert len(S) == 2 and validate_integral_cut(G, S)
    S = k_vertex_connectivity(G, 3, seed=7, repetitions=3, config=forced(30), stats=st)
    assert st["route"] == "randomized"
    assert len(S) == 2 and validate_integral_cut(G, S)
    assert S.L is not None and S.R is not None


def test_k8_always_bottom():
    G = clique(8)
    for seed in range(5):
        assert k_vertex_connectivity(G, 4, seed=seed) is None
        assert k_vertex_connectivity(G, 4, seed=seed, repetitions=3, config=forced(10)) is None


def test_default_repetitions():
    assert default_repetitions(100) == math.ceil(3600 * math.log(100))


def test_exact_route_matches_oracle():
    rng = random.Random(3)
    for trial in range(120):
        kind = trial % 4
        if kind == 0:
            G = gnp(rng.randint(10, 30), rng.choice([0.1, 0.3, 0.6]), trial)
        elif kind == 1:
            G = generate_planted(rng.randint(6, 9), rng.randint(1, 5), 12, 0.5, 0.4, seed=trial).graph
        elif kind == 2:
            G = cycle(rng.randint(10, 30))
        else:
            G = clique(rng.randint(3, 10))
        k = rng.randint(1, 6)
        kappa = exact_vertex_connectivity(G)[0]
        S = k_vertex_connectivity(G, k, seed=trial)
        assert (S is not None) == (kappa < k), trial
        if S is not None:
            assert len(S) < k and validate_integral_cut(G, S)


def _family(count, seed):
    """Cycles, sparse random graphs and planted cuts with small left sides."""
    rng = random.Random(seed)
    out = []
    for trial in range(count):
        kind = trial % 3
        if kind == 0:
            G = gnp(rng.randint(12, 26), rng.choice([0.15, 0.3]), seed * 1000 + trial)
        elif kind == 1:
            G = generate_planted(rng.randint(4, 6), rng.randint(1, 3), rng.randint(12, 18),
                                 0.5, 0.4, seed=seed * 1000 + trial).graph
        else:
            G = cycle(rng.randint(12, 26))
        out.append((G, exact_vertex_connectivity(G)[0], rng))
    return out


def test_randomized_route_never_cuts_when_too_connected():
    checked = 0
    for G, kappa, rng in _family(24, 1):
        k = max(2, min(5, kappa - rng.choice([0, 1])))
        if kappa < k:
            continue
        assert k_vertex_connectivity(G, k, seed=checked, repetitions=2, config=forced(8)) is None
        checked += 1
    assert checked >= 10


def test_randomized_route_finds_cuts():
    # r is far below the default here; larger local sides need more iterations
    found = 0
    for i, (G, kappa, rng) in enumerate(_family(15, 2)):
        k = max(2, min(5, kappa + rng.choice([1, 1, 2])))
        st = {}
        S = k_vertex_connectivity(G, k, seed=i, repetitions=6, config=forced(150), stats=st)
        assert S is not None, (i, kappa, k)
        assert len(S) < k and validate_integral_cut(G, S)
        found += st["route"] == "randomized"
    assert found >= 10


def test_disconnected_and_k1():
    G = Graph(30, [(i, i + 1) for i in range(28)])     # vertex 29 is isolated
    st = {}
    S = k_vertex_connectivity(G, 2, config=SolveConfig(small_threshold=0), stats=st)
    assert st["route"] == "components" and len(S) == 0 and validate_integral_cut(G, S)
    assert k_vertex_connectivity(cycle(30), 1, config=SolveConfig(small_threshold=0)) is None
    assert len(k_vertex_connectivity(G, 1)) == 0


def test_deterministic_and_threaded():
    G = generate_planted(5, 2, 14, 0.5, 0.4, seed=4).graph
    cfg = forced(100)
    a = k_vertex_connectivity(G, 3, seed=11, repetitions=3, config=cfg)
    b = k_vertex_connectivity(G, 3, seed=11, repetitions=3, config=cfg)
    c = k_vertex_connectivity(G, 3, seed=11, repetitions=3, config=forced(100, workers=3))
    assert a is not None and a == b == c


def test_cost_is_recorded():
    with cost.measure() as c:
        k_vertex_connectivity(cycle(16), 3, seed=0, repetitions=1, config=forced(20))
    assert c.work > 0 and 0 < c.depth <= c.work
    assert "framework" in c.regions and "localcuts" in c.regions


def test_sample_sizes_stay_below_cap():
    G = gnp(40, 0.2, 5)
    st = {}
    k_vertex_connectivity(G, 2, seed=0, repetitions=1, config=forced(5, early_exit=False), stats=st)
    levels = st["X_sizes"]
    assert len(levels) == math.floor(math.log2(G.m)) + 1
    for i, size in enumerate(levels):
        assert size <= G.m / 2 ** i * 3 + 10 * math.log(G.n) + 10


def test_far_side_volume_on_planted():
    # with deg(L) <= deg(R): 2m <= 4 deg(R) + (k-1)(k-2), and deg(R) >= m/3 for m large
    for seed in range(40):
        pl = generate_planted(6 + seed % 6, 1 + seed % 3, 30, 0.4, 0.3, seed=seed)
        G = pl.graph
        L, R = pl.L, pl.R
        if G.volume(L) > G.volume(R):
            L, R = R, L
        k = len(pl.S) + 1
        Sset = set(pl.S)
        inside = sum(1 for u, v in G.edges if u in Sset and v in Sset)
        sl = sum(1 for v in pl.S for u in G.adj[v] if u in set(L))
        sr = sum(1 for v in pl.S for u in G.adj[v] if u in set(R))
        assert 2 * G.m == G.volume(L) + G.volume(R) + sl + sr + 2 * inside
        assert 2 * G.m <= 4 * G.volume(R) + (k - 1) * (k - 2)
        if G.m >= 1.5 * (k - 1) * (k - 2):
            assert G.volume(R) >= G.m / 3


def _freq_within(counts, probs, total, sigmas=3.0):
    for v, p in enumerate(probs):
        sd = math.sqrt(total * p * (1 - p))
        if abs(counts[v] - total * p) > sigmas * sd + 1e-9:
            return False
    return True


def test_sampler_star():
    G = star(9)
    N = 100_000
    s = sample_degree_proportional(G, N, 1)
    c = s.count(0)
    assert abs(c - N / 2) <= 3 * math.sqrt(N / 4)


def test_sampler_regular_uniform():
    G = cycle(25)
    N = 100_000
    s = sample_degree_proportional(G, N, 2)
    counts = [0] * G.n
    for v in s:
        counts[v] += 1
    exp = N / G.n
    chi2 = sum((c - exp) ** 2 / exp for c in counts)
    assert chi2 < sps.chi2.ppf(0.999, G.n - 1)


def test_sampler_matches_degrees():
    G = gnp(20, 0.3, 9)
    N = 1_000_000
    s = sample_degree_proportional(G, N, 3)
    counts = [0] * G.n
    for v in s:
        counts[v] += 1
    probs = [d / (2 * G.m) for d in G.degrees]
    assert _freq_within(counts, probs, N)
    assert all(counts[v] == 0 for v in range(G.n) if G.degree(v) == 0)


def test_sampler_needs_edges():
    with pytest.raises(ValueError):
        sample_degree_proportional(Graph(3, []), 1, 0)
