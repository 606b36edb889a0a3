import io
import math
import random

import networkx as nx
import pytest

from vck.graph import (INF, FractionalCut, Graph, GraphError, Path, VertexCut, WeightFunction,
                       dump_fractional_cut, dump_graph, dump_vertex_cut, exact_vertex_distance,
                       load_fractional_cut, load_graph, load_vertex_cut, separates,
                       validate_fractional_cut, validate_integral_cut)

from helpers import brute_distance, clique, cycle, gnp, naive_components, path, star


def test_load_path_graph():
    G = load_graph("p edge 3 2\ne 1 2\ne 2 3\n")
    assert G.n == 3 and G.m == 2
    assert G.adj == ((1,), (0, 2), (1,))


def test_load_rejects_self_loop():
    with pytest.raises(GraphError, match="line 2: self-loop"):
        load_graph("p edge 2 1\ne 1 1\n")


def test_load_rejects_duplicate_with_line():
    with pytest.raises(GraphError, match="line 3: duplicate edge"):
        load_graph("p edge 3 2\ne 1 2\ne 2 1\n")


def test_load_parse_error_has_line_number():
    with pytest.raises(GraphError, match="line 2"):
        load_graph("p edge 3 1\ne 1 x\n")


def test_load_k4():
    text = "p edge 4 6\n" + "".join("e %d %d\n" % (u, v) for u in range(1, 5)
                                     for v in range(u + 1, 5))
    G = load_graph(text)
    assert all(G.degree(v) == 3 for v in range(4))


def test_round_trip():
    for seed in range(20):
        G = gnp(15, 0.3, seed)
        buf = io.StringIO()
        dump_graph(G, buf)
        H = load_graph(buf.getvalue())
        assert H == G and H.adj == G.adj


def test_degree_invariants():
    G = gnp(30, 0.2, 1)
    assert sum(G.degrees) == 2 * G.m
    for v in range(G.n):
        for w in G.adj[v]:
            assert v in G.adj[w]


def test_distance_counts_both_endpoints():
    G = path(3)
    assert exact_vertex_distance(G, [1, 1, 1], 0)[2] == 3


def test_distance_star():
    G = star(4)
    d = exact_vertex_distance(G, [0, 5, 5, 5, 5], 0)
    assert d[1:] == [5, 5, 5, 5]


def test_distance_unreachable_is_inf():
    G = Graph(3, [(0, 1)])
    assert exact_vertex_distance(G, [1, 1, 1], 0)[2] is INF


def test_distance_matches_path_enumeration():
    rng = random.Random(3)
    for seed in range(25):
        G = gnp(rng.randint(4, 12), 0.3, seed)
        lens = [rng.uniform(0, 10) for _ in range(G.n)]
        d = exact_vertex_distance(G, lens, 0)
        for t in range(G.n):
            b = brute_distance(G, lens, 0, t)
            if b == math.inf:
                assert d[t] == INF
            else:
                assert d[t] == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_distance_edge_relation():
    rng = random.Random(5)
    G = gnp(40, 0.15, 5)
    lens = [rng.uniform(0, 3) for _ in range(G.n)]
    d = exact_vertex_distance(G, lens, 0)
    for u, v in G.edges:
        assert d[v] <= d[u] + lens[v] + 1e-12
        assert d[u] <= d[v] + lens[u] + 1e-12


def test_weight_function_sparse():
    w = WeightFunction()
    w[3] = 2.0
    w[4] = 1.0
    assert w.nontrivial() == {3: 2.0}
    w[3] = 1
    assert len(w) == 0 and w[3] == 1.0
    with pytest.raises(ValueError):
        w[1] = -1


def test_fractional_validate_p3():
    G = path(3)
    assert validate_fractional_cut(G, FractionalCut(0, 2, {1: 1.0}), 2)


def test_fractional_validate_adjacent_fails():
    G = clique(4)
    assert not validate_fractional_cut(G, FractionalCut(0, 1, {2: 1.0, 3: 1.0}), 5)


def test_fractional_validate_endpoint_and_size():
    G = path(3)
    assert not validate_fractional_cut(G, FractionalCut(0, 2, {0: 1.0, 1: 1.0}), 3)
    assert not validate_fractional_cut(G, FractionalCut(0, 2, {1: 1.6}), 2)
    assert not validate_fractional_cut(G, FractionalCut(0, 2, {1: 0.99}), 2)


def test_fractional_validate_disconnected_endpoints():
    G = Graph(4, [(0, 1), (2, 3)])
    assert validate_fractional_cut(G, FractionalCut(0, 3, {}), 1)


def test_integral_examples():
    assert validate_integral_cut(path(3), VertexCut({1}))
    G = clique(4)
    import itertools
    for size in range(3):
        for S in itertools.combinations(range(4), size):
            assert not validate_integral_cut(G, VertexCut(S))
    assert validate_integral_cut(cycle(8), VertexCut({0, 4}))
    assert not validate_integral_cut(cycle(8), VertexCut({0, 1}))


def test_integral_agrees_with_component_count():
    rng = random.Random(11)
    for trial in range(1000):
        G = gnp(rng.randint(2, 14), rng.choice([0.2, 0.4, 0.7]), trial)
        S = [v for v in range(G.n) if rng.random() < 0.25]
        expect = len(S) >= G.n - 1 or len(naive_components(G, S)) >= 2
        assert validate_integral_cut(G, VertexCut(S)) == expect


def test_components_match_networkx():
    for seed in range(10):
        G = gnp(50, 0.04, seed)
        nxg = nx.Graph()
        nxg.add_nodes_from(range(G.n))
        nxg.add_edges_from(G.edges)
        ours = sorted(tuple(c) for c in G.components())
        ref = sorted(tuple(sorted(c)) for c in nx.connected_components(nxg))
        assert ours == ref


def test_separates():
    G = cycle(6)
    assert separates(G, {1, 4}, 0, 3)
    assert not separates(G, {1}, 0, 3)
    assert not separates(G, {0, 4}, 0, 3)


def test_path_object():
    G = path(4)
    p = Path([0, 1, 2])
    assert p.is_valid(G) and p.start == 0 and p.end == 2
    assert p.length([1, 2, 3, 4]) == 6
    assert not Path([0, 2]).is_valid(G)


def test_cut_file_round_trip():
    C = FractionalCut(0, 5, {2: 0.25, 3: 1.0 / 3})
    buf = io.StringIO()
    dump_fractional_cut(C, buf)
    D = load_fractional_cut(buf.getvalue())
    assert D.values == C.values and (D.s, D.t) == (0, 5)
    buf = io.StringIO()
    dump_vertex_cut(VertexCut({4, 1}), buf)
    assert buf.getvalue() == "s 2\n2 5\n"
    assert load_vertex_cut(buf.getvalue()).separator == {1, 4}
