import csv
import io
import json

import pytest

from vck.cli import main
from vck.graph import dump_graph, load_graph, load_vertex_cut, separates, validate_integral_cut
from vck.oracle import exact_vertex_connectivity

from helpers import clique, cycle


def run(argv, monkeypatch=None):
    out = io.StringIO()
    rc = main(argv, out=out)
    return rc, out.getvalue()


@pytest.fixture
def c20(tmp_path):
    p = tmp_path / "c20.col"
    with open(p, "w") as fh:
        dump_graph(cycle(20), fh)
    return str(p)


def test_solve_cycle(c20):
    rc, out = run(["solve", "--graph", c20, "--k", "3", "--seed", "7"])
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "CUT 2"
    S = frozenset(int(v) - 1 for v in lines[1].split())
    assert len(S) == 2 and validate_integral_cut(cycle(20), S)


def test_solve_bottom_and_json(tmp_path):
    p = tmp_path / "k6.col"
    with open(p, "w") as fh:
        dump_graph(clique(6), fh)
    assert run(["solve", "--graph", str(p), "--k", "4"]) == (0, "BOT\n")
    rc, out = run(["solve", "--graph", str(p), "--k", "4", "--format", "json"])
    assert rc == 0 and json.loads(out) == {"result": "BOT"}


def test_solve_output_is_a_vertex_cut_file(c20):
    rc, out = run(["solve", "--graph", c20, "--k", "3"])
    lines = out.splitlines()
    S = load_vertex_cut(["s %s" % lines[0].split()[1], lines[1]])
    assert len(S) == 2


def test_seed_from_environment(c20, monkeypatch):
    monkeypatch.setenv("VCK_SEED", "5")
    a = run(["solve", "--graph", c20, "--k", "3", "--small-threshold", "0", "--r", "30",
             "--replication", "0.5", "--repetitions", "3"])
    b = run(["solve", "--graph", c20, "--k", "3", "--small-threshold", "0", "--r", "30",
             "--replication", "0.5", "--repetitions", "3", "--seed", "5"])
    assert a == b and a[1].startswith("CUT 2")
    monkeypatch.setenv("VCK_SEED", "abc")
    assert run(["solve", "--graph", c20, "--k", "3"])[0] == 2


def test_usage_errors(c20, tmp_path):
    assert run([])[0] == 2
    assert run(["nope"])[0] == 2
    assert run(["solve", "--graph", c20])[0] == 2
    assert run(["solve", "--k", "3"])[0] == 2
    assert run(["solve", "--graph", str(tmp_path / "missing.col"), "--k", "3"])[0] == 2
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 3 1\ne 1 1\n")
    assert run(["solve", "--graph", str(bad), "--k", "2"])[0] == 2
    assert run(["stcut", "--graph", c20, "--k", "3", "--s", "1", "--t", "1"])[0] == 2
    assert run(["round", "--graph", c20, "--k", "3", "--s", "0", "--t", "5"])[0] == 2


def test_assertion_exit_code(c20, monkeypatch):
    import vck.cli as cli

    def broken(*a, **kw):
        raise AssertionError("boom")

    monkeypatch.setattr(cli, "k_vertex_connectivity", broken)
    assert run(["solve", "--graph", c20, "--k", "3"])[0] == 1


def test_stcut_and_round(c20):
    rc, out = run(["stcut", "--graph", c20, "--k", "3", "--s", "1", "--t", "11"])
    assert rc == 0
    head = out.splitlines()[0].split()
    assert head[0] == "FRAC" and head[1:3] == ["1", "11"] and float(head[3]) <= 2.5
    rc, out = run(["stcut", "--graph", c20, "--k", "2", "--s", "1", "--t", "11"])
    assert out == "BOT\n"
    rc, out = run(["round", "--graph", c20, "--k", "3", "--s", "1", "--t", "11"])
    lines = out.splitlines()
    assert lines[0] == "CUT 2"
    S = [int(v) - 1 for v in lines[1].split()]
    assert separates(cycle(20), S, 0, 10)


def test_oracle_and_gen(tmp_path):
    prefix = str(tmp_path / "pl")
    assert run(["gen", "--model", "planted", "--nL", "8", "--nS", "2", "--nR", "64", "--seed", "1",
                "--out", prefix])[0] == 0
    with open(prefix + ".col") as fh:
        G = load_graph(fh)
    with open(prefix + ".witness.json") as fh:
        w = json.load(fh)
    assert len(w["S"]) == 2 and w["x"] in w["L"]
    kappa = exact_vertex_connectivity(G)[0]
    assert kappa <= 2
    rc, out = run(["oracle", "--graph", prefix + ".col"])
    assert out.splitlines()[0] == "KAPPA %d" % kappa
    S = [int(v) - 1 for v in w["S"]]
    assert separates(G, S, w["L"][0] - 1, w["R"][0] - 1)
    rc, out = run(["oracle", "--graph", prefix + ".col", "--s", str(w["L"][0]), "--t", str(w["R"][0]),
                   "--format", "json"])
    assert json.loads(out)["kappa"] <= 2


def test_gen_to_stdout_roundtrip():
    rc, out = run(["gen", "--model", "gnp", "--n", "30", "--p", "0.2", "--seed", "3"])
    assert rc == 0
    G = load_graph(out)
    rc2, out2 = run(["gen", "--model", "gnp", "--n", "30", "--p", "0.2", "--seed", "3"])
    assert out == out2 and G.n == 30


def test_localcut_command(tmp_path):
    p = tmp_path / "c.col"
    with open(p, "w") as fh:
        dump_graph(cycle(30), fh)
    rc, out = run(["localcut", "--graph", str(p), "--k", "3", "--x", "1", "--mu", "2", "--t", "16",
                   "--replication", "0.5"])
    assert rc == 0
    head = out.splitlines()[0].split()
    assert head[0] == "FRAC" and head[1] == "1" and float(head[3]) <= 2.5
    rc, _ = run(["localcut", "--graph", str(p), "--k", "3", "--x", "16", "--mu", "2", "--t", "16"])
    assert rc == 2


def test_bench_csv_is_deterministic():
    argv = ["bench", "--k", "3", "--m-grid", "7..8", "--avg-deg", "10", "--seed", "2"]
    rc, a = run(argv)
    rc2, b = run(argv + ["--deterministic"])
    assert rc == rc2 == 0
    rows = list(csv.DictReader(io.StringIO(a)))
    assert a.splitlines()[0] == "m,k,work,depth,wall_ms,result"
    assert len(rows) == 2
    for r in rows:
        assert int(r["work"]) >= int(r["depth"]) > 0
    strip = lambda text: [(r["m"], r["work"], r["depth"], r["result"])
                          for r in csv.DictReader(io.StringIO(text))]
    assert strip(a) == strip(b)


def test_selftest_command():
    rc, out = run(["selftest", "--seed", "1"])
    assert rc == 0
    assert all(line.startswith("PASS") for line in out.splitlines())
    assert len(out.splitlines()) == 8
