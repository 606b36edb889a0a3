"""Command-line interface: ``vck <command> [options]``.

Graphs are read in DIMACS edge format ("p edge n m" / "e u v", 1-based ids)
from a file or from stdin with ``--graph -``.  Vertex ids on output are
1-based as well.  A bottom answer prints ``BOT`` and exits 0; usage and input
errors exit 2; a failed internal assertion exits 1.
"""

import argparse
import csv
import json
import os
import sys
import time

from . import cost, selftest
from .framework import SolveConfig, k_vertex_connectivity, sample_degree_proportional
from .graph import GraphError, Graph, dump_graph, load_graph
from .localcuts import InputError, LocalCutParams, local_cuts
from .mwu import fractional_st_cut
from .oracle import exact_st_vertex_connectivity, exact_vertex_connectivity, generate_gnp, generate_planted
from .rounding import integral_st_cut
from .ssf import SSFConfig


class UsageError(Exception):
    pass


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="master seed (falls back to $VCK_SEED, then 0)")
    p.add_argument("--k", type=int, default=None, help="connectivity threshold")
    p.add_argument("--graph", default=None, help="DIMACS graph file, or - for stdin")
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    p.add_argument("--repetitions", type=int, default=None, help="outer repetitions of solve")
    p.add_argument("--deterministic", action="store_true",
                   help="run every task sequentially (results never depend on scheduling)")
    p.add_argument("--workers", type=int, default=1, help="threads for the local cut calls of a level")
    p.add_argument("--r", type=int, default=None, help="local cut iterations (default ceil(400 k^3 ln n))")
    p.add_argument("--budget", type=int, default=None, help="r used in the local cut volume thresholds")
    p.add_argument("--replication", type=float, default=None, help="sketch replication constant")
    p.add_argument("--sketch-rounds", type=int, default=None, help="sketch recovery rounds")
    p.add_argument("--small-threshold", type=int, default=None,
                   help="use the exact solver when n <= this (default 100 k^2)")
    return p


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="vck", description="Randomized k-vertex-connectivity tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("solve", parents=[common], help="decide kappa(G) < k; print a cut or BOT")

    p = sub.add_parser("stcut", parents=[common], help="fractional (s, t)-cut of size <= k - 0.5")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--rounds", type=int, default=None, help="weight-update rounds (default ceil(320 k^3 ln n))")

    p = sub.add_parser("localcut", parents=[common], help="local fractional cut around x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--t", type=int, default=None, help="far vertex defining V_inner (default: sampled by degree)")

    p = sub.add_parser("round", parents=[common], help="integral (s, t)-cut through a fractional one")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("oracle", parents=[common], help="exact kappa(G), or kappa(s, t) with --s/--t")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--t", type=int, default=None)

    p = sub.add_parser("gen", parents=[common], help="generate a graph (and a witness for planted cuts)")
    p.add_argument("--model", choices=("planted", "gnp", "cycle", "clique"), default="planted")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--nL", type=int, default=8)
    p.add_argument("--nS", type=int, default=1)
    p.add_argument("--nR", type=int, default=40)
    p.add_argument("--p-in", type=float, default=0.4)
    p.add_argument("--p-cross", type=float, default=0.3)
    p.add_argument("--mu", type=int, default=None)
    p.add_argument("--shape", choices=("random", "path"), default="random")
    p.add_argument("--out", default=None, help="write PREFIX.col (and PREFIX.witness.json); default stdout")

    p = sub.add_parser("bench", parents=[common], help="work/depth over a doubling grid of m; CSV")
    p.add_argument("--model", choices=("gnp",), default="gnp")
    p.add_argument("--m-grid", default="12..16", help="exponents A..B for m = 2^A .. 2^B")
    p.add_argument("--avg-deg", type=float, default=24.0)
    p.add_argument("--seeds", type=int, default=1, help="graphs per grid point")

    sub.add_parser("selftest", parents=[common], help="run the built-in invariant checks")
    return ap


# ---------------------------------------------------------------- helpers

def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("VCK_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError("VCK_SEED must be an integer, got %r" % env) from None


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError("--%s is required for %s" % (name.replace("_", "-"), args.command))


def _graph(args):
    _need(args, "graph")
    try:
        if args.graph == "-":
            return load_graph(sys.stdin)
        with open(args.graph) as fh:
            return load_graph(fh)
    except OSError as exc:
        raise UsageError("cannot read graph: %s" % exc) from None


def _vertex(G, v, flag):
    if v is None or not 1 <= v <= G.n:
        raise UsageError("--%s must be a vertex id in 1..%d" % (flag, G.n))
    return v - 1


def _ssf_config(args):
    kw = {}
    if args.replication is not None:
        kw["replication"] = args.replication
    if args.sketch_rounds is not None:
        kw["rounds"] = args.sketch_rounds
    return SSFConfig(**kw)


def _solve_config(args, **extra):
    return SolveConfig(repetitions=args.repetitions, small_threshold=args.small_threshold,
                       r=args.r, budget=args.budget, ssf=_ssf_config(args),
                       workers=1 if args.deterministic else max(1, args.workers), **extra)


def _emit_cut(args, out, S):
    if S is None:
        if args.format == "json":
            json.dump({"result": "BOT"}, out)
            out.write("\n")
        else:
            out.write("BOT\n")
        return
    verts = [v + 1 for v in sorted(S.separator if hasattr(S, "separator") else S)]
    if args.format == "json":
        json.dump({"result": "CUT", "size": len(verts), "separator": verts}, out)
        out.write("\n")
    else:
        out.write("CUT %d\n%s\n" % (len(verts), " ".join(map(str, verts))))


def _emit_fractional(args, out, C):
    if C is None:
        _emit_cut(args, out, None)
        return
    vals = {v + 1: C.values[v] for v in sorted(C.values)}
    if args.format == "json":
        json.dump({"result": "FRAC", "s": C.s + 1, "t": C.t + 1, "size": C.size,
                   "values": {str(v): x for v, x in vals.items()}}, out)
        out.write("\n")
        return
    out.write("FRAC %d %d %r\n" % (C.s + 1, C.t + 1, C.size))
    for v, x in vals.items():
        out.write("%d %r\n" % (v, x))


# ---------------------------------------------------------------- commands

def cmd_solve(args, out):
    G = _graph(args)
    _need(args, "k")
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    S = k_vertex_connectivity(G, args.k, seed=_seed(args), config=_solve_config(args))
    _emit_cut(args, out, S)


def cmd_stcut(args, out):
    G = _graph(args)
    _need(args, "k")
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    s, t = _vertex(G, args.s, "s"), _vertex(G, args.t, "t")
    if s == t:
        raise UsageError("--s and --t must differ")
    _emit_fractional(args, out, fractional_st_cut(G, args.k, s, t, rounds=args.rounds))


def cmd_localcut(args, out):
    G = _graph(args)
    _need(args, "k")
    if args.k < 2 or args.mu < 1:
        raise UsageError("--k must be at least 2 and --mu at least 1")
    x = _vertex(G, args.x, "x")
    if args.t is not None:
        t = _vertex(G, args.t, "t")
    else:
        if G.m == 0:
            raise UsageError("graph has no edges")
        t = sample_degree_proportional(G, 1, _seed(args))[0]
    blocked = G.closed_neighborhood([t])
    low = [v for v in range(G.n) if v not in blocked and G.degree(v) <= 5 * args.mu]
    comp = next((c for c in G.components(low) if x in c), None)
    if comp is None:
        raise UsageError("x is not a low-degree vertex outside N[t]")
    params = LocalCutParams(args.k, args.mu, x, comp, args.r, args.budget)
    try:
        C = local_cuts(G, params, seed=_seed(args), ssf_config=_ssf_config(args))
    except InputError as exc:
        raise UsageError(str(exc)) from None
    _emit_fractional(args, out, C)


def cmd_round(args, out):
    G = _graph(args)
    _need(args, "k")
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    s, t = _vertex(G, args.s, "s"), _vertex(G, args.t, "t")
    if s == t:
        raise UsageError("--s and --t must differ")
    _emit_cut(args, out, integral_st_cut(G, args.k, s, t, seed=_seed(args)))


def cmd_oracle(args, out):
    G = _graph(args)
    if (args.s is None) != (args.t is None):
        raise UsageError("give both --s and --t, or neither")
    if args.s is not None:
        s, t = _vertex(G, args.s, "s"), _vertex(G, args.t, "t")
        if s == t:
            raise UsageError("--s and --t must differ")
        kappa, sep = exact_st_vertex_connectivity(G, s, t)
    else:
        if G.n < 2:
            raise UsageError("need at least two vertices")
        kappa, sep = exact_vertex_connectivity(G)
    verts = [] if sep is None else [v + 1 for v in sorted(sep)]
    if args.format == "json":
        json.dump({"kappa": kappa, "separator": None if sep is None else verts}, out)
        out.write("\n")
    else:
        out.write("KAPPA %d\n" % kappa)
        if sep is not None:
            out.write(" ".join(map(str, verts)) + "\n")


def cmd_gen(args, out):
    seed = _seed(args)
    pl = None
    if args.model == "planted":
        try:
            pl = generate_planted(args.nL, args.nS, args.nR, args.p_in, args.p_cross, seed,
                                  mu_target=args.mu, shape=args.shape)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        G = pl.graph
    else:
        _need(args, "n")
        if args.n < 1:
            raise UsageError("--n must be positive")
        if args.model == "gnp":
            _need(args, "p")
            try:
                G = generate_gnp(args.n, args.p, seed)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        elif args.model == "cycle":
            if args.n < 3:
                raise UsageError("a cycle needs --n >= 3")
            G = Graph(args.n, [(i, (i + 1) % args.n) for i in range(args.n)])
        else:
            G = Graph(args.n, [(u, v) for u in range(args.n) for v in range(u + 1, args.n)])
    if args.out is None:
        dump_graph(G, out)
        if pl is not None:
            sys.stderr.write(json.dumps(_witness_1based(pl)) + "\n")
        return
    with open(args.out + ".col", "w") as fh:
        dump_graph(G, fh)
    if pl is not None:
        with open(args.out + ".witness.json", "w") as fh:
            json.dump(_witness_1based(pl), fh, indent=1)
            fh.write("\n")


def _witness_1based(pl):
    w = pl.witness()
    return {"L": [v + 1 for v in w["L"]], "S": [v + 1 for v in w["S"]],
            "R": [v + 1 for v in w["R"]], "mu": w["mu"], "x": w["x"] + 1}


def _grid(text):
    try:
        a, b = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError("--m-grid must look like A..B") from None
    if not 1 <= a <= b:
        raise UsageError("--m-grid needs 1 <= A <= B")
    return range(a, b + 1)


BENCH_DEFAULTS = dict(r=2, replication=0.01, sketch_rounds=4)


def bench_rows(k, exps, avg_deg, seeds, seed, r=None, budget=None, replication=None,
               sketch_rounds=None, workers=1):
    """One full repetition per graph, no early exit, every grid point on the sampled path."""
    ssf = SSFConfig(replication=replication if replication is not None else BENCH_DEFAULTS["replication"],
                    rounds=sketch_rounds if sketch_rounds is not None else BENCH_DEFAULTS["sketch_rounds"])
    cfg = SolveConfig(repetitions=1, small_threshold=0, early_exit=False, checks=False,
                      r=r if r is not None else BENCH_DEFAULTS["r"], budget=budget, ssf=ssf, workers=workers)
    for e in exps:
        m_target = 2 ** e
        n = max(3, int(round(2 * m_target / avg_deg)))
        p = min(1.0, avg_deg / (n - 1))
        for j in range(seeds):
            G = generate_gnp(n, p, "bench/%d/%d/%d" % (seed, e, j))
            t0 = time.perf_counter()
            with cost.measure() as c:
                S = k_vertex_connectivity(G, k, seed=seed + j, config=cfg)
            wall = (time.perf_counter() - t0) * 1000
            yield {"m": G.m, "k": k, "work": c.work, "depth": c.depth, "wall_ms": round(wall, 1),
                   "result": "BOT" if S is None else "CUT%d" % len(S)}


def cmd_bench(args, out):
    _need(args, "k")
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    w = csv.DictWriter(out, fieldnames=["m", "k", "work", "depth", "wall_ms", "result"], lineterminator="\n")
    w.writeheader()
    for row in bench_rows(args.k, _grid(args.m_grid), args.avg_deg, max(1, args.seeds), _seed(args),
                          args.r, args.budget, args.replication, args.sketch_rounds,
                          1 if args.deterministic else max(1, args.workers)):
        w.writerow(row)
        out.flush()


def cmd_selftest(args, out):
    return 1 if selftest.run(_seed(args), out) else 0


COMMANDS = {"solve": cmd_solve, "stcut": cmd_stcut, "localcut": cmd_localcut, "round": cmd_round,
            "oracle": cmd_oracle, "gen": cmd_gen, "bench": cmd_bench, "selftest": cmd_selftest}


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        rc = COMMANDS[args.command](args, out)
    except (UsageError, GraphError) as exc:
        sys.stderr.write("vck %s: %s\n" % (args.command, exc))
        return 2
    except AssertionError as exc:
        sys.stderr.write("vck %s: internal check failed: %s\n" % (args.command, exc))
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
