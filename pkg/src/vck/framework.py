"""Top-level randomized test for kappa(G) < k.

Small graphs go to the exact flow solver.  Otherwise each repetition sweeps
mu = 1, 2, 4, ... up to m: it samples a far vertex t by degree, keeps the
low-degree vertices outside N[t], builds sketch structures per component of
that set, samples seed vertices x, and runs the local cut search from each.
The first fractional (x, tau)-cut found is turned into an integral separator,
which is validated before it is returned.  A graph with kappa(G) >= k always
gives None.
"""

import contextvars
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import cost
from .graph import VertexCut, separates, validate_integral_cut, witness_partition
from .localcuts import LocalCutParams, local_cuts
from .oracle import small_instance_cut
from .rounding import integral_st_cut
from .ssf import LazyBases, SSFConfig


def default_repetitions(n, c=2):
    return max(1, math.ceil(1800 * c * math.log(max(n, 2))))


@dataclass
class SolveConfig:
    repetitions: int = None          # default: default_repetitions(n)
    small_threshold: int = None      # exact solver when n <= this; default 100 k^2
    r: int = None                    # local cut iterations; default ceil(400 k^3 ln n)
    budget: int = None               # r used in the local cut volume thresholds
    ssf: SSFConfig = field(default_factory=SSFConfig)
    early_exit: bool = True
    workers: int = 1                 # > 1 runs the local cut calls of one level on threads
    checks: bool = True
    mwu_rounds: int = None           # override for the rounding step's solver


def _stream(*parts):
    """Deterministic 63-bit seed for a labelled random stream."""
    return random.Random("/".join(str(p) for p in parts)).getrandbits(63)


def sample_degree_proportional(G, count, seed):
    """count i.i.d. vertices with Pr[v] = deg(v) / 2m (prefix-sum inversion)."""
    if G.m < 1:
        raise ValueError("graph has no edges")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    cum = []
    acc = 0
    for d in G.degrees:
        acc += d
        cum.append(acc)
    cost.charge(G.n + count)
    return rng.choices(range(G.n), cum_weights=cum, k=count)


def _x_cap(m, mu, n):
    # |X| has mean at most m / mu; the cap leaves room for the Chernoff tail
    return 3 * m / mu + 10 * math.log(max(n, 2)) + 10


def k_vertex_connectivity(G, k, seed=0, repetitions=None, config=None, stats=None):
    """A vertex cut of size < k, or None.

    Any returned cut is checked to separate G.  With kappa(G) >= k the result
    is always None; with kappa(G) < k a cut is found with high probability
    when the defaults are used.
    """
    cfg = config or SolveConfig()
    if repetitions is None:
        repetitions = cfg.repetitions
    if k < 1:
        raise ValueError("k must be at least 1")
    n, m = G.n, G.m
    if stats is not None:
        stats.update(route=None, repetitions=0, levels=0, local_calls=0, local_returns=0,
                     rounding_calls=0, X_sizes=[], outcome=None)

    def done(route, S):
        if stats is not None:
            stats["route"] = route
            stats["outcome"] = "cut" if S is not None else "bottom"
        if S is not None:
            assert len(S) < k and validate_integral_cut(G, S), "invalid cut produced"
        return S

    small = cfg.small_threshold if cfg.small_threshold is not None else 100 * k * k
    if n <= small or n < 3:
        return done("exact", small_instance_cut(G, k))
    # A disconnected graph has the empty cut.  The sampled search cannot see
    # it when a side has no edges (an isolated vertex is never sampled), so
    # it is settled here; this also covers k = 1.
    comps = G.components()
    if len(comps) > 1:
        return done("components", VertexCut(frozenset(), frozenset(comps[0]),
                                            frozenset(range(n)) - set(comps[0])))
    if k == 1:
        return done("components", None)
    if repetitions is None:
        repetitions = default_repetitions(n)
    found = None
    with cost.region("framework"):
        for rep in range(repetitions):
            if stats is not None:
                stats["repetitions"] = rep + 1
            for i in range(int(math.floor(math.log2(m))) + 1):
                mu = 2 ** i
                if stats is not None:
                    stats["levels"] += 1
                hit = _level(G, k, mu, cfg, (seed, rep, i), stats)
                if hit is not None and found is None:
                    found = hit
                    if cfg.early_exit:
                        break
            if found is not None and cfg.early_exit:
                break
        if found is None:
            return done("randomized", None)
        x, tau = found
        if stats is not None:
            stats["rounding_calls"] += 1
            stats["pair"] = (x, tau)
        S = integral_st_cut(G, k, x, tau, seed=_stream(seed, "round", x, tau),
                            checks=cfg.checks, mwu_rounds=cfg.mwu_rounds)
    if S is None or len(S) >= k or not separates(G, S.separator, x, tau):
        return done("randomized", None)
    return done("randomized", witness_partition(G, S.separator, x))


def _level(G, k, mu, cfg, key, stats):
    """One (repetition, mu) iteration: Steps 1-5.  Returns (x, tau) or None."""
    n, m = G.n, G.m
    rng = random.Random(_stream(*key, "level"))
    t = sample_degree_proportional(G, 1, rng)[0]
    blocked = G.closed_neighborhood([t])
    deg = G.degrees
    low = [v for v in range(n) if v not in blocked and deg[v] <= 5 * mu]
    cost.charge(n)
    comps = G.components(low)
    X = []
    for v in low:
        if deg[v] <= 2 * mu and rng.random() < deg[v] / (2 * mu):
            X.append(v)
    if stats is not None:
        stats["X_sizes"].append(len(X))
    if cfg.checks:
        assert len(X) <= _x_cap(m, mu, n), (len(X), m, mu)
    if not X:
        return None
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    r = LocalCutParams(k, mu, X[0], comps[comp_of[X[0]]], cfg.r, cfg.budget).rounds(n)
    bases = {}
    with cost.parallel("ssf-init") as par:
        for ci in sorted({comp_of[x] for x in X}):
            with par.branch():
                bases[ci] = LazyBases(G, comps[ci], deg, r, _stream(*key, "bases", ci), cfg.ssf)
    jobs = []
    for x in X:
        ci = comp_of[x]
        params = LocalCutParams(k, mu, x, comps[ci], cfg.r, cfg.budget)
        jobs.append((x, params, bases[ci], _stream(*key, "x", x)))

    def run(job):
        x, params, b, s = job
        C = local_cuts(G, params, bases=b, seed=s, ssf_config=cfg.ssf, checks=cfg.checks)
        return None if C is None else (x, C.t)

    result = None
    with cost.parallel("localcuts") as par:
        if cfg.workers > 1:
            def measured(job):
                with cost.measure() as c:
                    out = run(job)
                return out, c

            with ThreadPoolExecutor(cfg.workers) as pool:
                futs = [pool.submit(contextvars.copy_context().run, measured, j) for j in jobs]
                outs = [f.result() for f in futs]
            for out, c in outs:
                par.add(c)
                if stats is not None:
                    stats["local_calls"] += 1
                if out is not None:
                    if stats is not None:
                        stats["local_returns"] += 1
                    if result is None:
                        result = out
        else:
            for job in jobs:
                with par.branch():
                    out = run(job)
                if stats is not None:
                    stats["local_calls"] += 1
                if out is not None:
                    if stats is not None:
                        stats["local_returns"] += 1
                    if result is None:
                        result = out
                        if cfg.early_exit:
                            break
    return result
