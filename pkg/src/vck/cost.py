"""Work/depth cost accounting.

Counters are scoped through a context variable, so nothing is charged unless a
caller opened a measurement with ``measure()``.  Sequential regions add depth;
the branches of a ``parallel()`` block add work but only the deepest branch
counts toward depth.
"""

import contextvars
import math
from contextlib import contextmanager

_current = contextvars.ContextVar("vck_cost", default=None)


def log_depth(units):
    """Depth of a balanced data-parallel pass over `units` items."""
    if units <= 1:
        return 1
    return int(math.ceil(math.log2(units))) + 1


class CostCounters:
    def __init__(self):
        self.work = 0
        self.depth = 0
        self.regions = {}   # label -> [work, depth]

    def charge(self, work, depth=None):
        if depth is None:
            depth = log_depth(work)
        self.work += int(work)
        self.depth += int(min(depth, work))

    def _absorb_regions(self, child):
        for label, (w, d) in child.regions.items():
            acc = self.regions.setdefault(label, [0, 0])
            acc[0] += w
            acc[1] += d

    def as_dict(self):
        return {"work": self.work, "depth": self.depth,
                "regions": {k: tuple(v) for k, v in sorted(self.regions.items())}}

    def __repr__(self):
        return "CostCounters(work=%d, depth=%d)" % (self.work, self.depth)


def current():
    return _current.get()


def charge(work, depth=None):
    c = _current.get()
    if c is not None:
        c.charge(work, depth)


@contextmanager
def measure():
    """Open a fresh root counter; yields it."""
    root = CostCounters()
    token = _current.set(root)
    try:
        yield root
    finally:
        _current.reset(token)


@contextmanager
def region(label):
    """Sequential labeled region; merged into the parent on exit."""
    parent = _current.get()
    if parent is None:
        yield None
        return
    child = CostCounters()
    token = _current.set(child)
    try:
        yield child
    finally:
        _current.reset(token)
        parent.work += child.work
        parent.depth += child.depth
        parent._absorb_regions(child)
        acc = parent.regions.setdefault(label, [0, 0])
        acc[0] += child.work
        acc[1] += child.depth


class _Parallel:
    def __init__(self, parent):
        self.parent = parent
        self.children = []

    @contextmanager
    def branch(self):
        if self.parent is None:
            yield None
            return
        child = CostCounters()
        token = _current.set(child)
        try:
            yield child
        finally:
            _current.reset(token)
            self.children.append(child)

    def add(self, child):
        """Record a branch that was measured elsewhere (e.g. on a worker thread)."""
        if self.parent is not None and child is not None:
            self.children.append(child)


@contextmanager
def parallel(label=None):
    """Parallel-for region.  Use ``with par.branch():`` for each task."""
    parent = _current.get()
    par = _Parallel(parent)
    yield par
    if parent is None or not par.children:
        return
    w = sum(c.work for c in par.children)
    d = min(w, max(c.depth for c in par.children) + log_depth(len(par.children)))
    parent.work += w
    parent.depth += d
    for c in par.children:
        parent._absorb_regions(c)
    if label is not None:
        acc = parent.regions.setdefault(label, [0, 0])
        acc[0] += w
        acc[1] += d
