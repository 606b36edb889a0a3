"""Treap-backed sequences with XOR data aggregates and weight sums.

`TreapStore` holds node records in a frozen base plus a private overlay; every
write goes to the overlay, so one base can back many independent sessions.
`IntervalSequence` wraps a single circular sequence with the batch interval
tree operations (init / update / agg / sum / search).
"""

import numpy as np

from . import cost

# record layout
L, R, P, PRIO, SIZE, WSUM, SIG = range(7)


class ThresholdUnreachable(ValueError):
    pass


def build_treap(order, prios, sigma):
    """Cartesian-tree build of one sequence.

    `order` lists node ids in sequence order; returns (root, records) where
    records maps node id -> record list.  Linear time via the usual stack.
    """
    recs = {}
    stack = []
    for i in order:
        last = -1
        while stack and prios[stack[-1]] < prios[i]:
            last = stack.pop()
        rec = [last, -1, -1, prios[i], 1, 0.0, float(sigma[i])]
        if last >= 0:
            recs[last][P] = i
        if stack:
            top = recs[stack[-1]]
            top[R] = i
            rec[P] = stack[-1]
        recs[i] = rec
        stack.append(i)
    root = stack[0] if stack else -1
    # sizes and weight sums, children before parents
    post = []
    todo = [root] if root >= 0 else []
    while todo:
        u = todo.pop()
        post.append(u)
        r = recs[u]
        if r[L] >= 0:
            todo.append(r[L])
        if r[R] >= 0:
            todo.append(r[R])
    for u in reversed(post):
        r = recs[u]
        sz, ws = 1, r[SIG]
        if r[L] >= 0:
            sz += recs[r[L]][SIZE]
            ws += recs[r[L]][WSUM]
        if r[R] >= 0:
            sz += recs[r[R]][SIZE]
            ws += recs[r[R]][WSUM]
        r[SIZE] = sz
        r[WSUM] = ws
    return root, recs


def bottom_up_agg(base, data):
    """Subtree XOR aggregates for every base node, one numpy pass per tree level."""
    n = len(base)
    width = data.shape[1]
    height = [0] * n
    # nodes sorted so children precede parents: process by height
    order = sorted(range(n), key=lambda i: base[i][SIZE])
    for i in order:
        r = base[i]
        h = 0
        if r[L] >= 0:
            h = height[r[L]] + 1
        if r[R] >= 0:
            h = max(h, height[r[R]] + 1)
        height[i] = h
    agg = np.zeros((n + 1, width), dtype=np.uint64)   # row n is the zero row
    if n == 0:
        return agg
    hs = np.asarray(height)
    left = np.asarray([b[L] for b in base])
    right = np.asarray([b[R] for b in base])
    left[left < 0] = n
    right[right < 0] = n
    for h in range(int(hs.max()) + 1):
        idx = np.nonzero(hs == h)[0]
        agg[idx] = data[idx] ^ agg[left[idx]] ^ agg[right[idx]]
    cost.charge(n * max(width, 1), int(hs.max()) + 1)
    return agg


class TreapStore:
    """Treap node storage over a read-only base with a copy-on-write overlay."""

    def __init__(self, base, width=0, base_data=None, base_agg=None, data_rows=0):
        self._base = base            # list of records, never written
        self._ov = {}
        self.width = width
        self._bdata = base_data      # (data_rows, width) array or None
        self._bagg = base_agg        # (len(base)+1, width) array or None
        self._ndata = data_rows
        self._odata = {}
        self._oagg = {}
        self._next = len(base)
        self._zero = np.zeros(width, dtype=np.uint64) if width else None
        self._dirty = set()          # nodes whose xor aggregate is stale
        self.touched = 0             # pulls performed, for cost accounting
        self.recomputed = 0          # width-sized aggregate recomputations

    # -- record access
    def rec(self, i):
        return self._ov.get(i) or self._base[i]

    def own(self, i):
        r = self._ov.get(i)
        if r is None:
            r = list(self._base[i])
            self._ov[i] = r
        return r

    def new_node(self, prio, sigma=0.0):
        i = self._next
        self._next += 1
        self._ov[i] = [-1, -1, -1, prio, 1, float(sigma), float(sigma)]
        if self.width:
            self._oagg[i] = self._zero
        return i

    @property
    def overlay_size(self):
        return len(self._ov)

    def size(self, i):
        return self.rec(i)[SIZE] if i >= 0 else 0

    def wsum(self, i):
        return self.rec(i)[WSUM] if i >= 0 else 0.0

    def sigma(self, i):
        return self.rec(i)[SIG]

    # -- data and aggregates
    def data(self, i):
        x = self._odata.get(i)
        if x is not None:
            return x
        if i < self._ndata:
            return self._bdata[i]
        return self._zero

    def agg(self, i):
        if i < 0:
            return self._zero
        if i in self._dirty:
            self._refresh(i)
        x = self._oagg.get(i)
        if x is not None:
            return x
        return self._bagg[i]

    def _refresh(self, i):
        # recompute stale aggregates below i, children first
        dirty = self._dirty
        stack = [i]
        while stack:
            u = stack[-1]
            r = self.rec(u)
            pend = [c for c in (r[L], r[R]) if c >= 0 and c in dirty]
            if pend:
                stack.extend(pend)
                continue
            stack.pop()
            if u not in dirty:
                continue
            a = self.data(u)
            if r[L] >= 0:
                a = a ^ self.agg(r[L])
            if r[R] >= 0:
                a = a ^ self.agg(r[R])
            self._oagg[u] = a
            dirty.discard(u)
            self.recomputed += 1

    def set_data(self, i, x):
        # sizes and sums are unchanged; only aggregates on the root path go stale
        self._odata[i] = x
        dirty = self._dirty
        while i >= 0:
            dirty.add(i)
            self.touched += 1
            i = self.rec(i)[P]

    def set_sigma(self, i, s):
        r = self.own(i)
        r[SIG] = float(s)
        self._fix_up(i)

    def pull(self, i):
        r = self.own(i)
        l, rt = r[L], r[R]
        sz, ws = 1, r[SIG]
        get, base = self._ov.get, self._base
        if l >= 0:
            lr = get(l) or base[l]
            sz += lr[SIZE]
            ws += lr[WSUM]
        if rt >= 0:
            rr = get(rt) or base[rt]
            sz += rr[SIZE]
            ws += rr[WSUM]
        r[SIZE] = sz
        r[WSUM] = ws
        if self.width:
            self._dirty.add(i)
        self.touched += 1

    def _fix_up(self, i):
        while i >= 0:
            self.pull(i)
            i = self.rec(i)[P]

    def _set_parent(self, c, p):
        if c >= 0 and self.rec(c)[P] != p:
            self.own(c)[P] = p

    # -- navigation
    def root(self, i):
        get, base = self._ov.get, self._base
        while True:
            p = (get(i) or base[i])[P]
            if p < 0:
                return i
            i = p

    def rank(self, i):
        """0-based position of node i within its sequence."""
        r = self.rec(i)
        pos = self.size(r[L])
        p = r[P]
        while p >= 0:
            pr = self.rec(p)
            if pr[R] == i:
                pos += self.size(pr[L]) + 1
            i = p
            p = pr[P]
        return pos

    def prefix_weight(self, i):
        """Sum of sigma strictly before node i in its sequence."""
        r = self.rec(i)
        acc = self.wsum(r[L])
        p = r[P]
        while p >= 0:
            pr = self.rec(p)
            if pr[R] == i:
                acc += self.wsum(pr[L]) + pr[SIG]
            i = p
            p = pr[P]
        return acc

    def first(self, t):
        while True:
            l = self.rec(t)[L]
            if l < 0:
                return t
            t = l

    def successor(self, i):
        """Next node in sequence order, or -1 at the end."""
        r = self.rec(i)
        if r[R] >= 0:
            return self.first(r[R])
        p = r[P]
        while p >= 0 and self.rec(p)[R] == i:
            i = p
            p = self.rec(i)[P]
        return p

    def nth(self, t, k):
        while True:
            r = self.rec(t)
            ls = self.size(r[L])
            if k < ls:
                t = r[L]
            elif k == ls:
                return t
            else:
                k -= ls + 1
                t = r[R]

    def find_weight(self, t, target):
        """First node whose inclusive prefix weight reaches target, or -1."""
        if self.wsum(t) < target:
            return -1
        base = 0.0
        while t >= 0:
            r = self.rec(t)
            l = r[L]
            lw = self.wsum(l)
            if l >= 0 and base + lw >= target:
                t = l
                continue
            if base + lw + r[SIG] >= target:
                return t
            base += lw + r[SIG]
            t = r[R]
        return -1

    def inorder(self, t):
        out = []
        stack = []
        while stack or t >= 0:
            while t >= 0:
                stack.append(t)
                t = self.rec(t)[L]
            t = stack.pop()
            out.append(t)
            t = self.rec(t)[R]
        return out

    def range_query(self, t, lo, hi):
        """(xor aggregate, weight sum) over positions lo..hi inclusive of tree t."""
        agg = self._zero
        ws = 0.0
        # iterative descent keeping the node span [off, off + size)
        stack = [(t, 0)]
        while stack:
            u, off = stack.pop()
            if u < 0:
                continue
            r = self.rec(u)
            sz = r[SIZE]
            if hi < off or lo >= off + sz:
                continue
            if lo <= off and off + sz - 1 <= hi:
                ws += r[WSUM]
                if self.width:
                    agg = agg ^ self.agg(u)
                continue
            ls = self.size(r[L])
            mid = off + ls
            if lo <= mid <= hi:
                ws += r[SIG]
                if self.width:
                    agg = agg ^ self.data(u)
            stack.append((r[L], off))
            stack.append((r[R], mid + 1))
        return agg, ws

    # -- split / merge
    def split(self, t, k):
        """Split tree t into (first k nodes, rest).  Roots get parent -1."""
        a, b = self._split(t, k)
        self._set_parent(a, -1)
        self._set_parent(b, -1)
        return a, b

    def _split(self, t, k):
        if t < 0:
            return -1, -1
        r = self.rec(t)
        ls = self.size(r[L])
        if k <= ls:
            a, b = self._split(r[L], k)
            self.own(t)[L] = b
            self._set_parent(b, t)
            self.pull(t)
            return a, t
        a, b = self._split(r[R], k - ls - 1)
        self.own(t)[R] = a
        self._set_parent(a, t)
        self.pull(t)
        return t, b

    def merge(self, a, b):
        t = self._merge(a, b)
        self._set_parent(t, -1)
        return t

    def _merge(self, a, b):
        if a < 0:
            return b
        if b < 0:
            return a
        if self.rec(a)[PRIO] > self.rec(b)[PRIO]:
            c = self._merge(self.rec(a)[R], b)
            self.own(a)[R] = c
            self._set_parent(c, a)
            self.pull(a)
            return a
        c = self._merge(a, self.rec(b)[L])
        self.own(b)[L] = c
        self._set_parent(c, b)
        self.pull(b)
        return b


class IntervalSequence:
    """Circular list of (x_i, sigma_i) with XOR aggregates over intervals.

    Elements are addressed by their index 0..n-1 at init time; an interval
    [s, e] runs from element s forward (wrapping) to element e.
    """

    def __init__(self, data, sigma, seed=0):
        self.it_init(data, sigma, seed)

    def it_init(self, data, sigma, seed=0):
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.ndim == 1:
            data = data[:, None]
        n = data.shape[0]
        if len(sigma) != n:
            raise ValueError("data and sigma lengths differ")
        for s in sigma:
            if s < 0:
                raise ValueError("negative weight")
        rng = np.random.default_rng(seed)
        prios = rng.random(n).tolist()
        root, recs = build_treap(list(range(n)), prios, sigma)
        base = [recs[i] for i in range(n)]
        agg = bottom_up_agg(base, data)
        self.n = n
        self._store = TreapStore(base, data.shape[1], data, agg, data_rows=n)
        self._root = root

    def __len__(self):
        return self.n

    def it_update(self, batch):
        """batch: iterable of (index, new_data) or (index, new_data, new_sigma)."""
        st = self._store
        for item in batch:
            j, x = item[0], item[1]
            if x is not None:
                x = np.asarray(x, dtype=np.uint64).reshape(st.width)
                st.set_data(j, x)
            if len(item) > 2 and item[2] is not None:
                if item[2] < 0:
                    raise ValueError("negative weight")
                st.set_sigma(j, item[2])
        cost.charge(len(batch) * max(st.width, 1))

    def _span(self, s, e):
        st = self._store
        rs, re_ = st.rank(s), st.rank(e)
        if rs <= re_:
            return [(rs, re_)]
        return [(rs, self.n - 1), (0, re_)]

    def it_agg(self, intervals):
        st = self._store
        out = []
        for s, e in intervals:
            acc = st._zero
            for lo, hi in self._span(s, e):
                a, _ = st.range_query(self._root, lo, hi)
                acc = acc ^ a
            out.append(acc.copy())
        cost.charge(len(out) * max(st.width, 1))
        return out

    def it_sum(self, intervals):
        st = self._store
        out = []
        for s, e in intervals:
            tot = 0.0
            for lo, hi in self._span(s, e):
                _, w = st.range_query(self._root, lo, hi)
                tot += w
            out.append(tot)
        cost.charge(len(out))
        return out

    def it_search(self, b, theta):
        """First element e reached from b (wrapping) with sum over [b, e] >= theta."""
        cost.charge(1)
        return circular_search(self._store, self._root, b, theta)


def circular_search(st, root, b, theta):
    """First node e at or after b (cyclically) with weight sum over [b, e] >= theta."""
    if theta <= 0:
        return b
    total = st.wsum(root)
    if theta > total:
        raise ThresholdUnreachable("threshold unreachable")
    target = st.prefix_weight(b) + theta
    if target > total:
        target -= total
    e = st.find_weight(root, target)
    if e < 0:
        raise ThresholdUnreachable("threshold unreachable")
    return e
