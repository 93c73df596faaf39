"""Compacted tries over a sorted string multiset whose characters are
fetched on demand. Nodes carry their leaf-rank range and string depth;
positions inside edges are (node, depth) pairs."""

from .suffix import SparseMin

TERMINATOR = -1


def two_fattest(a, b):
    """The number in (a, b] with the most trailing zero bits (0 <= a < b)."""
    h = (a ^ b).bit_length() - 1
    return (b >> h) << h


class PatriciaTree:
    """Patricia tree over ``count`` sorted strings.

    Parameters
    ----------
    lengths : list of int
        String length per rank (sorted order).
    adjacent_lcp : list of int
        adjacent_lcp[i] = LCP of strings i-1 and i (entry 0 unused).
    char_at : callable(rank, offset) -> int
        Build-time character access.
    extract : callable(rank, offset, length) -> list
        Query-time character access.
    """

    def __init__(self, lengths, adjacent_lcp, char_at, extract):
        self.lengths = lengths
        self.extract = extract
        depth = [0]
        lo = [0]
        hi = [-1]
        parent = [-1]
        children = [{}]
        rep = [0]
        leaf_of_rank = [0] * len(lengths)

        def key(rank, d):
            return TERMINATOR if d >= lengths[rank] else char_at(rank, d)

        stack = [0]
        prev_leaf = -1
        for rank, ln in enumerate(lengths):
            h = adjacent_lcp[rank] if rank else 0
            if prev_leaf >= 0 and h >= ln and h >= lengths[rank - 1]:
                # equal to the previous string: widen its leaf
                hi[prev_leaf] = rank
                leaf_of_rank[rank] = prev_leaf
                continue
            last = -1
            while depth[stack[-1]] > h:
                last = stack.pop()
            top = stack[-1]
            if depth[top] < h:
                mid = len(depth)
                depth.append(h)
                lo.append(0)
                hi.append(-1)
                parent.append(top)
                rep.append(rep[last])
                kt = key(rep[last], depth[top])
                children[top][kt] = mid
                children.append({key(rep[last], h): last})
                parent[last] = mid
                stack.append(mid)
                top = mid
            leaf = len(depth)
            depth.append(ln + 1)
            lo.append(rank)
            hi.append(rank)
            parent.append(top)
            rep.append(rank)
            children.append({})
            children[top][key(rank, depth[top])] = leaf
            stack.append(leaf)
            leaf_of_rank[rank] = leaf
            prev_leaf = leaf
        self.depth = depth
        self.parent = parent
        self.children = children
        self.rep = rep
        self.leaf_of_rank = leaf_of_rank
        self.lo = lo
        self.hi = hi
        self._finish()

    def __len__(self):
        return len(self.depth)

    def _finish(self):
        nodes = len(self.depth)
        lo, hi, children, depth = self.lo, self.hi, self.children, self.depth
        euler = []
        first = [0] * nodes
        order = []
        stack = [(0, iter(children[0].values()))]
        first[0] = 0
        euler.append(0)
        order.append(0)
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                if stack:
                    euler.append(stack[-1][0])
                continue
            first[w] = len(euler)
            euler.append(w)
            order.append(w)
            stack.append((w, iter(children[w].values())))
        for v in reversed(order):
            if children[v]:
                kids = list(children[v].values())
                lo[v] = lo[kids[0]]
                hi[v] = hi[kids[-1]]
        self.euler = euler
        self.first = first
        self._euler_depth = SparseMin([depth[v] * nodes + v for v in euler])
        self._nodes = nodes
        # binary lifting table for weighted ancestors
        up = [self.parent[:]]
        up[0][0] = 0
        k = 1
        while (1 << k) < nodes:
            prev = up[-1]
            up.append([prev[prev[v]] for v in range(nodes)])
            k += 1
        self.up = up
        self.handles = None

    # -- navigation ----------------------------------------------------

    @property
    def root(self):
        return 0

    def string_length(self, v):
        """Length of the node's string (leaves drop the terminator)."""
        d = self.depth[v]
        return d - 1 if not self.children[v] else d

    def lca(self, u, v):
        if u == v:
            return u
        a, b = self.first[u], self.first[v]
        if a > b:
            a, b = b, a
        return self._euler_depth.query(a, b) % self._nodes

    def is_descendant(self, v, anc):
        return self.lo[anc] <= self.lo[v] and self.hi[v] <= self.hi[anc]

    def weighted_ancestor(self, v, d):
        """Highest ancestor of v with depth >= d, as a (node, d) pair."""
        depth = self.depth
        if d <= 0:
            return (0, 0)
        if depth[v] < d:
            raise ValueError("target depth exceeds node depth")
        for level in range(len(self.up) - 1, -1, -1):
            w = self.up[level][v]
            if depth[w] >= d:
                v = w
        return (v, d)

    def parent_of(self, locus):
        """Parent of a possibly virtual node: the explicit parent node."""
        v, _ = locus
        p = self.parent[v]
        if p < 0:
            return (0, 0)
        return (p, self.depth[p])

    def range_of(self, locus):
        v = locus[0]
        return self.lo[v], self.hi[v]

    def child(self, locus, c):
        """Locus one character deeper along c, or None."""
        v, d = locus
        if d < self.depth[v]:
            if d >= self.string_length(v):
                return None
            if self.extract(self.rep[v], d, 1)[0] != c:
                return None
            return (v, d + 1)
        w = self.children[v].get(c)
        if w is None:
            return None
        return (w, d + 1)

    # -- searches ------------------------------------------------------

    def _match(self, v, query, qlen):
        """LCP of the query with node v's string, by chunked extraction."""
        limit = min(qlen, self.string_length(v))
        rep = self.rep[v]
        done = 0
        chunk = 16
        while done < limit:
            take = min(chunk, limit - done)
            got = self.extract(rep, done, take)
            for t in range(take):
                if got[t] != query(done + t):
                    return done + t
            done += take
            chunk *= 2
        return limit

    def locate(self, query, qlen):
        """Deepest locus whose string is a prefix of the query; ``query(d)``
        returns character d. Blind descent then one verification."""
        v = 0
        children, depth = self.children, self.depth
        while depth[v] < qlen:
            w = children[v].get(query(depth[v]))
            if w is None:
                break
            v = w
        if v == 0:
            return (0, 0)
        ln = self._match(v, query, qlen)
        return self.weighted_ancestor(v, ln)

    # -- fingerprint-guided batched search ------------------------------

    def build_handles(self, kr, sig_of):
        """Map (handle length, fingerprint) -> node, where the handle is the
        prefix of the node's string whose length is the 2-fattest number in
        (parent depth, depth]. ``sig_of(rank, length)`` fingerprints a prefix."""
        handles = {}
        for v in range(1, self._nodes):
            f = two_fattest(self.depth[self.parent[v]], self.depth[v])
            if f > self.string_length(v):
                continue
            handles[(f, sig_of(self.rep[v], f))] = v
        self.handles = handles
        self.kr = kr

    def _exit_node(self, table, s, length, chars):
        handles = self.handles
        depth = self.depth
        mod = self.kr.mod
        pows = self.kr._pows
        base_sig = table[s]
        a, b = 0, length
        v = 0
        while a < b:
            h = (a ^ b).bit_length() - 1
            f = (b >> h) << h
            w = handles.get((f, (table[s + f] - base_sig * pows[f]) % mod))
            if w is not None:
                v = w
                a = depth[w]
            else:
                b = f - 1
        if depth[v] < length:
            v = self.children[v].get(chars[s + depth[v]], -1)
        return v

    def deepest_prefixes(self, chars, node_sig, stats=None):
        """For every suffix chars[s:], the deepest locus that prefixes it.

        Suffixes are resolved together by binary search on the end of the
        match; each probe is answered by a fingerprint-guided descent, a
        descendance check and a fingerprint comparison, and per probe group
        only the longest accepted suffix is confirmed by extraction.
        ``node_sig(rank, length)`` fingerprints a stored prefix.
        """
        m = len(chars)
        kr = self.kr
        table = kr.prefix_table(chars)
        kr.ensure_powers(m)
        node = [0] * m
        known = list(range(m))  # verified match end per suffix
        groups = [(0, m, list(range(m)))]
        while groups:
            a, b, members = groups.pop()
            if a >= b:
                continue
            c = (a + b + 1) // 2
            yes, no = [], []
            accepted = []
            for s in members:
                if s >= c:
                    yes.append(s)
                    continue
                v = self._exit_node(table, s, c - s, chars)
                kv = node[s]
                if (v < 0 or self.string_length(v) < c - s
                        or not self.is_descendant(v, kv)
                        or node_sig(self.rep[v], c - s) != kr.substring(table, s, c)):
                    no.append(s)
                else:
                    accepted.append((s, v))
            if accepted:
                accepted.sort()
                ok = self._confirm(accepted, known, c, chars)
                for s, v in accepted:
                    if ok is None or s in ok:
                        node[s] = v
                        known[s] = c
                        yes.append(s)
                    else:
                        no.append(s)
            groups.append((c, b, yes))
            groups.append((a, c - 1, no))
        out = []
        for s in range(m):
            loc = (node[s], known[s] - s) if known[s] > s else (0, 0)
            e = known[s]
            if e < m and self.child(loc, chars[e]) is not None:
                # a fingerprint collision hid a longer match
                if stats is not None:
                    stats["fallbacks"] = stats.get("fallbacks", 0) + 1
                loc = self.locate(lambda d, s=s: chars[s + d], m - s)
            out.append(loc)
        return out

    def _confirm(self, accepted, known, c, chars):
        """Extract the new characters of the longest accepted suffix; on
        success every shorter accepted suffix is a substring of it and is
        taken as confirmed (returns None). Otherwise confirm each one."""
        s, v = accepted[0]
        k = known[s]
        if self.extract(self.rep[v], k - s, c - k) == chars[k:c]:
            return None
        ok = set()
        for s, v in accepted[1:]:
            k = known[s]
            if self.extract(self.rep[v], k - s, c - k) == chars[k:c]:
                ok.add(s)
        return ok
