"""Suffix structures: suffix automaton, suffix array, LCP array and a
sparse-table range-minimum structure."""

import numpy as np


class SuffixAutomaton:
    """Suffix automaton of a symbol sequence.

    Each state is a right-extension class of substrings; ``count[v]`` is the
    number of occurrences (end positions) shared by the strings of state v.
    """

    def __init__(self, seq):
        nxt = [{}]
        link = [-1]
        length = [0]
        count = [0]
        last = 0
        for c in seq:
            cur = len(nxt)
            nxt.append({})
            length.append(length[last] + 1)
            link.append(-1)
            count.append(1)
            p = last
            while p != -1 and c not in nxt[p]:
                nxt[p][c] = cur
                p = link[p]
            if p == -1:
                link[cur] = 0
            else:
                q = nxt[p][c]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = len(nxt)
                    nxt.append(dict(nxt[q]))
                    length.append(length[p] + 1)
                    link.append(link[q])
                    count.append(0)
                    while p != -1 and nxt[p].get(c) == q:
                        nxt[p][c] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur
        for v in sorted(range(1, len(nxt)), key=length.__getitem__, reverse=True):
            count[link[v]] += count[v]
        self.next = nxt
        self.link = link
        self.length = length
        self.count = count

    def find(self, pattern):
        """State of ``pattern`` or -1 if it does not occur."""
        v = 0
        for c in pattern:
            v = self.next[v].get(c, -1)
            if v < 0:
                return -1
        return v

    def occurrences(self, pattern):
        v = self.find(pattern)
        return 0 if v < 0 else (self.count[v] if pattern else self.count[0])


def suffix_array(seq):
    """Suffix array by prefix doubling (0-based start positions)."""
    n = len(seq)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.asarray(seq, dtype=np.int64)
    _, rank = np.unique(rank, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[:n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1, r2 = rank[order], second[order]
        new = np.empty(n, dtype=np.int64)
        new[order] = np.concatenate(([0], np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]))))
        rank = new
        if rank.max() == n - 1 or k >= n:
            return order.astype(np.int64)
        k *= 2


def lcp_array(seq, sa):
    """Kasai LCP: lcp[i] = LCP of suffixes sa[i-1] and sa[i]; lcp[0] = 0."""
    n = len(seq)
    rank = [0] * n
    sa_list = sa.tolist()
    for i, s in enumerate(sa_list):
        rank[s] = i
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa_list[r - 1]
            while i + h < n and j + h < n and seq[i + h] == seq[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp, rank


class SparseMin:
    """Range minimum over a fixed integer array, O(1) per query."""

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.int64)
        self.levels = [arr]
        k = 1
        while 2 * k <= len(arr):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-k], prev[k:]))
            k *= 2
        self.tables = [lv.tolist() for lv in self.levels]

    def query(self, lo, hi):
        """Minimum over values[lo..hi] inclusive."""
        k = (hi - lo + 1).bit_length() - 1
        t = self.tables[k]
        a, b = t[lo], t[hi - (1 << k) + 1]
        return a if a < b else b


class SuffixIndex:
    """Suffix array of a sequence with constant-time LCP between suffixes."""

    def __init__(self, seq):
        self.seq = seq
        self.n = len(seq)
        self.sa = suffix_array(seq)
        self.lcp, self.rank = lcp_array(seq, self.sa)
        self.rmq = SparseMin(self.lcp) if self.n else None

    def lcp_of(self, a, b):
        """LCP of suffixes starting at 0-based positions a and b."""
        if a == b:
            return self.n - a
        if a >= self.n or b >= self.n:
            return 0
        ra, rb = self.rank[a], self.rank[b]
        if ra > rb:
            ra, rb = rb, ra
        return self.rmq.query(ra + 1, rb)
