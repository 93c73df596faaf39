"""Maximal exact matches of a pattern against an indexed text: the
active-position scan over every cut, its cut-set-restricted variant for
locally consistent grammars, k-MEMs, MUMs, k-rare MEMs, matching statistics
and intersections over text collections."""

import heapq
from typing import NamedTuple

from .grammar import as_symbols
from .suffix import SuffixAutomaton


class MemRecord(NamedTuple):
    i: int
    j: int
    p: int


class _Query:
    """Per-pattern state shared by the scans: for each position r, the
    deepest P_X locus prefixing (P[..r])^rev and the deepest P_Y locus
    prefixing P[r+1..]."""

    def __init__(self, index, P, batched=False, stats=None):
        self.index = index
        self.P = P
        self.m = m = len(P)
        xt, yt = index.xtree, index.ytree
        self.xt, self.yt = xt, yt
        self.grid = index.grid
        self.stats = stats if stats is not None else {}
        vx = [(0, 0)] * (m + 1)
        vy = [(0, 0)] * (m + 1)
        if batched and m:
            rev = P[::-1]
            locs = xt.deepest_prefixes(rev, index.x_sig, self.stats)
            for s, loc in enumerate(locs):
                vx[m - s] = loc
            locs = yt.deepest_prefixes(P, index.y_sig, self.stats)
            for s, loc in enumerate(locs):
                vy[s] = loc
        else:
            for r in range(1, m + 1):
                vx[r] = xt.locate(lambda d, r=r: P[r - 1 - d], r)
            for r in range(m):
                vy[r] = yt.locate(lambda d, r=r: P[r + d], m - r)
        self.vx, self.vy = vx, vy

    def _x_node(self, i, r):
        node, d = self.vx[r]
        want = r - i + 1
        if d < want:
            return -1
        return self.xt.weighted_ancestor(node, want)[0] if want else 0

    def _y_node(self, r, j):
        node, d = self.vy[r]
        want = j - r
        if d < want:
            return -1
        return self.yt.weighted_ancestor(node, want)[0] if want else 0

    def rect(self, i, r, j):
        """Grid rectangle of cut r (P[r] ends the left half) for window
        [i..j] if some point lies in it, else None."""
        xn = self._x_node(i, r)
        if xn < 0:
            return None
        yn = self._y_node(r, j)
        if yn < 0:
            return None
        xt, yt = self.xt, self.yt
        box = (xt.lo[xn], xt.hi[xn], yt.lo[yn], yt.hi[yn])
        return box if self.grid.nonempty(*box) else None

    def occurs_char(self, q):
        return self.index.char_count.get(self.P[q - 1], 0)

    def position(self, i, j, cuts):
        """Text end position of one occurrence of P[i..j]."""
        if i == j:
            return self.index._char_occurrences(self.P[i - 1], 1)[0]
        for r in cuts:
            box = self.rect(i, r, j)
            if box is not None:
                col = self.grid.any_point(*box)
                return self.index.pt_p[col] + (j - r)
        raise AssertionError("window without an occurrence")

    def count(self, i, j, limit, cuts=None):
        """Occurrences of P[i..j] in the text, exact up to ``limit``."""
        if i == j:
            return min(self.occurs_char(i), limit)
        if cuts is None:
            cuts = range(i, j)
        total = 0
        idx = self.index
        for r in cuts:
            if r >= j:
                continue
            box = self.rect(i, r, j)
            if box is None:
                continue
            for col in self.grid.report(*box):
                total += len(idx.occurrences_from(col, r - i + 1, j - i + 1, limit - total))
                if total >= limit:
                    return total
        return total

    def expand_left(self, i, j, cuts):
        """Smallest l > i such that P[l..j] occurs, using range expansion
        on the given cuts of the failed window [i..j]; j+1 if none."""
        best = j if self.occurs_char(j) else j + 1
        xt, yt, idx = self.xt, self.yt, self.index
        for r in cuts:
            if r >= j:
                continue
            yn = self._y_node(r, j)
            if yn < 0:
                continue
            node, d = self.vx[r]
            want = min(d, r - i + 1)
            xl = xt.weighted_ancestor(node, want) if want else (0, 0)
            e = idx.range_expand(xl, yt.lo[yn], yt.hi[yn])
            cand = r - e[1] + 1
            if cand < best:
                best = cand
        return max(best, i + 1)


def _scan_quadratic(index, P, k, trace=None):
    """Sliding window over all cuts; ``k`` is the occurrence threshold.
    ``trace`` collects the window (i, j) after every step."""
    q = _Query(index, P)
    m = q.m
    out = []
    i, j = 1, 0
    active = []
    while j < m:
        if j >= i:
            cand = [r for r in active + [j] if q.rect(i, r, j + 1) is not None]
            if k == 1:
                ok = bool(cand)
            else:
                ok = q.count(i, j + 1, k, cand) >= k
        else:
            cand = []
            ok = q.occurs_char(j + 1) >= k
        if ok:
            j += 1
            active = cand
            if trace is not None:
                trace.append((i, j))
            continue
        if j >= i:
            out.append(MemRecord(i, j, q.position(i, j, active)))
            l = q.expand_left(i, j + 1, range(i, j + 1))
        else:
            l = j + 2
        j += 1
        while l <= j and k > 1 and q.count(l, j, k) < k:
            l += 1
        i = l
        active = [r for r in range(i, j) if q.rect(i, r, j) is not None]
        if trace is not None:
            trace.append((i, j))
    if j >= i:
        out.append(MemRecord(i, j, q.position(i, j, active)))
    return out


def _scan_lcg(index, P, k, stats, trace=None):
    """Sliding window whose candidate cuts are restricted to the cut set of
    the pattern parse plus the window end."""
    from .lcg import PatternLevels
    if index.levels is None:
        raise ValueError("index was not built from a locally consistent grammar")
    q = _Query(index, P, batched=True, stats=stats)
    pl = PatternLevels(index.levels, P)
    m = q.m
    out = []
    i, j = 1, 0
    active = []
    max_r = max_m = 0

    def cuts_of(a, b):
        return pl.cut_set_scratch(a, b) + [b]

    def occurs(a, b):
        if a > b:
            return True
        if a == b:
            return q.occurs_char(a) > 0
        return any(q.rect(a, r, b) is not None for r in cuts_of(a, b))

    def count(a, b, limit):
        if a == b:
            return min(q.occurs_char(a), limit)
        return q.count(a, b, limit, pl.cut_set_scratch(a, b))

    while j < m:
        pl.advance_window("j")
        if j >= i:
            cuts = pl.cut_set()
            max_m = max(max_m, len(cuts))
            cuts.append(j + 1)
            cand = [r for r in cuts if q.rect(i, r, j + 1) is not None]
            if k == 1:
                ok = bool(cand)
            else:
                ok = q.count(i, j + 1, k, cuts) >= k
        else:
            cuts = cand = []
            ok = q.occurs_char(j + 1) >= k
        if ok:
            j += 1
            active = cand
            max_r = max(max_r, len(active))
            if trace is not None:
                trace.append((i, j))
            continue
        if j >= i:
            out.append(MemRecord(i, j, q.position(i, j, active)))
            upper = q.expand_left(i, j + 1, cuts)
            lo, hi = i + 1, upper
            while lo < hi:
                mid = (lo + hi) // 2
                if occurs(mid, j + 1):
                    hi = mid
                else:
                    lo = mid + 1
            l = lo
        else:
            l = j + 2
        j += 1
        while l <= j and k > 1 and count(l, j, k) < k:
            l += 1
        while pl.i < l:
            pl.advance_window("i")
        i = l
        if i < j:
            cuts = pl.cut_set() + [j]
            active = [r for r in cuts if q.rect(i, r, j) is not None]
        else:
            active = []
        max_r = max(max_r, len(active))
        if trace is not None:
            trace.append((i, j))
    if j >= i:
        out.append(MemRecord(i, j, q.position(i, j, active)))
    if stats is not None:
        stats["max_R"] = max(stats.get("max_R", 0), max_r)
        stats["max_M"] = max(stats.get("max_M", 0), max_m)
        stats["moves"] = stats.get("moves", 0) + pl.moves
    return out


def _chunked(index, P, run):
    """Split patterns much longer than the text into overlapping slabs; a
    MEM is never longer than the text, so each lies inside some slab."""
    n, m = index.n, len(P)
    if m <= 2 * n + 2:
        return run(P)
    seen = {}
    start = 0
    while start < m:
        end = min(m, start + 2 * n + 2)
        for rec in run(P[start:end]):
            if (rec.i == 1 and start > 0) or (rec.j == end - start and end < m):
                continue
            key = (rec.i + start, rec.j + start)
            if key not in seen:
                seen[key] = MemRecord(key[0], key[1], rec.p)
        if end == m:
            break
        start += n
    return [seen[key] for key in sorted(seen)]


def find_mems_quadratic(index, P):
    P = as_symbols(P)
    if not P:
        return []
    return _chunked(index, P, lambda S: _scan_quadratic(index, S, 1))


def find_mems_lcg(index, P, stats=None):
    P = as_symbols(P)
    if not P:
        return []
    return _chunked(index, P, lambda S: _scan_lcg(index, S, 1, stats))


def find_mems(index, P, algo=None):
    if algo is None:
        algo = "lcg" if index.levels is not None else "quadratic"
    if algo == "lcg":
        return find_mems_lcg(index, P)
    if algo == "quadratic":
        return find_mems_quadratic(index, P)
    raise ValueError(f"unknown algorithm {algo!r}")


def find_kmems(index, P, k, algo=None):
    """Maximal substrings of P occurring at least k times in the text."""
    if k < 1:
        raise ValueError("k must be at least 1")
    P = as_symbols(P)
    if not P:
        return []
    if algo is None:
        algo = "lcg" if index.levels is not None else "quadratic"
    if algo == "lcg":
        return _chunked(index, P, lambda S: _scan_lcg(index, S, k, None))
    if algo == "quadratic":
        return _chunked(index, P, lambda S: _scan_quadratic(index, S, k))
    raise ValueError(f"unknown algorithm {algo!r}")


def count_bounded(index, P, i=1, j=None, bound=1):
    """Occurrences of P[i..j] in the text, exact when at most ``bound``;
    otherwise bound + 1 stands for "more than bound"."""
    P = as_symbols(P)
    if j is None:
        j = len(P)
    if i > j:
        raise ValueError("empty window")
    return _Query(index, P[i - 1:j]).count(1, j - i + 1, bound + 1)


def _p_counts(P, mems):
    """Occurrence count of each MEM inside P, by walking the window through
    a suffix automaton of P in step with the reports."""
    sam = SuffixAutomaton(P)
    nxt, link, length, cnt = sam.next, sam.link, sam.length, sam.count
    out = []
    v, lo, hi = 0, 1, 0  # state of P[lo..hi]
    for rec in mems:
        while hi < rec.j:
            v = nxt[v][P[hi]]
            hi += 1
        while lo < rec.i:
            lo += 1
            if hi - lo + 1 <= length[link[v]]:
                v = link[v]
        out.append(cnt[v])
    return out


def find_krare(index, P, k, algo=None):
    """MEMs occurring at most k times in the text and at most k times in P."""
    if k < 1:
        raise ValueError("k must be at least 1")
    P = as_symbols(P)
    mems = find_mems(index, P, algo)
    if not mems:
        return []
    in_p = _p_counts(P, mems)
    q = None
    out = []
    for rec, cp in zip(mems, in_p):
        if cp > k:
            continue
        if q is None:
            q, cuts_of = _counting_query(index, P)
        if q.count(rec.i, rec.j, k + 1, cuts_of(rec.i, rec.j)) <= k:
            out.append(rec)
    return out


def _counting_query(index, P):
    """A query over all of P and a function giving the cuts that cover
    every occurrence of a window."""
    if index.levels is None:
        return _Query(index, P), lambda i, j: None
    from .lcg import PatternLevels
    pl = PatternLevels(index.levels, P)
    return _Query(index, P, batched=True), pl.cut_set_scratch


def find_mums(index, P, algo=None):
    return find_krare(index, P, 1, algo)


def matching_statistics(mems, m):
    """Per-position longest match lengths and 1-based text start positions
    (0 where nothing matches) from a sorted MEM list."""
    _check_sorted(mems, m)
    lengths = [0] * m
    starts = [0] * m
    for t, rec in enumerate(mems):
        i, j = rec[0], rec[1]
        p = rec[2] if len(rec) > 2 else 0
        stop = j if t + 1 == len(mems) else min(j, mems[t + 1][0] - 1)
        begin = p - (j - i) if p else 0
        for q in range(i, stop + 1):
            lengths[q - 1] = j - q + 1
            starts[q - 1] = begin + (q - i) if p else 0
    return lengths, starts


def mems_from_ms(lengths, starts=None):
    """MEM list recovered from matching statistics."""
    out = []
    prev = 0
    for q, ln in enumerate(lengths, 1):
        if ln < 0:
            raise ValueError("negative match length")
        if ln > 0 and (q == 1 or ln >= prev):
            p = starts[q - 1] + ln - 1 if starts and starts[q - 1] else 0
            out.append(MemRecord(q, q + ln - 1, p))
        if q > 1 and prev > 0 and ln < prev - 1:
            raise ValueError("match length dropped by more than one")
        prev = ln
    return out


def _check_sorted(mems, m):
    pi = pj = 0
    for rec in mems:
        i, j = rec[0], rec[1]
        if not (1 <= i <= j <= m):
            raise ValueError(f"record ({i}, {j}) outside 1..{m}")
        if i <= pi or j <= pj:
            raise ValueError("records not strictly increasing in i and j")
        pi, pj = i, j


def collection_mems(lists):
    """Maximal segments lying inside one segment of every list."""
    if not lists:
        return []
    if len(lists) == 1:
        return [MemRecord(*_triple(r)) for r in lists[0]]
    if any(not lst for lst in lists):
        return []
    cur = [0] * len(lists)
    heap = [(lst[0][1], t) for t, lst in enumerate(lists)]
    heapq.heapify(heap)
    starts = [lst[0][0] for lst in lists]
    reports = []
    while len(heap) == len(lists):
        j = heap[0][0]
        i = max(starts)
        if i <= j:
            seg = _triple(lists[0][cur[0]])
            reports.append(MemRecord(i, j, seg[2] - (seg[1] - j) if seg[2] else 0))
        while heap and heap[0][0] == j:
            _, t = heapq.heappop(heap)
            cur[t] += 1
            if cur[t] < len(lists[t]):
                rec = lists[t][cur[t]]
                starts[t] = rec[0]
                heapq.heappush(heap, (rec[1], t))
    out = []
    for a, b in zip(reports, reports[1:] + [None]):
        if b is not None and b.i <= a.i and a.j <= b.j:
            continue
        out.append(a)
    return out


def _triple(rec):
    return (rec[0], rec[1], rec[2] if len(rec) > 2 else 0)


def collection_krare(indexes, P, k):
    """Collection MEMs whose occurrence count is at most k in P and in
    every text of the collection."""
    P = as_symbols(P)
    segs = collection_mems([find_mems(ix, P) for ix in indexes])
    if not segs:
        return []
    in_p = _p_counts(P, segs)
    return [rec for rec, cp in zip(segs, in_p)
            if cp <= k and all(count_bounded(ix, P, rec.i, rec.j, k) <= k for ix in indexes)]


def collection_mums(indexes, P):
    return collection_krare(indexes, P, 1)
