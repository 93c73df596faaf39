"""Brute-force reference answers for every query, plus the suffix-structure
MEM walk. Texts and patterns are normalized to code-point strings so that
symbols above 255 (separators) are searchable."""

from .grammar import as_symbols
from .mem import MemRecord
from .suffix import SuffixAutomaton


def _s(seq):
    return "".join(map(chr, as_symbols(seq)))


def _count(text, pat, limit=None):
    """Overlapping occurrence count of pat in text, stopping at limit."""
    c = 0
    pos = text.find(pat)
    while pos >= 0:
        c += 1
        if limit is not None and c >= limit:
            break
        pos = text.find(pat, pos + 1)
    return c


def naive_locate(text, P):
    t, p = _s(text), _s(P)
    if not p:
        return []
    out = []
    pos = t.find(p)
    while pos >= 0:
        out.append(pos + 1)
        pos = t.find(p, pos + 1)
    return out


def naive_count(text, P, limit=None):
    return _count(_s(text), _s(P), limit)


def _longest_from(t, p, i, k=1):
    """Largest j (exclusive) with p[i:j] occurring at least k times in t."""
    j = i
    while j < len(p) and _count(t, p[i:j + 1], k) >= k:
        j += 1
    return j


def naive_ms(text, P):
    """Matching statistics: per 1-based position q, the longest prefix of
    P[q..] occurring in the text."""
    t, p = _s(text), _s(P)
    return [_longest_from(t, p, i) - i for i in range(len(p))]


def _end_pos(t, p):
    return t.find(p) + len(p)


def naive_kmems(text, P, k):
    """Maximal substrings of P occurring at least k times in the text."""
    t, p = _s(text), _s(P)
    out = []
    for i in range(len(p)):
        j = _longest_from(t, p, i, k)
        if j == i:
            continue
        if i > 0 and _count(t, p[i - 1:j], k) >= k:
            continue
        out.append(MemRecord(i + 1, j, _end_pos(t, p[i:j])))
    return out


def naive_mems(text, P):
    return naive_kmems(text, P, 1)


def naive_krare(text, P, k):
    """MEMs occurring at most k times in the text and at most k in P."""
    t, p = _s(text), _s(P)
    out = []
    for rec in naive_mems(text, P):
        w = p[rec.i - 1:rec.j]
        if _count(t, w, k + 1) <= k and _count(p, w, k + 1) <= k:
            out.append(rec)
    return out


def naive_mums(text, P):
    return naive_krare(text, P, 1)


def stree_mems(text, P, trace=None):
    """MEMs by the scan/extend/report/shorten walk over a suffix automaton of
    the text. A state plus a length stands for a suffix-tree locus; the
    suffix link drops the first character. ``trace`` collects (i, j)."""
    t = as_symbols(text)
    p = as_symbols(P)
    sam = SuffixAutomaton(t)
    nxt, link, slen = sam.next, sam.link, sam.length
    m = len(p)
    out = []
    i, j = 1, 0
    v, depth = 0, 0
    while j < m:
        c = p[j]
        if c in nxt[v]:
            v = nxt[v][c]
            depth += 1
            j += 1
        else:
            if depth > 0:
                out.append((i, j))
            while depth > 0 and c not in nxt[v]:
                i += 1
                depth -= 1
                if depth <= slen[link[v]]:
                    v = link[v]
            if depth == 0 and c not in nxt[v]:
                j += 1
                i = j + 1
            else:
                v = nxt[v][c]
                depth += 1
                j += 1
        if trace is not None:
            trace.append((i, j))
    if depth > 0:
        out.append((i, j))
    ts = _s(t)
    ps = _s(p)
    return [MemRecord(a, b, _end_pos(ts, ps[a - 1:b])) for a, b in out]


def greedy_rlz(reference, text):
    """Greedy longest-prefix parse of text into substrings of reference,
    as 1-based inclusive (a, b) pairs."""
    r, t = _s(reference), _s(text)
    out = []
    q = 0
    while q < len(t):
        ln = 0
        while q + ln < len(t) and t[q:q + ln + 1] in r:
            ln += 1
        if ln == 0:
            raise ValueError(f"symbol {ord(t[q])} absent from the reference")
        a = r.find(t[q:q + ln]) + 1
        out.append((a, a + ln - 1))
        q += ln
    return out


def brute_overlaps(reads, lmin, all_matches=False):
    """All (u, v, l) with the length-l suffix of read u equal to the length-l
    prefix of read v, u != v, l >= lmin; 1-based read ids. Longest per pair
    unless all_matches."""
    rs = [_s(r) for r in reads]
    out = []
    for u, a in enumerate(rs):
        for v, b in enumerate(rs):
            if u == v:
                continue
            found = [ln for ln in range(lmin, min(len(a), len(b)) + 1) if a[-ln:] == b[:ln]]
            if not found:
                continue
            if all_matches:
                out.extend((u + 1, v + 1, ln) for ln in found)
            else:
                out.append((u + 1, v + 1, max(found)))
    return sorted(out)
