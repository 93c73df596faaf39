"""Relative Lempel-Ziv parsing against an indexed reference and all-pairs
suffix-prefix overlaps among reads."""

import hashlib
import struct
from bisect import bisect_left
from typing import NamedTuple

from .grammar import DOLLAR, HASH, as_symbols
from .index import build_index
from .mem import _Query, find_mems

RLZ_MAGIC = b"RLZ1"


class RlzPhrase(NamedTuple):
    a: int
    b: int


class OverlapEdge(NamedTuple):
    source: int
    target: int
    length: int


def rlz_compress(ref_index, T, algo=None):
    """Greedy left-to-right parse of T into reference substrings, read off
    the MEMs of T against the reference."""
    T = as_symbols(T)
    if not T:
        return []
    missing = sorted(set(T) - set(ref_index.char_count))
    if missing:
        raise ValueError(f"symbol {missing[0]} absent from the reference")
    mems = find_mems(ref_index, T, algo)
    out = []
    p = 1
    c = 0
    while p <= len(T):
        while c + 1 < len(mems) and mems[c + 1].i <= p:
            c += 1
        rec = mems[c]
        # the phrase is the tail of this MEM's occurrence
        b = rec.p
        a = b - (rec.j - p)
        out.append(RlzPhrase(a, b))
        p = rec.j + 1
    return out


def rlz_decompress(R, phrases):
    R = as_symbols(R)
    out = []
    for a, b in phrases:
        if not 1 <= a <= b <= len(R):
            raise ValueError(f"phrase ({a}, {b}) outside the reference")
        out.extend(R[a - 1:b])
    return out


def reference_hash(R):
    data = b"".join(c.to_bytes(2, "little") for c in as_symbols(R))
    return hashlib.sha256(data).digest()


def dump_rlz(phrases, ref_hash):
    head = RLZ_MAGIC + ref_hash + struct.pack("<Q", len(phrases))
    return head + b"".join(struct.pack("<QQ", a, b) for a, b in phrases)


def load_rlz(data, ref_hash=None):
    if data[:4] != RLZ_MAGIC:
        raise ValueError("not a phrase file")
    stored = data[4:36]
    if ref_hash is not None and stored != ref_hash:
        raise ValueError("phrase file was made against a different reference")
    (z,) = struct.unpack_from("<Q", data, 36)
    if len(data) != 44 + 16 * z:
        raise ValueError("truncated phrase file")
    return [RlzPhrase(*struct.unpack_from("<QQ", data, 44 + 16 * t)) for t in range(z)]


class _ReadScan:
    """Window [1..j] over one read, restricted to the cut set plus the
    window end, with snapshot and restore around the end-of-read probe."""

    def __init__(self, index, read):
        from .lcg import PatternLevels
        self.index = index
        self.read = read
        self.query = _Query(index, read, batched=True)
        self.levels = PatternLevels(index.levels, read)
        self.j = 0
        self.active = []
        self.yloc = {}

    def advance(self):
        q, pl = self.query, self.levels
        pl.advance_window("j")
        self.j = j = pl.j
        cuts = pl.cut_set() + [j]
        self.active = []
        self.yloc = {}
        for r in cuts:
            if q.rect(1, r, j) is not None:
                self.active.append(r)
                node, d = q.vy[r]
                self.yloc[r] = q.yt.weighted_ancestor(node, j - r) if j > r else (0, 0)
        return cuts

    def snapshot(self):
        pl = self.levels
        return (self.j, list(self.active), dict(self.yloc), pl.i, pl.j, list(pl.ik), list(pl.jk))

    def restore(self, snap):
        pl = self.levels
        self.j, active, yloc, pl.i, pl.j, ik, jk = snap
        self.active, self.yloc = list(active), dict(yloc)
        pl.ik, pl.jk = list(ik), list(jk)

    def state_hash(self):
        pl = self.levels
        blob = repr((self.j, self.active, sorted(self.yloc.items()), pl.i, pl.j, pl.ik, pl.jk))
        return hashlib.sha256(blob.encode()).hexdigest()

    def probe_end(self, cuts):
        """Start positions of P[1..j] followed by the read separator. The
        active set and loci are overwritten by the probe."""
        q, idx = self.query, self.index
        j = self.j
        xt, yt, grid = q.xt, q.yt, q.grid
        found = []
        active, yloc = [], {}
        for r in cuts:
            node, d = q.vy[r]
            if j > r:
                if d < j - r:
                    continue
                base = yt.weighted_ancestor(node, j - r)
            else:
                base = (0, 0)
            y = yt.child(base, DOLLAR)
            xn = q._x_node(1, r)
            if y is None or xn < 0:
                continue
            box = (xt.lo[xn], xt.hi[xn], yt.lo[y[0]], yt.hi[y[0]])
            if not grid.nonempty(*box):
                continue
            active.append(r)
            yloc[r] = y
            for col in grid.report(*box):
                found.extend(idx.occurrences_from(col, r, j + 1))
        self.active, self.yloc = active, yloc
        return found


def all_pairs_suffix_prefix(reads, lmin, all_matches=False, index=None, check_state=False, seed=0):
    """Edges (u, v, l): the length-l suffix of read u equals the length-l
    prefix of read v, u != v, l >= lmin. Read ids are 1-based. Longest
    overlap per ordered pair unless ``all_matches``."""
    if lmin < 1:
        raise ValueError("lmin must be at least 1")
    reads = [as_symbols(r) for r in reads]
    for r in reads:
        if any(c in (HASH, DOLLAR) for c in r):
            raise ValueError("reads must not contain separator symbols")
    longest = max((len(r) for r in reads), default=0)
    if longest < lmin or len(reads) < 2:
        return []
    if index is None:
        text = []
        for r in reads:
            text.extend(r)
            text.append(DOLLAR)
        index = build_index(text, seed=seed)
    # position of each separator -> read id
    ends = []
    pos = 0
    for r in reads:
        pos += len(r) + 1
        ends.append(pos)
    best = {}
    edges = []
    for v, read in enumerate(reads, 1):
        if len(read) < lmin:
            continue
        scan = _ReadScan(index, read)
        shadow = _ReadScan(index, read) if check_state else None
        for j in range(1, len(read) + 1):
            cuts = scan.advance()
            if shadow is not None:
                shadow.advance()
            if j < lmin:
                continue
            snap = scan.snapshot()
            before = scan.state_hash() if check_state else None
            starts = scan.probe_end(cuts)
            scan.restore(snap)
            if check_state and not (scan.state_hash() == before == shadow.state_hash()):
                raise AssertionError("probe left the scan state modified")
            for q in starts:
                t = bisect_left(ends, q + j)
                u = t + 1
                if ends[t] != q + j or u == v:
                    continue
                if all_matches:
                    edges.append(OverlapEdge(u, v, j))
                elif best.get((u, v), 0) < j:
                    best[(u, v)] = j
    if all_matches:
        return sorted(set(edges))
    return sorted(OverlapEdge(u, v, ln) for (u, v), ln in best.items())
