"""Locally consistent grammar: level-by-level construction over a text,
pattern parsing with the same rules, and cut-set maintenance for a sliding
pattern window."""

import random
from bisect import bisect_left, bisect_right

import numpy as np

from .grammar import SIGMA, Grammar, Run, Seq, as_symbols

# pattern boundary markers; paused at every level
LEFT, RIGHT = -1, -2


def threshold(k):
    """Grouping threshold at level k as an exact fraction (num, den)."""
    c = (k + 1) // 2
    return 4 ** (c - 1), 3 ** (c - 1)


def alpha(k):
    """Extreme width ceil(8 * threshold(k)); level 0 uses threshold 3/4."""
    if k <= 0:
        return 6
    num, den = threshold(k)
    return -(-8 * num // den)


def _runs(seq, paused, lookup):
    out = []
    i, n = 0, len(seq)
    while i < n:
        s = seq[i]
        j = i + 1
        while j < n and seq[j] == s:
            j += 1
        if j - i >= 2 and not paused(s):
            out.append(lookup(s, j - i))
        else:
            out.extend(seq[i:j])
        i = j
    return out


def _block_ends(seq, paused, rank):
    """Indices closing a block: the last index, both sides of every paused
    symbol, and local minima whose neighbours are both unpaused."""
    n = len(seq)
    stop = [paused(s) for s in seq]
    vals = [rank(s) for s in seq]
    ends = []
    for idx in range(n):
        if idx == n - 1 or stop[idx] or stop[idx + 1]:
            ends.append(idx)
        elif idx > 0 and not stop[idx - 1] and vals[idx - 1] > vals[idx] < vals[idx + 1]:
            ends.append(idx)
    return ends


def _blocks(seq, ends, lookup):
    out = []
    prev = 0
    for e in ends:
        if e == prev:
            out.append(seq[e])
        else:
            out.append(lookup(tuple(seq[prev:e + 1])))
        prev = e + 1
    return out


class LcgLevels:
    """Per-level state of a locally consistent grammar.

    Attributes
    ----------
    seqs : list of list
        Level sequences; ``seqs[0]`` is the text. May be dropped after
        loading from disk (only needed by consistency checks).
    perms : dict
        Level k (even) -> mapping from symbol to its random rank.
    run_dict, block_dict : dict
        Run key (symbol, count) and block tuple -> nonterminal symbol.
    created : list
        Level at which each nonterminal was created.
    """

    def __init__(self, grammar, seqs, perms, run_dict, block_dict, created, seed, height):
        self.grammar = grammar
        self.seqs = seqs
        self.perms = perms
        self.run_dict = run_dict
        self.block_dict = block_dict
        self.created = created
        self.seed = seed
        self.height = height

    def block_ends(self, k):
        """Sorted 1-based text positions closing a level-k symbol."""
        g = self.grammar
        out = []
        acc = 0
        for s in self.seqs[k]:
            acc += g.exp_len(s)
            out.append(acc)
        return out


def _build_once(text, seed):
    rng = np.random.default_rng(seed)
    rules = []
    lens = []
    created = []
    run_dict = {}
    block_dict = {}

    def length(s):
        return 1 if s < SIGMA else lens[s - SIGMA]

    def new_rule(rule, ln, level):
        rules.append(rule)
        lens.append(ln)
        created.append(level)
        return SIGMA + len(rules) - 1

    seq = list(text)
    seqs = [seq]
    perms = {}
    k = 0
    while len(seq) > 1:
        k += 1
        num, den = threshold(k)

        def paused(s, num=num, den=den):
            return length(s) * den > num

        if k % 2:
            def run_lookup(s, t, level=k):
                key = (s, t)
                nt = run_dict.get(key)
                if nt is None:
                    nt = run_dict[key] = new_rule(Run(s, t), t * length(s), level)
                return nt
            seq = _runs(seq, paused, run_lookup)
        else:
            distinct = sorted(set(seq))
            order = rng.permutation(len(distinct)).tolist()
            perm = dict(zip(distinct, order))
            perms[k] = perm

            def block_lookup(block, level=k):
                nt = block_dict.get(block)
                if nt is None:
                    nt = block_dict[block] = new_rule(
                        Seq(block), sum(length(s) for s in block), level)
                return nt
            ends = _block_ends(seq, paused, perm.__getitem__)
            seq = _blocks(seq, ends, block_lookup)
        seqs.append(seq)
    if seq[0] < SIGMA:
        start = new_rule(Seq((seq[0],)), 1, k + 1)
    else:
        start = seq[0]
    grammar = Grammar(rules, start)
    return LcgLevels(grammar, seqs, perms, run_dict, block_dict, created, seed, k)


def build_lcg(text, seed=None, retries=3):
    """Build a locally consistent grammar; keep the smallest of ``retries``
    independent permutation draws. Returns (grammar, levels)."""
    text = as_symbols(text)
    if not text:
        raise ValueError("text must be nonempty")
    if seed is None:
        seed = 0
    rng = random.Random(seed)
    best = None
    for _ in range(max(1, retries)):
        lv = _build_once(text, rng.randrange(1 << 32))
        if best is None or lv.grammar.size < best.grammar.size:
            best = lv
    return best.grammar, best


def local_consistency_check(levels, i, j, i2, j2):
    """Check that equal substrings T[i..j] and T[i2..j2] have identical
    level-k block ends away from their extremes, for every level."""
    text = levels.seqs[0]
    if j - i != j2 - i2 or text[i - 1:j] != text[i2 - 1:j2]:
        raise ValueError("substrings differ")
    for k in range(1, len(levels.seqs)):
        a = alpha(k)
        ends = levels.block_ends(k)
        if _restricted(ends, i + 2 * a, j - a) != _restricted(ends, i2 + 2 * a, j2 - a):
            return False
    return True


def _restricted(ends, lo, hi):
    """Block ends in [lo..hi-1], relative to lo."""
    a = bisect_left(ends, lo)
    b = bisect_left(ends, hi)
    return [e - lo + 1 for e in ends[a:b]]


class PatternLevels:
    """Parse of a pattern with the text's rules, plus window cursors.

    Level k has symbol sequence ``seqs[k]`` framed by the boundary markers,
    and ``ends[k]`` holding each symbol's last position in pattern
    coordinates (left marker at 0, pattern at 1..m, right marker at m+1).
    """

    def __init__(self, levels, pattern):
        pattern = as_symbols(pattern)
        self.m = m = len(pattern)
        g = levels.grammar
        glens = g._lens
        fresh_len = {}
        fresh_runs = {}
        fresh_blocks = {}
        counter = [-3]

        def length(s):
            if s >= SIGMA:
                return glens[s - SIGMA]
            if s >= 0:
                return 1
            return fresh_len.get(s, 1)

        def fresh(ln):
            s = counter[0]
            counter[0] -= 1
            fresh_len[s] = ln
            return s

        seq = [LEFT] + pattern + [RIGHT]
        seqs = [seq]
        k = 0
        while len(seq) > 3:
            k += 1
            num, den = threshold(k)

            def paused(s, num=num, den=den):
                return s == LEFT or s == RIGHT or length(s) * den > num

            if k % 2:
                def run_lookup(s, t):
                    key = (s, t)
                    nt = levels.run_dict.get(key)
                    if nt is None:
                        nt = fresh_runs.get(key)
                        if nt is None:
                            nt = fresh_runs[key] = fresh(t * length(s))
                    return nt
                seq = _runs(seq, paused, run_lookup)
            else:
                perm = levels.perms.get(k, {})
                extra = {}
                base = len(perm)
                for s in seq:
                    if s not in perm and s not in extra:
                        extra[s] = base + len(extra)

                def rank(s, perm=perm, extra=extra):
                    v = perm.get(s)
                    return extra[s] if v is None else v

                def block_lookup(block):
                    nt = levels.block_dict.get(block)
                    if nt is None:
                        nt = fresh_blocks.get(block)
                        if nt is None:
                            nt = fresh_blocks[block] = fresh(sum(length(s) for s in block))
                    return nt
                seq = _blocks(seq, _block_ends(seq, paused, rank), block_lookup)
            seqs.append(seq)
        self.seqs = seqs
        self.fresh_len = fresh_len
        ends = []
        for sq in seqs:
            acc = -1
            e = []
            for s in sq:
                acc += length(s)
                e.append(acc)
            ends.append(e)
        self.ends = ends
        self.alphas = [alpha(k + 1) for k in range(len(seqs))]
        self.moves = 0
        self.i = 1
        self.j = 0
        self.ik = [bisect_left(e, 1) for e in ends]
        self.jk = [0] * len(ends)

    @property
    def height(self):
        return len(self.seqs) - 1

    def reset(self, i=1, j=None):
        """Place cursors on window [i..j] directly."""
        if j is None:
            j = i - 1
        self.i, self.j = i, j
        self.ik = [bisect_left(e, i) for e in self.ends]
        self.jk = [bisect_left(e, j) for e in self.ends]

    def advance_window(self, direction):
        """Grow the window by one at the right ('j') or shrink it at the
        left ('i'), moving only the level cursors that change."""
        if direction in ("j", "grow-j"):
            if self.j >= self.m:
                raise ValueError("window end beyond pattern")
            self.j += 1
            pos, cur = self.j, self.jk
        elif direction in ("i", "grow-i"):
            if self.i > self.j + 1 or self.i > self.m:
                raise ValueError("window start beyond window end")
            self.i += 1
            pos, cur = self.i, self.ik
        else:
            raise ValueError(f"unknown direction {direction!r}")
        ends = self.ends
        for k in range(len(ends)):
            if ends[k][cur[k]] < pos:
                cur[k] += 1
                self.moves += 1
            else:
                break

    def cut_set(self):
        """Interior cut candidates M(i, j) of the current window, sorted."""
        i, j = self.i, self.j
        out = set()
        if j <= i:
            return []
        for k, e in enumerate(self.ends):
            lo, hi = self.ik[k], self.jk[k]
            if lo >= hi:
                break
            a = self.alphas[k]
            left_hi = bisect_right(e, i + 2 * a - 1, lo, hi)
            right_lo = max(left_hi, bisect_left(e, j - a, lo, hi))
            out.update(e[lo:left_hi])
            out.update(e[right_lo:hi])
            if left_hi < right_lo:
                out.add(e[left_hi])
        return sorted(out)

    def cut_set_scratch(self, i, j):
        """M(i, j) recomputed from the level end lists by binary search."""
        out = set()
        for k, e in enumerate(self.ends):
            lo = bisect_left(e, i)
            hi = bisect_left(e, j)
            if lo >= hi:
                continue
            a = self.alphas[k]
            left_hi = bisect_right(e, i + 2 * a - 1, lo, hi)
            right_lo = max(left_hi, bisect_left(e, j - a, lo, hi))
            out.update(e[lo:left_hi])
            out.update(e[right_lo:hi])
            if left_hi < right_lo:
                out.add(e[left_hi])
        return sorted(out)


def parse_pattern(levels, pattern):
    return PatternLevels(levels, pattern)


def cut_set(pattern_levels):
    return pattern_levels.cut_set()


def advance_window(pattern_levels, direction):
    pattern_levels.advance_window(direction)
    return pattern_levels
