"""Run-length context-free grammars: rules, expansion access, grammar tree,
Karp-Rabin signatures and the binary grammar format."""

import random
import struct
from bisect import bisect_right
from typing import NamedTuple

HASH = 256
DOLLAR = 257
SIGMA = 258

# expansions up to this length are cached as tuples
SHORT_EXPANSION = 64


class GrammarError(ValueError):
    pass


class Seq(NamedTuple):
    children: tuple


class Run(NamedTuple):
    base: int
    count: int


def as_symbols(seq):
    """Normalize bytes, str or an int sequence to a list of symbol codes."""
    if isinstance(seq, (bytes, bytearray, memoryview)):
        return list(bytes(seq))
    if isinstance(seq, str):
        return [ord(c) for c in seq]
    return [int(c) for c in seq]


class Grammar:
    """A run-length grammar generating a single string.

    Symbols are integers: values below ``sigma`` are terminals and the value
    ``sigma + a`` names nonterminal ``a`` whose rule is ``rules[a]``.

    Parameters
    ----------
    rules : list of Seq or Run
        One rule per nonterminal.
    start : int
        Start symbol.
    sigma : int
        Alphabet size.
    """

    def __init__(self, rules, start, sigma=SIGMA):
        self.sigma = sigma
        self.start = start
        self.rules = [r if isinstance(r, (Seq, Run)) else _coerce_rule(r) for r in rules]
        self.problem = self._structure_problem()
        self._lens = None
        self._prefix = None
        self._short = {}
        if self.problem is None:
            self._prepare()

    # -- structure -----------------------------------------------------

    def nt(self, a):
        return self.sigma + a

    def is_terminal(self, sym):
        return sym < self.sigma

    @property
    def size(self):
        return sum(2 if isinstance(r, Run) else len(r.children) for r in self.rules)

    @property
    def n(self):
        return self.exp_len(self.start)

    def _symbol_problem(self, sym):
        if not isinstance(sym, int) or sym < 0:
            return f"invalid symbol {sym!r}"
        if sym >= self.sigma + len(self.rules):
            return f"undefined symbol {sym}"
        return None

    def _structure_problem(self):
        if not self.rules:
            return "grammar has no rules"
        if self.start < self.sigma or self.start >= self.sigma + len(self.rules):
            return f"start symbol {self.start} is not a nonterminal"
        for a, rule in enumerate(self.rules):
            if isinstance(rule, Run):
                if rule.count < 2:
                    return f"nonterminal {a}: run count {rule.count} < 2"
                syms = (rule.base,)
            else:
                if len(rule.children) == 0:
                    return f"nonterminal {a}: empty right-hand side"
                syms = rule.children
            for s in syms:
                msg = self._symbol_problem(s)
                if msg:
                    return f"nonterminal {a}: {msg}"
        # cycle and reachability check by iterative DFS from the start symbol
        state = [0] * len(self.rules)  # 0 new, 1 on stack, 2 done
        stack = [(self.start - self.sigma, 0)]
        state[self.start - self.sigma] = 1
        while stack:
            a, k = stack[-1]
            kids = self._rule_symbols(a)
            if k == len(kids):
                state[a] = 2
                stack.pop()
                continue
            stack[-1] = (a, k + 1)
            s = kids[k]
            if s < self.sigma:
                continue
            b = s - self.sigma
            if state[b] == 1:
                return f"nonterminal {b}: cycle through its own expansion"
            if state[b] == 0:
                state[b] = 1
                stack.append((b, 0))
        for a, st in enumerate(state):
            if st == 0:
                return f"nonterminal {a}: unreachable from the start symbol"
        return None

    def _rule_symbols(self, a):
        rule = self.rules[a]
        return (rule.base,) if isinstance(rule, Run) else rule.children

    def _require(self):
        if self.problem is not None:
            raise GrammarError(self.problem)

    def _prepare(self):
        nrules = len(self.rules)
        lens = [0] * nrules
        done = [False] * nrules
        for root in range(nrules):
            if done[root]:
                continue
            stack = [root]
            while stack:
                a = stack[-1]
                pending = [s - self.sigma for s in self._rule_symbols(a)
                           if s >= self.sigma and not done[s - self.sigma]]
                if pending:
                    stack.extend(pending)
                    continue
                stack.pop()
                if done[a]:
                    continue
                rule = self.rules[a]
                if isinstance(rule, Run):
                    lens[a] = rule.count * self._len_of(rule.base, lens)
                else:
                    lens[a] = sum(self._len_of(s, lens) for s in rule.children)
                done[a] = True
        self._lens = lens
        prefix = []
        for rule in self.rules:
            if isinstance(rule, Run):
                prefix.append(None)
            else:
                w = [0]
                for s in rule.children:
                    w.append(w[-1] + self._len_of(s, lens))
                prefix.append(w)
        self._prefix = prefix

    def _len_of(self, sym, lens):
        return 1 if sym < self.sigma else lens[sym - self.sigma]

    def exp_len(self, sym):
        self._require()
        return 1 if sym < self.sigma else self._lens[sym - self.sigma]

    def prefix_lengths(self, a):
        """Cumulative child expansion lengths of Sequence rule ``a``."""
        return self._prefix[a]

    def reversed(self):
        """Grammar of the reversed text (Sequence children reversed)."""
        rules = [r if isinstance(r, Run) else Seq(tuple(reversed(r.children)))
                 for r in self.rules]
        return Grammar(rules, self.start, self.sigma)

    # -- expansion -----------------------------------------------------

    def _short_expansion(self, sym):
        e = self._short.get(sym)
        if e is None:
            e = tuple(self._expand_all(sym))
            self._short[sym] = e
        return e

    def _expand_all(self, sym):
        out = []
        stack = [sym]
        sigma = self.sigma
        while stack:
            s = stack.pop()
            if s < sigma:
                out.append(s)
                continue
            e = self._short.get(s)
            if e is not None:
                out.extend(e)
                continue
            rule = self.rules[s - sigma]
            if isinstance(rule, Run):
                stack.extend([rule.base] * rule.count)
            else:
                stack.extend(reversed(rule.children))
        return out

    def expand(self, sym=None):
        self._require()
        return self._expand_all(self.start if sym is None else sym)

    def extract(self, sym, offset, length):
        """Characters ``exp(sym)[offset:offset+length]`` (0-based)."""
        self._require()
        out = []
        if length <= 0:
            return out
        if offset < 0 or offset + length > self.exp_len(sym):
            raise GrammarError("extraction range out of bounds")
        sigma = self.sigma
        lens = self._lens
        stack = [(sym, offset, length)]
        while stack:
            s, off, ln = stack.pop()
            if s < sigma:
                out.append(s)
                continue
            a = s - sigma
            if lens[a] <= SHORT_EXPANSION:
                e = self._short.get(s) or self._short_expansion(s)
                out.extend(e[off:off + ln])
                continue
            rule = self.rules[a]
            if isinstance(rule, Run):
                bl = lens[rule.base - sigma] if rule.base >= sigma else 1
                first, o = divmod(off, bl)
                pieces = []
                while ln > 0:
                    take = min(ln, bl - o)
                    pieces.append((rule.base, o, take))
                    ln -= take
                    o = 0
                stack.extend(reversed(pieces))
            else:
                w = self._prefix[a]
                kids = rule.children
                idx = bisect_right(w, off) - 1
                o = off - w[idx]
                pieces = []
                while ln > 0:
                    take = min(ln, w[idx + 1] - w[idx] - o)
                    pieces.append((kids[idx], o, take))
                    ln -= take
                    o = 0
                    idx += 1
                stack.extend(reversed(pieces))
        return out

    def expansion_prefix(self, sym, length):
        if length < 0 or length > self.exp_len(sym):
            raise GrammarError("prefix length out of range")
        return self.extract(sym, 0, length)

    def expansion_suffix(self, sym, length):
        total = self.exp_len(sym)
        if length < 0 or length > total:
            raise GrammarError("suffix length out of range")
        return self.extract(sym, total - length, length)

    def access(self, i, j):
        """Text characters T[i..j], 1-based inclusive."""
        if not 1 <= i <= j <= self.n:
            raise GrammarError("positions out of range")
        return self.extract(self.start, i - 1, j - i + 1)

    def text(self):
        return self.expand()

    def __eq__(self, other):
        return (isinstance(other, Grammar) and self.sigma == other.sigma
                and self.start == other.start and self.rules == other.rules)

    def __repr__(self):
        return f"Grammar(rules={len(self.rules)}, size={self.size}, start={self.start})"


def _coerce_rule(r):
    if isinstance(r, tuple) and len(r) == 2 and r[0] in ("seq", "run"):
        return Seq(tuple(r[1])) if r[0] == "seq" else Run(*r[1])
    return Seq(tuple(r))


def check(grammar, text=None):
    """Raise GrammarError naming the first violated invariant."""
    grammar._require()
    if text is None:
        return
    text = as_symbols(text)
    if grammar.n != len(text):
        raise GrammarError(f"expansion length {grammar.n} differs from text length {len(text)}")
    if grammar.expand() != text:
        raise GrammarError("expansion differs from text")


def validate(grammar, text):
    try:
        check(grammar, text)
    except GrammarError:
        return False
    return True


# -- grammar tree --------------------------------------------------------

INTERNAL, LEAF, RUNLEAF = 0, 1, 2


class GrammarTree:
    """Parse tree pruned to the leftmost internal node of each nonterminal.

    Node arrays are indexed by node id in preorder. ``start`` is 0-based;
    ``off`` is the start relative to the parent. Run-length nodes have two
    children: the base symbol and a RUNLEAF standing for ``copies`` more
    copies of it.
    """

    def __init__(self, grammar):
        grammar._require()
        self.grammar = grammar
        sigma = grammar.sigma
        label, parent, off, start, length, kind, copies = [], [], [], [], [], [], []
        children = []
        internal_of = {}
        other_occ = {}
        stack = [(grammar.start, -1, 0, 0, LEAF)]
        while stack:
            sym, par, o, st, hint = stack.pop()
            nid = len(label)
            label.append(sym)
            parent.append(par)
            off.append(o)
            start.append(st)
            children.append(None)
            if par >= 0:
                children[par].append(nid)
            if hint == RUNLEAF:
                rule = grammar.rules[label[par] - sigma]
                bl = grammar.exp_len(sym)
                length.append((rule.count - 1) * bl)
                kind.append(RUNLEAF)
                copies.append(rule.count - 1)
                if sym >= sigma:
                    other_occ.setdefault(sym, []).append(nid)
                continue
            length.append(grammar.exp_len(sym))
            copies.append(1)
            if sym < sigma or sym in internal_of:
                kind.append(LEAF)
                if sym >= sigma:
                    other_occ.setdefault(sym, []).append(nid)
                continue
            kind.append(INTERNAL)
            internal_of[sym] = nid
            children[nid] = []
            rule = grammar.rules[sym - sigma]
            if isinstance(rule, Run):
                bl = grammar.exp_len(rule.base)
                stack.append((rule.base, nid, bl, st + bl, RUNLEAF))
                stack.append((rule.base, nid, 0, st, LEAF))
            else:
                w = grammar.prefix_lengths(sym - sigma)
                for idx in range(len(rule.children) - 1, -1, -1):
                    stack.append((rule.children[idx], nid, w[idx], st + w[idx], LEAF))
        self.label = label
        self.parent = parent
        self.off = off
        self.start = start
        self.length = length
        self.kind = kind
        self.copies = copies
        self.children = children
        self.internal_of = internal_of
        self.other_occ = other_occ
        leaves = [v for v in range(len(label)) if kind[v] != INTERNAL]
        leaves.sort(key=lambda v: start[v])
        self.leaves = leaves
        self.phrase_ends = [start[v] + length[v] for v in leaves]

    def __len__(self):
        return len(self.label)

    def is_run_node(self, v):
        return self.kind[v] == INTERNAL and isinstance(
            self.grammar.rules[self.label[v] - self.grammar.sigma], Run)

    def last_leaf(self, v):
        while self.kind[v] == INTERNAL:
            v = self.children[v][-1]
        return v


def build_grammar_tree(grammar):
    tree = GrammarTree(grammar)
    return tree, tree.phrase_ends


# -- Karp-Rabin signatures ----------------------------------------------

MERSENNE61 = (1 << 61) - 1


class KarpRabin:
    """Polynomial fingerprints modulo 2^61-1; character c contributes c+1."""

    def __init__(self, seed=None, base=None):
        self.mod = MERSENNE61
        if base is None:
            base = random.Random(seed).randrange(1 << 20, self.mod - 1)
        self.base = base
        self._pows = [1]

    def power(self, e):
        pows = self._pows
        if e < len(pows):
            return pows[e]
        if e > 1 << 16:
            return pow(self.base, e, self.mod)
        b, mod = self.base, self.mod
        while len(pows) <= e:
            pows.append(pows[-1] * b % mod)
        return pows[e]

    def ensure_powers(self, e):
        """Cache base^0..base^e so callers may index the table directly."""
        pows, b, mod = self._pows, self.base, self.mod
        while len(pows) <= e:
            pows.append(pows[-1] * b % mod)
        return pows

    def sig(self, seq):
        h = 0
        b, mod = self.base, self.mod
        for c in seq:
            h = (h * b + c + 1) % mod
        return h

    def compose(self, left, right, right_len):
        return (left * self.power(right_len) + right) % self.mod

    def prefix_table(self, seq):
        """Prefix fingerprints H with H[i] = sig(seq[:i])."""
        h = 0
        b, mod = self.base, self.mod
        out = [0]
        for c in seq:
            h = (h * b + c + 1) % mod
            out.append(h)
        return out

    def substring(self, table, a, b):
        """Fingerprint of seq[a:b] from its prefix table."""
        return (table[b] - table[a] * self.power(b - a)) % self.mod


class GrammarSignatures:
    """Fingerprints of expansion prefixes, computed by root descent."""

    def __init__(self, grammar, kr):
        grammar._require()
        self.grammar = grammar
        self.kr = kr
        sigma = grammar.sigma
        nrules = len(grammar.rules)
        sig = [0] * nrules
        psig = [None] * nrules
        order = _postorder(grammar)
        for a in order:
            rule = grammar.rules[a]
            if isinstance(rule, Run):
                sig[a] = self._power_sig(self._sym_sig(rule.base, sig),
                                         grammar.exp_len(rule.base), rule.count)
            else:
                w = grammar.prefix_lengths(a)
                acc = [0]
                for idx, s in enumerate(rule.children):
                    acc.append(kr.compose(acc[-1], self._sym_sig(s, sig), w[idx + 1] - w[idx]))
                psig[a] = acc
                sig[a] = acc[-1]
        self._sig = sig
        self._psig = psig

    def _sym_sig(self, s, sig=None):
        sigma = self.grammar.sigma
        if s < sigma:
            return s + 1
        return (sig if sig is not None else self._sig)[s - sigma]

    def symbol(self, s):
        return self._sym_sig(s)

    def _power_sig(self, base_sig, base_len, q):
        kr = self.kr
        result = 0
        cur, clen = base_sig, base_len
        while q:
            if q & 1:
                result = kr.compose(result, cur, clen)
            q >>= 1
            if q:
                cur = kr.compose(cur, cur, clen)
                clen *= 2
        return result

    def prefix(self, sym, length):
        """Fingerprint of exp(sym)[:length]."""
        g = self.grammar
        if length < 0 or length > g.exp_len(sym):
            raise GrammarError("signature length out of range")
        kr = self.kr
        sigma = g.sigma
        acc = 0
        while length > 0:
            if sym < sigma:
                acc = kr.compose(acc, sym + 1, 1)
                break
            a = sym - sigma
            if length == g._lens[a]:
                acc = kr.compose(acc, self._sig[a], length)
                break
            rule = g.rules[a]
            if isinstance(rule, Run):
                bl = g.exp_len(rule.base)
                q, rem = divmod(length, bl)
                if q:
                    acc = kr.compose(acc, self._power_sig(self._sym_sig(rule.base), bl, q), q * bl)
                sym, length = rule.base, rem
            else:
                w = g._prefix[a]
                idx = bisect_right(w, length) - 1
                if w[idx]:
                    acc = kr.compose(acc, self._psig[a][idx], w[idx])
                sym, length = rule.children[idx], length - w[idx]
        return acc

    def substring(self, sym, offset, length):
        """Fingerprint of exp(sym)[offset:offset+length]."""
        if offset == 0:
            return self.prefix(sym, length)
        kr = self.kr
        whole = self.prefix(sym, offset + length)
        head = self.prefix(sym, offset)
        return (whole - head * kr.power(length)) % kr.mod


def kr_signature(sigs, sym, length):
    return sigs.prefix(sym, length)


def _postorder(grammar):
    sigma = grammar.sigma
    nrules = len(grammar.rules)
    done = [False] * nrules
    order = []
    for root in range(nrules):
        if done[root]:
            continue
        stack = [(root, False)]
        while stack:
            a, expanded = stack.pop()
            if done[a]:
                continue
            if expanded:
                done[a] = True
                order.append(a)
                continue
            stack.append((a, True))
            for s in grammar._rule_symbols(a):
                if s >= sigma and not done[s - sigma]:
                    stack.append((s - sigma, False))
    return order


# -- binary format -------------------------------------------------------

GRAMMAR_MAGIC = b"GRMM"
GRAMMAR_VERSION = 1
_HEADER = struct.Struct("<4sHQII Q")


def dump_grammar(grammar):
    """Serialize: header (magic, version, n, sigma, rule count, start) then
    one record per rule: tag byte 0 = Sequence (u32 t, t x u32 symbols),
    tag byte 1 = RunLength (u32 base, u64 count). Little-endian."""
    n = grammar.n if grammar.problem is None else 0
    parts = [_HEADER.pack(GRAMMAR_MAGIC, GRAMMAR_VERSION, n, grammar.sigma,
                          len(grammar.rules), grammar.start)]
    for rule in grammar.rules:
        if isinstance(rule, Run):
            parts.append(struct.pack("<BIQ", 1, rule.base, rule.count))
        else:
            parts.append(struct.pack(f"<BI{len(rule.children)}I", 0,
                                     len(rule.children), *rule.children))
    return b"".join(parts)


def load_grammar(data, offset=0):
    """Parse a grammar record; returns (grammar, next offset)."""
    if len(data) - offset < _HEADER.size:
        raise GrammarError("truncated grammar header")
    magic, version, n, sigma, count, start = _HEADER.unpack_from(data, offset)
    if magic != GRAMMAR_MAGIC:
        raise GrammarError("not a grammar file")
    if version != GRAMMAR_VERSION:
        raise GrammarError(f"unsupported grammar version {version}")
    pos = offset + _HEADER.size
    rules = []
    try:
        for _ in range(count):
            tag = data[pos]
            if tag == 0:
                (t,) = struct.unpack_from("<I", data, pos + 1)
                kids = struct.unpack_from(f"<{t}I", data, pos + 5)
                rules.append(Seq(tuple(kids)))
                pos += 5 + 4 * t
            elif tag == 1:
                base, cnt = struct.unpack_from("<IQ", data, pos + 1)
                rules.append(Run(base, cnt))
                pos += 13
            else:
                raise GrammarError(f"rule {len(rules)}: unknown tag {tag}")
    except (struct.error, IndexError):
        raise GrammarError("truncated grammar body") from None
    g = Grammar(rules, start, sigma)
    if g.problem is None and g.n != n:
        raise GrammarError(f"header length {n} differs from expansion length {g.n}")
    return g, pos
