"""Grammar index: X/Y string sets, their Patricia trees, the point grid
linking both halves of every rule split, and occurrence reporting."""

from functools import cmp_to_key
from typing import NamedTuple

from .grammar import (INTERNAL, LEAF, RUNLEAF, Grammar, GrammarSignatures,
                      GrammarTree, KarpRabin, Run, as_symbols)
from .grid import PointGrid
from .patricia import PatriciaTree
from .suffix import SuffixIndex


class Occurrence(NamedTuple):
    position: int
    primary: bool


class GrammarIndex:
    """Index over the text generated by a grammar.

    Columns are X ranks (reversed left halves), rows are Y ranks (right
    halves). Per column: ``pt_node`` (grammar-tree node holding the split),
    ``pt_split`` (characters of that node before the split), ``pt_p``
    (1-based text position ending the left half), ``pt_xsym`` (symbol whose
    reversed expansion is the X string) and ``pt_term`` (terminal leaf
    ending the left half, or -1). Per row: ``y_sym``/``y_off`` with the Y
    string being exp(y_sym)[y_off:].
    """

    def __init__(self, grammar, levels=None, seed=0):
        grammar._require()
        self.grammar = grammar
        self.levels = levels
        self.seed = seed
        self.rgrammar = grammar.reversed()
        self.tree = tree = GrammarTree(grammar)
        self.n = n = grammar.n
        self.kr = KarpRabin(seed)
        self.sigs = GrammarSignatures(grammar, self.kr)
        self.rsigs = GrammarSignatures(self.rgrammar, self.kr)
        text = grammar.expand()
        counts = {}
        for c in text:
            counts[c] = counts.get(c, 0) + 1
        self.char_count = counts
        self._collect_points(text)
        self._sort_and_build(text)
        self.end_leaf = tree.leaves[-1] if (
            tree.kind[tree.leaves[-1]] == LEAF and tree.label[tree.leaves[-1]] < grammar.sigma) else -1

    # -- construction --------------------------------------------------

    def _collect_points(self, text):
        g, tree = self.grammar, self.tree
        sigma = g.sigma
        pts = []  # (node, split, p, xsym, ysym, yoff, term)
        for v in range(len(tree)):
            if tree.kind[v] != INTERNAL:
                continue
            a = tree.label[v] - sigma
            rule = g.rules[a]
            kids = tree.children[v]
            if isinstance(rule, Run):
                bl = g.exp_len(rule.base)
                pts.append((v, bl, tree.start[v] + bl, rule.base, tree.label[v], bl,
                            self._terminal_end(kids[0])))
            else:
                w = g.prefix_lengths(a)
                for s in range(1, len(kids)):
                    pts.append((v, w[s], tree.start[v] + w[s], rule.children[s - 1],
                                tree.label[v], w[s], self._terminal_end(kids[s - 1])))
        self.rule_points = len(pts)
        if text.count(text[-1]) == 1:
            # the last character has no other occurrence: anchor it with an
            # empty right half so single-character windows can find it
            pts.append((0, self.n, self.n, g.start, g.start, self.n, -1))
        self.has_anchor = len(pts) > self.rule_points
        self._points = pts

    def _terminal_end(self, v):
        tree = self.tree
        leaf = tree.last_leaf(v)
        if tree.kind[leaf] == LEAF and tree.label[leaf] < self.grammar.sigma:
            return leaf
        return -1

    def _sort_and_build(self, text):
        g = self.grammar
        n = self.n
        pts = self._points
        rtext = text[::-1]
        fwd = SuffixIndex(text)
        rev = SuffixIndex(rtext)
        # X string of point k: rtext[n - p : n - p + |x|]; Y: text[p : p + |y|]
        xs = [(n - p, g.exp_len(xsym)) for (_, _, p, xsym, _, _, _) in pts]
        ys = [(p, g.exp_len(ysym) - yoff) for (_, _, p, _, ysym, yoff, _) in pts]

        def comparer(sx):
            def cmp(a, b):
                (sa, la), (sb, lb) = a[1], b[1]
                h = sx.lcp_of(sa, sb) if sa != sb else max(la, lb)
                if h >= la or h >= lb:
                    return la - lb
                return sx.rank[sa] - sx.rank[sb]
            return cmp

        xorder = sorted(enumerate(xs), key=cmp_to_key(comparer(rev)))
        yorder = sorted(enumerate(ys), key=cmp_to_key(comparer(fwd)))
        col_of_pt = [0] * len(pts)
        row_of_pt = [0] * len(pts)
        for col, (k, _) in enumerate(xorder):
            col_of_pt[k] = col
        for row, (k, _) in enumerate(yorder):
            row_of_pt[k] = row
        npts = len(pts)
        self.pt_node = [0] * npts
        self.pt_split = [0] * npts
        self.pt_p = [0] * npts
        self.pt_xsym = [0] * npts
        self.pt_term = [0] * npts
        self.y_sym = [0] * npts
        self.y_off = [0] * npts
        row_of_col = [0] * npts
        for k, (node, split, p, xsym, ysym, yoff, term) in enumerate(pts):
            c, r = col_of_pt[k], row_of_pt[k]
            self.pt_node[c] = node
            self.pt_split[c] = split
            self.pt_p[c] = p
            self.pt_xsym[c] = xsym
            self.pt_term[c] = term
            self.y_sym[r] = ysym
            self.y_off[r] = yoff
            row_of_col[c] = r
        self.grid = PointGrid(row_of_col)
        self.x_len = [g.exp_len(s) for s in self.pt_xsym]
        self.y_len = [g.exp_len(s) - o for s, o in zip(self.y_sym, self.y_off)]

        def adjacent(order, sx):
            out = [0]
            for t in range(1, len(order)):
                (sa, la), (sb, lb) = order[t - 1][1], order[t][1]
                h = sx.lcp_of(sa, sb) if sa != sb else min(la, lb)
                out.append(min(h, la, lb))
            return out

        xstart = [s for _, (s, _) in xorder]
        ystart = [s for _, (s, _) in yorder]
        kr = self.kr
        hf = kr.prefix_table(text)
        hr = kr.prefix_table(rtext)
        self._assemble(
            adjacent(xorder, rev), adjacent(yorder, fwd),
            lambda rank, d: rtext[xstart[rank] + d],
            lambda rank, d: text[ystart[rank] + d],
            lambda rank, f: kr.substring(hr, xstart[rank], xstart[rank] + f),
            lambda rank, f: kr.substring(hf, ystart[rank], ystart[rank] + f))
        del self._points

    def _assemble(self, x_adj, y_adj, x_char, y_char, x_sig, y_sig):
        g, rg = self.grammar, self.rgrammar
        self.x_adj, self.y_adj = x_adj, y_adj
        self._y_heads = None
        self.xtree = PatriciaTree(
            self.x_len, x_adj, x_char,
            lambda rank, off, ln: rg.extract(self.pt_xsym[rank], off, ln))
        self.ytree = PatriciaTree(
            self.y_len, y_adj, y_char,
            lambda rank, off, ln: g.extract(self.y_sym[rank], self.y_off[rank] + off, ln))
        self.xtree.build_handles(self.kr, x_sig)
        self.ytree.build_handles(self.kr, y_sig)

    @classmethod
    def from_parts(cls, grammar, levels, seed, columns, rows, x_adj, y_adj, char_count, rule_points):
        """Rebuild from stored point arrays; characters and fingerprints
        come from the grammar, so the text is never expanded."""
        self = cls.__new__(cls)
        self.grammar = grammar
        self.levels = levels
        self.seed = seed
        self.rgrammar = grammar.reversed()
        self.tree = tree = GrammarTree(grammar)
        self.n = grammar.n
        self.kr = KarpRabin(seed)
        self.sigs = GrammarSignatures(grammar, self.kr)
        self.rsigs = GrammarSignatures(self.rgrammar, self.kr)
        self.char_count = dict(char_count)
        (self.pt_node, self.pt_split, self.pt_p, self.pt_xsym, self.pt_term,
         row_of_col) = [list(c) for c in columns]
        self.y_sym, self.y_off = [list(r) for r in rows]
        self.rule_points = rule_points
        self.has_anchor = len(self.pt_node) > rule_points
        self.grid = PointGrid(row_of_col)
        self.x_len = [grammar.exp_len(s) for s in self.pt_xsym]
        self.y_len = [grammar.exp_len(s) - o for s, o in zip(self.y_sym, self.y_off)]
        rg = self.rgrammar
        self._assemble(
            list(x_adj), list(y_adj),
            lambda rank, d: rg.extract(self.pt_xsym[rank], d, 1)[0],
            lambda rank, d: grammar.extract(self.y_sym[rank], self.y_off[rank] + d, 1)[0],
            self.x_sig, self.y_sig)
        last = tree.leaves[-1]
        self.end_leaf = last if (tree.kind[last] == LEAF and tree.label[last] < grammar.sigma) else -1
        return self

    # -- signatures of stored strings -----------------------------------

    def x_sig(self, rank, length):
        return self.rsigs.prefix(self.pt_xsym[rank], length)

    def y_sig(self, rank, length):
        heads = self._y_heads
        if heads is None:
            heads = self._y_heads = [self.sigs.prefix(s, o) for s, o in zip(self.y_sym, self.y_off)]
        kr = self.kr
        whole = self.sigs.prefix(self.y_sym[rank], self.y_off[rank] + length)
        return (whole - heads[rank] * kr.power(length)) % kr.mod

    @property
    def point_count(self):
        return self.rule_points

    # -- searches ------------------------------------------------------

    def x_locus(self, P, r, i=1):
        """Deepest P_X locus prefixing (P[i..r])^rev; P is 0-based storage."""
        return self.xtree.locate(lambda d: P[r - 1 - d], r - i + 1)

    def y_locus(self, P, r, j=None):
        """Deepest P_Y locus prefixing P[r+1..j]."""
        if j is None:
            j = len(P)
        return self.ytree.locate(lambda d: P[r + d], j - r)

    def range_expand(self, xloc, y1, y2):
        """Lowest ancestor of xloc whose column range meets rows [y1, y2],
        found from the nearest columns on both sides; root if none."""
        xt, grid = self.xtree, self.grid
        v = xloc[0]
        lo, hi = xt.lo[v], xt.hi[v]
        if grid.nonempty(lo, hi, y1, y2):
            return xloc
        best = -1
        a = grid.pred(lo - 1, y1, y2)
        if a >= 0:
            best = xt.lca(xt.leaf_of_rank[a], v)
        b = grid.succ(hi + 1, y1, y2)
        if b >= 0:
            u = xt.lca(v, xt.leaf_of_rank[b])
            if best < 0 or xt.depth[u] > xt.depth[best]:
                best = u
        if best < 0:
            return (0, 0)
        return (best, xt.depth[best])

    def range_expand_walk(self, xloc, y1, y2):
        """Same answer by climbing parents one emptiness query at a time."""
        xt, grid = self.xtree, self.grid
        while xloc[1] > 0:
            lo, hi = xt.range_of(xloc)
            if grid.nonempty(lo, hi, y1, y2):
                return xloc
            xloc = xt.parent_of(xloc)
        return (0, 0)

    # -- occurrences ---------------------------------------------------

    def _spread(self, node, off, out, limit):
        tree = self.tree
        parent, offs, label, kind = tree.parent, tree.off, tree.label, tree.kind
        other = tree.other_occ
        g = self.grammar
        stack = [(node, off, 0)]
        while stack:
            v, o, up = stack.pop()
            if not up:
                for leaf in other.get(label[v], ()):
                    if kind[leaf] == RUNLEAF:
                        bl = g.exp_len(label[v])
                        for d in range(tree.copies[leaf]):
                            stack.append((leaf, o + d * bl, 1))
                    else:
                        stack.append((leaf, o, 1))
                stack.append((v, o, 1))
                continue
            p = parent[v]
            if p < 0:
                out.append(o + 1)
                if len(out) >= limit:
                    return
            else:
                stack.append((p, o + offs[v], 0))

    def _emit(self, node, off, wlen, out, limit):
        """Occurrences of a window lying inside ``node`` at offset ``off``,
        including its copies inside a run."""
        tree = self.tree
        if tree.is_run_node(node):
            rule = self.grammar.rules[tree.label[node] - self.grammar.sigma]
            bl = self.grammar.exp_len(rule.base)
            total = rule.count * bl
            o = off
            while o + wlen <= total and len(out) < limit:
                self._spread(node, o, out, limit)
                o += bl
            return
        self._spread(node, off, out, limit)

    def occurrences_from(self, col, r, wlen, limit=None):
        """Text positions (1-based starts) of the primary occurrence at grid
        column ``col`` with ``r`` characters left of the split, and of all
        occurrences it triggers, up to ``limit``."""
        out = []
        lim = float("inf") if limit is None else limit
        self._emit(self.pt_node[col], self.pt_split[col] - r, wlen, out, lim)
        return out

    def secondary_expand(self, col, r, wlen, limit=None):
        return self.occurrences_from(col, r, wlen, limit)

    def _char_occurrences(self, c, limit):
        out = []
        lim = float("inf") if limit is None else limit
        tree = self.tree
        xt = self.xtree
        w = xt.children[0].get(c)
        if w is not None:
            for col in range(xt.lo[w], xt.hi[w] + 1):
                leaf = self.pt_term[col]
                if leaf >= 0:
                    self._emit(tree.parent[leaf], tree.off[leaf], 1, out, lim)
                    if len(out) >= lim:
                        return out
        e = self.end_leaf
        if e >= 0 and tree.label[e] == c and len(out) < lim:
            self._emit(tree.parent[e], tree.off[e], 1, out, lim) if tree.parent[e] >= 0 \
                else out.append(1)
        return out

    def locate(self, P):
        """All occurrences of P, each once, sorted by position."""
        P = as_symbols(P)
        m = len(P)
        if m == 0:
            return []
        if m == 1:
            pos = self._char_occurrences(P[0], None)
            prim = set()
            tree = self.tree
            for col in range(self.grid.n):
                leaf = self.pt_term[col]
                if leaf >= 0 and tree.label[leaf] == P[0]:
                    prim.add(self.pt_p[col])
            if self.end_leaf >= 0 and tree.label[self.end_leaf] == P[0]:
                prim.add(self.n)
            return sorted(Occurrence(q, q in prim) for q in pos)
        found = []
        for r in range(1, m):
            xl = self.x_locus(P, r)
            if xl[1] < r:
                continue
            yl = self.y_locus(P, r)
            if yl[1] < m - r:
                continue
            x1, x2 = self.xtree.range_of(xl)
            y1, y2 = self.ytree.range_of(yl)
            for col in self.grid.report(x1, x2, y1, y2):
                prim = self.pt_p[col] - r + 1
                for q in self.occurrences_from(col, r, m):
                    found.append(Occurrence(q, q == prim))
        found.sort()
        return found

    def count(self, P, limit=None):
        """Occurrence count of P, exact up to ``limit``."""
        P = as_symbols(P)
        if len(P) == 1:
            c = self.char_count.get(P[0], 0)
            return c if limit is None else min(c, limit)
        total = 0
        lim = float("inf") if limit is None else limit
        m = len(P)
        for r in range(1, m):
            xl = self.x_locus(P, r)
            if xl[1] < r:
                continue
            yl = self.y_locus(P, r)
            if yl[1] < m - r:
                continue
            x1, x2 = self.xtree.range_of(xl)
            y1, y2 = self.ytree.range_of(yl)
            for col in self.grid.report(x1, x2, y1, y2):
                total += len(self.occurrences_from(col, r, m, lim - total))
                if total >= lim:
                    return total
        return total


def build_index(text=None, grammar=None, seed=0, retries=3):
    """Index a text (through the locally consistent grammar) or an existing
    grammar."""
    from .lcg import build_lcg
    levels = None
    if grammar is None:
        grammar, levels = build_lcg(text, seed=seed, retries=retries)
    elif text is not None:
        from .grammar import check
        check(grammar, text)
    return GrammarIndex(grammar, levels, seed)


def build_xy_grid(grammar_tree):
    return GrammarIndex(grammar_tree.grammar)


def patricia_locate(tree, probe):
    probe = list(probe)
    return tree.locate(lambda d: probe[d], len(probe))


def weighted_ancestor(tree, node, depth):
    return tree.weighted_ancestor(node, depth)


def grid_range(index, x1, x2, y1, y2, mode="emptiness"):
    grid = index.grid
    if mode == "emptiness":
        return grid.nonempty(x1, x2, y1, y2)
    if mode == "any-point":
        col = grid.any_point(x1, x2, y1, y2)
        return None if col < 0 else (col, grid.row_of_col[col], index.pt_p[col])
    if mode == "successor-left":
        col = grid.pred(x2, y1, y2)
        return None if col < x1 else (col, grid.row_of_col[col], index.pt_p[col])
    if mode == "successor-right":
        col = grid.succ(x1, y1, y2)
        return None if col < 0 or col > x2 else (col, grid.row_of_col[col], index.pt_p[col])
    raise ValueError(f"unknown mode {mode!r}")


def range_expand(index, xloc, y1, y2):
    return index.range_expand(xloc, y1, y2)


def locate(index, P):
    return index.locate(P)
