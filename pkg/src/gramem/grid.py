"""Point grid over (column, row) with range emptiness, reporting and
column predecessor/successor within a row band.

Points form a permutation: each column and each row holds one point. A
segment tree over rows keeps the sorted columns of every row interval, so a
row band splits into O(log g) sorted lists searched by bisection."""

from bisect import bisect_left, bisect_right

# row bands at most this tall are scanned directly
SCAN = 12


class PointGrid:
    def __init__(self, row_of_col):
        n = len(row_of_col)
        self.n = n
        self.row_of_col = list(row_of_col)
        col_of_row = [0] * n
        for c, r in enumerate(self.row_of_col):
            col_of_row[r] = c
        self.col_of_row = col_of_row
        size = 1
        while size < max(n, 1):
            size *= 2
        self.size = size
        tree = [[] for _ in range(2 * size)]
        for r in range(n):
            tree[size + r] = [col_of_row[r]]
        for v in range(size - 1, 0, -1):
            a, b = tree[2 * v], tree[2 * v + 1]
            tree[v] = sorted(a + b) if a and b else (a or b)
        self.tree = tree

    def _lists(self, y1, y2):
        size = self.size
        lo, hi = y1 + size, y2 + size + 1
        out = []
        tree = self.tree
        while lo < hi:
            if lo & 1:
                out.append(tree[lo])
                lo += 1
            if hi & 1:
                hi -= 1
                out.append(tree[hi])
            lo >>= 1
            hi >>= 1
        return out

    def nonempty(self, x1, x2, y1, y2):
        if x1 > x2 or y1 > y2:
            return False
        if y2 - y1 < SCAN:
            cr = self.col_of_row
            for y in range(y1, y2 + 1):
                if x1 <= cr[y] <= x2:
                    return True
            return False
        if x2 - x1 < SCAN:
            rc = self.row_of_col
            for x in range(x1, x2 + 1):
                if y1 <= rc[x] <= y2:
                    return True
            return False
        for lst in self._lists(y1, y2):
            k = bisect_left(lst, x1)
            if k < len(lst) and lst[k] <= x2:
                return True
        return False

    def any_point(self, x1, x2, y1, y2):
        """Some column in the rectangle, or -1."""
        if x1 > x2 or y1 > y2:
            return -1
        if y2 - y1 < SCAN:
            cr = self.col_of_row
            for y in range(y1, y2 + 1):
                if x1 <= cr[y] <= x2:
                    return cr[y]
            return -1
        if x2 - x1 < SCAN:
            rc = self.row_of_col
            for x in range(x1, x2 + 1):
                if y1 <= rc[x] <= y2:
                    return x
            return -1
        for lst in self._lists(y1, y2):
            k = bisect_left(lst, x1)
            if k < len(lst) and lst[k] <= x2:
                return lst[k]
        return -1

    def report(self, x1, x2, y1, y2):
        """Columns of all points in the rectangle (unordered generator)."""
        if x1 > x2 or y1 > y2:
            return
        if y2 - y1 < SCAN or y2 - y1 <= x2 - x1:
            cr = self.col_of_row
            for y in range(y1, y2 + 1):
                if x1 <= cr[y] <= x2:
                    yield cr[y]
            return
        if x2 - x1 < SCAN * 4:
            rc = self.row_of_col
            for x in range(x1, x2 + 1):
                if y1 <= rc[x] <= y2:
                    yield x
            return
        for lst in self._lists(y1, y2):
            k = bisect_left(lst, x1)
            while k < len(lst) and lst[k] <= x2:
                yield lst[k]
                k += 1

    def pred(self, x, y1, y2):
        """Largest column <= x with a point in rows [y1, y2], or -1."""
        best = -1
        if y1 > y2 or x < 0:
            return best
        if y2 - y1 < SCAN:
            cr = self.col_of_row
            for y in range(y1, y2 + 1):
                c = cr[y]
                if best < c <= x:
                    best = c
            return best
        for lst in self._lists(y1, y2):
            k = bisect_right(lst, x)
            if k and lst[k - 1] > best:
                best = lst[k - 1]
        return best

    def succ(self, x, y1, y2):
        """Smallest column >= x with a point in rows [y1, y2], or -1."""
        best = -1
        if y1 > y2 or x >= self.n:
            return best
        if y2 - y1 < SCAN:
            cr = self.col_of_row
            for y in range(y1, y2 + 1):
                c = cr[y]
                if c >= x and (best < 0 or c < best):
                    best = c
            return best
        for lst in self._lists(y1, y2):
            k = bisect_left(lst, x)
            if k < len(lst) and (best < 0 or lst[k] < best):
                best = lst[k]
        return best
