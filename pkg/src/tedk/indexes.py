"""Shared indexes: maximal runs, LCA, orthogonal range successor.

Runs are found by a per-period vectorized scan: for each period p the
positions with S[i] == S[i+p] form stretches, every stretch of length >= p
yields a maximal p-periodic interval, and deduplicating identical intervals
while keeping the smallest detected period gives exactly the runs (for an
interval of exponent >= 2 the smallest period divides every other detected
period, so it is found at its own scan step).  The reduction pipeline only
ever needs periods up to 4k, where this is O(nk) on numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, order=True)
class Run:
    """Maximal periodic substring S[i..j) with smallest period p."""

    i: int
    j: int
    p: int

    @property
    def exponent(self) -> float:
        return (self.j - self.i) / self.p


def _stretches(mask: np.ndarray):
    """(start, length) pairs of maximal True stretches of a boolean array."""
    if len(mask) == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    diff = np.diff(mask.astype(np.int8))
    starts = np.flatnonzero(diff == 1) + 1
    ends = np.flatnonzero(diff == -1) + 1
    if mask[0]:
        starts = np.concatenate(([0], starts))
    if mask[-1]:
        ends = np.concatenate((ends, [len(mask)]))
    return starts.astype(np.int64), (ends - starts).astype(np.int64)


def compute_runs(S: np.ndarray, max_period: int | None = None,
                 min_exponent: float = 2.0) -> list[Run]:
    """All runs of S, optionally restricted to period <= max_period and
    exponent >= min_exponent.

    The exponent filter is safe to apply per scan period: an interval whose
    true period q is smaller than the scanned p has the same maximal extent
    at the scan step for q, where its full exponent is measured.
    """
    S = np.asarray(S)
    n = len(S)
    limit = n // 2 if max_period is None else min(max_period, n // 2)
    min_exponent = max(min_exponent, 2.0)
    best: dict[tuple[int, int], int] = {}
    for p in range(1, limit + 1):
        eq = S[:-p] == S[p:]
        starts, lengths = _stretches(eq)
        sel = lengths + p >= min_exponent * p
        for a, ln in zip(starts[sel].tolist(), lengths[sel].tolist()):
            key = (a, a + ln + p)
            q = best.get(key)
            if q is None or p < q:
                best[key] = p
    runs = [Run(i, j, p) for (i, j), p in best.items()]
    runs.sort()
    return runs


class LcaIndex:
    """Sparse minimum table over the parenthesis-position depth array.

    The minimum-depth position strictly between o(u) and o(v) identifies a
    child of the LCA; the ancestor cases are resolved from the o/c intervals
    directly.  Queries across different trees of the forest return None.
    """

    def __init__(self, forest) -> None:
        self.forest = forest
        n = forest.n
        if n == 0:
            self.table = None
            return
        node_at = forest.position_index().node_at
        self.tour = node_at
        depths = forest.depth[node_at]
        self.depths = depths
        m = len(depths)
        k = m.bit_length()
        table = [np.arange(m, dtype=np.int64)]
        for lvl in range(1, k):
            half = 1 << (lvl - 1)
            prev = table[-1]
            width = m - (1 << lvl) + 1
            if width <= 0:
                break
            left = prev[:width]
            right = prev[half:half + width]
            table.append(np.where(depths[left] <= depths[right], left, right))
        self.table = table
        roots = forest.roots
        self.root_of = roots[np.searchsorted(
            roots, np.arange(n), side="right") - 1]

    def _argmin_depth(self, a: int, b: int) -> int:
        """Position of minimum depth in tour positions [a..b]."""
        lvl = (b - a + 1).bit_length() - 1
        row = self.table[lvl]
        x = int(row[a])
        y = int(row[b - (1 << lvl) + 1])
        return x if self.depths[x] <= self.depths[y] else y

    def lca(self, u: int, v: int) -> int | None:
        F = self.forest
        if self.root_of[u] != self.root_of[v]:
            return None
        if u == v:
            return u
        ou, ov = int(F.o[u]), int(F.o[v])
        if ou > ov:
            u, v, ou, ov = v, u, ov, ou
        if F.c[u] > ov:  # u is an ancestor of v
            return u
        pos = self._argmin_depth(ou, ov)
        return int(F.parent[self.tour[pos]])


class _MergeSortTree:
    """Static segment tree over x-sorted points; per-block y-sorted lists."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray):
        order = np.argsort(xs, kind="stable")
        self.xs = xs[order]
        self.order = order
        self.n = len(xs)
        ys = ys[order]
        idx = np.arange(self.n, dtype=np.int64)
        self.levels: list[tuple[np.ndarray, np.ndarray]] = [(ys.copy(), idx)]
        size = 1
        while size < self.n:
            size *= 2
            prev_y, prev_i = self.levels[-1]
            new_y = prev_y.copy()
            new_i = prev_i.copy()
            for start in range(0, self.n, size):
                stop = min(start + size, self.n)
                seg = np.argsort(prev_y[start:stop], kind="stable")
                new_y[start:stop] = prev_y[start:stop][seg]
                new_i[start:stop] = prev_i[start:stop][seg]
            self.levels.append((new_y, new_i))

    def min_y_in_rect(self, x_lo, x_hi, y_lo, y_hi) -> int | None:
        """Original index of the min-y point with x in [x_lo..x_hi],
        y in [y_lo..y_hi]; None if the rectangle is empty."""
        lo = int(np.searchsorted(self.xs, x_lo, side="left"))
        hi = int(np.searchsorted(self.xs, x_hi, side="right"))
        best_y = None
        best_i = None
        pos = lo
        while pos < hi:
            lvl = 0
            while (lvl + 1 < len(self.levels)
                   and pos % (1 << (lvl + 1)) == 0
                   and pos + (1 << (lvl + 1)) <= hi):
                lvl += 1
            size = 1 << lvl
            ys, idx = self.levels[lvl]
            at = pos + int(np.searchsorted(ys[pos:pos + size], y_lo, side="left"))
            if at < pos + size and ys[at] <= y_hi:
                if best_y is None or int(ys[at]) < best_y:
                    best_y = int(ys[at])
                    best_i = int(idx[at])
            pos += size
        if best_i is None:
            return None
        return int(self.order[best_i])


class OrsIndex:
    """Orthogonal range successor over per-context point sets.

    Each key owns points (x=open position, y=close position) with attached
    node ids and payloads; a query returns the point with minimal y inside
    the rectangle, or None when the key is absent or the rectangle empty.
    """

    def __init__(self) -> None:
        self._groups: dict = {}

    @staticmethod
    def build(keys, xs, ys, nodes, payloads) -> "OrsIndex":
        idx = OrsIndex()
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        nodes = np.asarray(nodes, dtype=np.int64)
        payloads = np.asarray(payloads, dtype=np.int64)
        by_key: dict = {}
        for t, key in enumerate(keys):
            by_key.setdefault(key, []).append(t)
        for key, members in by_key.items():
            sel = np.asarray(members, dtype=np.int64)
            tree = _MergeSortTree(xs[sel], ys[sel])
            idx._groups[key] = (tree, nodes[sel], payloads[sel])
        return idx

    def query(self, key, x_lo: int, x_hi: int, y_lo: int, y_hi: int):
        """(node, payload) of the min-y point in the rectangle, or None."""
        group = self._groups.get(key)
        if group is None:
            return None
        tree, nodes, payloads = group
        at = tree.min_y_in_rect(x_lo, x_hi, y_lo, y_hi)
        if at is None:
            return None
        return int(nodes[at]), int(payloads[at])
