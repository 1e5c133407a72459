"""Definition-level reference implementations and brute-force scanners.

Everything here is written straight from the definitions with no shared
machinery with the production paths: these are the independent oracles the
test suites and the CLI selftest compare against.  Complexities are
quadratic-or-worse on purpose.
"""

from __future__ import annotations

import numpy as np

from .alignment import Alignment, as_codes
from .forest import LabeledForest


# -- strings ------------------------------------------------------------------

def prefix_function(S) -> list[int]:
    n = len(S)
    pi = [0] * n
    for i in range(1, n):
        j = pi[i - 1]
        while j and S[i] != S[j]:
            j = pi[j - 1]
        if S[i] == S[j]:
            j += 1
        pi[i] = j
    return pi


def naive_runs(S) -> list[tuple[int, int, int]]:
    """All runs by checking the definition for every interval."""
    S = as_codes(S).tolist()
    n = len(S)
    out = []
    for i in range(n):
        pi = prefix_function(S[i:])
        for ln in range(2, n - i + 1):
            p = ln - pi[ln - 1]
            if ln < 2 * p:
                continue
            j = i + ln
            if i > 0 and S[i - 1] == S[i - 1 + p]:
                continue
            if j < n and S[j] == S[j - p]:
                continue
            out.append((i, j, p))
    return sorted(out)


def banded_edit_cost(X, Y, w: int) -> int | None:
    """Min alignment cost with every |x_t - y_t| <= w, by full DP."""
    X, Y = as_codes(X).tolist(), as_codes(Y).tolist()
    nx, ny = len(X), len(Y)
    if abs(nx - ny) > w:
        return None
    big = nx + ny + 1
    width = 2 * w + 1
    prev = [big] * width
    for j in range(-w, w + 1):  # x = 0 row: j = y
        if 0 <= j <= ny:
            prev[j + w] = j
    for x in range(1, nx + 1):
        cur = [big] * width
        for j in range(-w, w + 1):
            y = x + j
            if y < 0 or y > ny:
                continue
            best = big
            if j + 1 <= w and prev[j + 1 + w] < big:           # delete X[x-1]
                best = min(best, prev[j + 1 + w] + 1)
            if y >= 1 and j - 1 >= -w and cur[j - 1 + w] < big:  # insert Y[y-1]
                best = min(best, cur[j - 1 + w] + 1)
            if y >= 1 and prev[j + w] < big:                   # align
                best = min(best, prev[j + w] + (X[x - 1] != Y[y - 1]))
            cur[j + w] = best
        prev = cur
    val = prev[ny - nx + w]
    return None if val >= big else val


def sync_power_occurrences(X, Y, s: int, e: int, max_root: int):
    """All (x, y, q) with Q^e = X[x..x+qe) = Y[y..y+qe), |Q|=q<=max_root,
    |x-y| <= s.  Definition-level scanner over per-period equality arrays."""
    X, Y = as_codes(X), as_codes(Y)
    out = []
    for q in range(1, max_root + 1):
        need = e * q
        if need > len(X) or need > len(Y):
            continue

        def starts(S):
            eq = S[:-q] == S[q:]
            m = len(eq)
            good = np.zeros(len(S), dtype=np.int64)
            run = 0
            for t in range(m - 1, -1, -1):
                run = run + 1 if eq[t] else 0
                good[t] = run + q
            good[m:] = len(S) - np.arange(m, len(S))
            return np.flatnonzero(good >= need)

        cx = starts(X)
        cy = set(starts(Y).tolist())
        for x in cx.tolist():
            for y in range(max(0, x - s), x + s + 1):
                if y in cy and np.array_equal(X[x:x + q], Y[y:y + q]):
                    out.append((x, y, q))
    return out


# -- forests ------------------------------------------------------------------

def naive_positions(F: LabeledForest):
    """Recursive re-derivation of o/c/depth from the children lists."""
    o = [0] * F.n
    c = [0] * F.n
    depth = [0] * F.n
    pos = 0
    stack = [(int(r), 0, False) for r in F.roots[::-1]]
    while stack:
        u, d, closing = stack.pop()
        if closing:
            c[u] = pos
            pos += 1
            continue
        o[u] = pos
        depth[u] = d
        pos += 1
        stack.append((u, d, True))
        for ch in F.children(u)[::-1]:
            stack.append((int(ch), d + 1, False))
    return o, c, depth


def naive_lca(F: LabeledForest, u: int, v: int) -> int | None:
    anc = set()
    x = u
    while x != -1:
        anc.add(x)
        x = int(F.parent[x])
    x = v
    while x != -1:
        if x in anc:
            return x
        x = int(F.parent[x])
    return None


def naive_ors(points, x_lo, x_hi, y_lo, y_hi):
    """(index of min-y point in rectangle) by linear scan, or None."""
    best = None
    for t, (x, y) in enumerate(points):
        if x_lo <= x <= x_hi and y_lo <= y <= y_hi:
            if best is None or y < points[best][1]:
                best = t
    return best


def trimmed_print(F: LabeledForest, lab: np.ndarray, u: int, d: int) -> tuple:
    """P_lab(sub_{<d}(u)) extracted literally."""
    sub = []
    end = int(F.subtree_end[u])
    base = int(F.depth[u])
    keep = [t for t in range(u, end) if F.depth[t] - base < d]
    out = []
    stack = []
    for t in keep:
        while stack and not (stack[-1][1] > t):
            out.append((1, stack.pop()[0]))
        out.append((0, int(lab[t])))
        stack.append((int(lab[t]), int(F.subtree_end[t])))
    while stack:
        out.append((1, stack.pop()[0]))
    return tuple(out)


def _periodic_from(S: np.ndarray, q: int) -> np.ndarray:
    """len[i] of the longest stretch with S[t]==S[t+q] from t=i, plus q."""
    n = len(S)
    out = np.zeros(n, dtype=np.int64)
    if q >= n:
        return out
    eq = S[:-q] == S[q:]
    acc = np.zeros(len(eq) + 1, dtype=np.int64)
    rev = eq[::-1]
    idx = np.arange(len(eq), dtype=np.int64)
    last_false = np.maximum.accumulate(np.where(~rev, idx, -1))
    acc[:len(eq)] = (idx - last_false)[::-1]
    out[:len(eq)] = acc[:len(eq)] + q
    out[len(eq):] = n - np.arange(len(eq), n)
    return out


def context_power_nodes(F: LabeledForest, q_l: int, q_r: int, e: int):
    """Nodes where some context (|C_L|=q_l, |C_R|=q_r) has an e-th power,
    straight from the definition: prefix C_L^e, suffix C_R^e, balanced core.
    A per-period equality prefilter keeps the candidate set small."""
    S = F.paren().codes
    out = []
    sides = S & 1
    excess = np.cumsum(1 - 2 * sides)
    fwd = _periodic_from(S, q_l)
    bwd = _periodic_from(S[::-1], q_r)[::-1]
    cand = np.flatnonzero((fwd[F.o] >= e * q_l) & (bwd[F.c] >= e * q_r))
    for u in cand.tolist():
        o, c = int(F.o[u]), int(F.c[u])
        length = c - o + 1
        if e * (q_l + q_r) > length:
            continue
        cl = S[o:o + q_l]
        cr = S[c - q_r + 1:c + 1]
        ok = True
        for t in range(1, e):
            if not np.array_equal(S[o + t * q_l:o + (t + 1) * q_l], cl):
                ok = False
                break
            if not np.array_equal(S[c - (t + 1) * q_r + 1:c - t * q_r + 1], cr):
                ok = False
                break
        if not ok:
            continue
        a = o + e * q_l
        b = c - e * q_r + 1
        # the core [a..b) must be balanced: excess returns to base and never dips
        if a > b:
            continue
        end_exc = excess[b - 1] if b > 0 else 0
        start_exc = excess[a - 1] if a > 0 else 0
        if a == b:
            balanced = True
        else:
            balanced = (end_exc == start_exc
                        and (excess[a:b] >= start_exc).all())
        # C_L . C_R must itself be balanced with consistent labels
        if balanced:
            try:
                LabeledForest.from_codes(np.concatenate([cl, cr]))
            except ValueError:
                balanced = False
        if balanced:
            out.append(u)
    return out


def synced_context_powers(F: LabeledForest, G: LabeledForest, s: int, e: int,
                          max_part: int):
    """All (u, v, q_l, q_r) context powers C^e occurring 2k-synchronized."""
    hits = []
    for q_l in range(1, max_part + 1):
        for q_r in range(1, max_part + 1):
            us = context_power_nodes(F, q_l, q_r, e)
            vs = context_power_nodes(G, q_l, q_r, e)
            if not us or not vs:
                continue
            SF, SG = F.paren().codes, G.paren().codes
            for u in us:
                for v in vs:
                    if (abs(int(F.o[u]) - int(G.o[v])) <= s
                            and abs(int(F.c[u]) - int(G.c[v])) <= s
                            and np.array_equal(
                                SF[F.o[u]:F.o[u] + q_l],
                                SG[G.o[v]:G.o[v] + q_l])
                            and np.array_equal(
                                SF[F.c[u] - q_r + 1:F.c[u] + 1],
                                SG[G.c[v] - q_r + 1:G.c[v] + 1])):
                        hits.append((u, v, q_l, q_r))
    return hits


# -- brute-force tree edit distance over Tai mappings -------------------------

def _tai_compatible(F, G, pairs, u, v) -> bool:
    endf, endg = F.subtree_end, G.subtree_end
    for (u2, v2) in pairs:
        anc_f = u2 < u < endf[u2]
        anc_g = v2 < v < endg[v2]
        if anc_f != anc_g:
            return False
        if not anc_f and not (u >= endf[u2] and v >= endg[v2]):
            return False
    return True


def all_tai_mappings(F: LabeledForest, G: LabeledForest):
    """Yield every order/ancestor-consistent one-to-one node mapping."""
    nf, ng = F.n, G.n

    def rec(u, min_v, pairs):
        if u == nf:
            yield list(pairs)
            return
        yield from rec(u + 1, min_v, pairs)
        for v in range(min_v, ng):
            if _tai_compatible(F, G, pairs, u, v):
                pairs.append((u, v))
                yield from rec(u + 1, v + 1, pairs)
                pairs.pop()

    yield from rec(0, 0, [])


def mapping_cost(F, G, pairs) -> int:
    mismatch = sum(1 for (u, v) in pairs if F.labels[u] != G.labels[v])
    return (F.n - len(pairs)) + (G.n - len(pairs)) + mismatch


def ted_brute(F: LabeledForest, G: LabeledForest) -> int:
    return min(mapping_cost(F, G, p) for p in all_tai_mappings(F, G))


def ted_brute_constrained(F: LabeledForest, G: LabeledForest, M) -> float:
    """min cost over Tai mappings that match every pair of M."""
    best = float("inf")
    want = {(int(u), int(v)) for (u, v) in np.asarray(M).reshape(-1, 2)}
    for (u, v) in want:
        if F.labels[u] != G.labels[v]:
            return float("inf")
    for p in all_tai_mappings(F, G):
        if want <= set(p):
            best = min(best, mapping_cost(F, G, p))
    return best


def optimal_tree_alignments(F: LabeledForest, G: LabeledForest):
    """One canonical alignment per optimal Tai mapping (deletions first)."""
    best = ted_brute(F, G)
    out = []
    for p in all_tai_mappings(F, G):
        if mapping_cost(F, G, p) != best:
            continue
        aligned = []
        for (u, v) in p:
            aligned.append((int(F.o[u]), int(G.o[v])))
            aligned.append((int(F.c[u]), int(G.c[v])))
        aligned.sort()
        walk = [(0, 0)]
        cx = cy = 0
        for (x, y) in aligned + [(2 * F.n, 2 * G.n)]:
            while cx < x:
                cx += 1
                walk.append((cx, cy))
            while cy < y:
                cy += 1
                walk.append((cx, cy))
            if (x, y) != (2 * F.n, 2 * G.n):
                cx, cy = x + 1, y + 1
                walk.append((cx, cy))
        out.append(Alignment(np.array(walk, dtype=np.int64)))
    return best, out


def naive_compat_classes(F: LabeledForest, G: LabeledForest, lab_f, lab_g,
                         w: int):
    """Union-find closure over every w-compatible cross pair."""
    nf, ng = F.n, G.n
    parent = list(range(nf + ng))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for u in range(nf):
        for v in range(ng):
            if (lab_f[u] == lab_g[v]
                    and abs(int(F.o[u]) - int(G.o[v])) <= w
                    and abs(int(F.c[u]) - int(G.c[v])) <= w):
                union(u, nf + v)
    return [find(t) for t in range(nf + ng)]
