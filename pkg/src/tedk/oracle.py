"""Exact tree edit distance by dynamic programming, with threshold cutoff.

The recurrence works on pre-order spans: a subforest is a contiguous id range
[i..e) that is a union of complete sibling trees.  Deleting the leftmost root
keeps the range contiguous ([i+1..e)), and matching the leftmost roots splits
both ranges at the subtree ends.  Values saturate at k+1, and a state whose
size difference already exceeds k is cut without recursion, which keeps the
explored region near the diagonal.  This module is the correctness oracle for
everything else, so it stays deliberately simple.
"""

from __future__ import annotations

import numpy as np

from .errors import CrossingMatchingError
from .forest import LabeledForest, LabelInterner
from .partial import gadget, reduce_height, validate_matching

INF = float("inf")


def _label_multiset_bound(F: LabeledForest, G: LabeledForest) -> int:
    """max(|F|, |G|) - (max label-preserving pairing) is a valid lower bound."""
    fa, fc = np.unique(F.labels, return_counts=True)
    ga, gc = np.unique(G.labels, return_counts=True)
    common, fi, gi = np.intersect1d(fa, ga, return_indices=True)
    shared = int(np.minimum(fc[fi], gc[gi]).sum()) if len(common) else 0
    return max(F.n, G.n) - shared


def _ted_dp(F: LabeledForest, G: LabeledForest, cap: int) -> int:
    """min(cap, ted(F, G)) via saturating leftmost-root DP."""
    endf = F.subtree_end.tolist()
    endg = G.subtree_end.tolist()
    labf = F.labels.tolist()
    labg = G.labels.tolist()
    nf, ng = F.n, G.n
    memo: dict[tuple[int, int, int, int], int] = {}
    root = (0, nf, 0, ng)
    stack = [root]
    while stack:
        s = stack[-1]
        if s in memo:
            stack.pop()
            continue
        fi, fe, gi, ge = s
        if fi == fe:
            memo[s] = min(ge - gi, cap)
            stack.pop()
            continue
        if gi == ge:
            memo[s] = min(fe - fi, cap)
            stack.pop()
            continue
        if abs((fe - fi) - (ge - gi)) >= cap:
            memo[s] = cap
            stack.pop()
            continue
        fend, gend = endf[fi], endg[gi]
        deps = ((fi + 1, fe, gi, ge),
                (fi, fe, gi + 1, ge),
                (fi + 1, fend, gi + 1, gend),
                (fend, fe, gend, ge))
        ready = True
        for d in deps:
            if d not in memo:
                if ready:
                    ready = False
                stack.append(d)
        if not ready:
            continue
        sub = (1 if labf[fi] != labg[gi] else 0) + memo[deps[2]] + memo[deps[3]]
        val = min(1 + memo[deps[0]], 1 + memo[deps[1]], sub, cap)
        memo[s] = val
        stack.pop()
    return memo[root]


def ted_exact(F: LabeledForest, G: LabeledForest) -> int:
    """Exact unit-cost tree edit distance (relabel/delete/insert)."""
    if F.paren() == G.paren():
        return 0
    return _ted_dp(F, G, F.n + G.n + 1)


def ted_threshold(F: LabeledForest, G: LabeledForest, k) -> int | float:
    """ted(F, G) if it is at most k, INF otherwise."""
    if k < 0:
        raise ValueError("threshold must be non-negative")
    if F.paren() == G.paren():
        return 0
    k = int(k)
    if abs(F.n - G.n) > k or _label_multiset_bound(F, G) > k:
        return INF
    val = _ted_dp(F, G, k + 1)
    return val if val <= k else INF


def ted_constrained(F: LabeledForest, G: LabeledForest, M,
                    interner: LabelInterner | None = None) -> int | float:
    """Minimum cost over tree alignments matching every pair of M.

    INF when M is not a non-crossing label-matching set.  Implemented by
    height flattening plus the uniqueness gadget at an unconstrained
    threshold, then the exact DP.
    """
    try:
        M = validate_matching(F, G, M)
    except (CrossingMatchingError, ValueError):
        return INF
    if len(M) == 0:
        return ted_exact(F, G)
    if interner is None:
        interner = LabelInterner()
        interner.fresh_block(int(max(F.labels.max(), G.labels.max())) + 1,
                             "pad")
    F1, G1, M1 = reduce_height(F, G, M, interner)
    k_free = F1.n + G1.n
    F2, G2 = gadget(F1, G1, M1, k_free, interner)
    return ted_exact(F2, G2)
