"""Reductions from matching-constrained distance to plain bounded distance.

Given forests F, G and a non-crossing matching M of node pairs that any
candidate alignment must match, three chained constructions turn the
constrained problem into an unconstrained one: height flattening (every
matched node becomes a leaf of a decomposed piece, single-node separator
trees keep pieces aligned), pruning of redundant matched leaf pairs (a pair
whose immediate left siblings are also matched is implied), and a uniqueness
gadget (k+1 fresh-labeled children force any cost-<=k alignment to match the
pair).  All constructions are vectorized over the parenthesis sequences.
"""

from __future__ import annotations

import numpy as np

from .errors import CrossingMatchingError
from .forest import CLOSE, LabeledForest, LabelInterner


def as_matching(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return M.reshape(0, 2)
    if M.ndim != 2 or M.shape[1] != 2:
        raise ValueError("matching must be an (m, 2) array of node pairs")
    return M


def validate_matching(F: LabeledForest, G: LabeledForest, M) -> np.ndarray:
    """Check labels and the non-crossing property; returns M as an array."""
    M = as_matching(M)
    if len(M) == 0:
        return M
    u, v = M[:, 0], M[:, 1]
    if u.min() < 0 or u.max() >= F.n or v.min() < 0 or v.max() >= G.n:
        raise ValueError("matching refers to nodes outside the forests")
    if not np.array_equal(F.labels[u], G.labels[v]):
        raise CrossingMatchingError("matched nodes must share labels")
    xs = np.concatenate([F.o[u], F.c[u]])
    ys = np.concatenate([G.o[v], G.c[v]])
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    if len(xs) > 1 and ((np.diff(xs) <= 0).any() or (np.diff(ys) <= 0).any()):
        raise CrossingMatchingError("matching positions cross")
    return M


def _marked_class(F: LabeledForest, marked: np.ndarray) -> np.ndarray:
    """class_of[u]: 0 if u has no marked proper ancestor, else 1 + the index
    (into `marked`, in the given order) of the nearest marked proper ancestor.
    """
    n = F.n
    cls = np.zeros(n, dtype=np.int64)
    m = len(marked)
    if m == 0 or n == 0:
        return cls
    mo = np.sort(F.o[marked])
    mc = np.sort(F.c[marked])
    # number of marked proper ancestors of u = marked intervals open at o(u)
    opens_before = np.searchsorted(mo, F.o)
    closes_before = np.searchsorted(mc, F.o)
    md = opens_before - closes_before
    # marked nesting depth of each marked node (proper ancestors only)
    md_marked = md[marked]
    index_of = np.empty(n, dtype=np.int64)
    index_of[marked] = np.arange(m)
    for level in range(int(md_marked.max()) + 1 if m else 0):
        nodes = np.flatnonzero(md == level + 1)
        if len(nodes) == 0:
            continue
        anc_pool = marked[md_marked == level]
        pool_o = F.o[anc_pool]
        order = np.argsort(pool_o)
        anc_pool = anc_pool[order]
        pool_o = pool_o[order]
        at = np.searchsorted(pool_o, F.o[nodes], side="right") - 1
        cls[nodes] = index_of[anc_pool[at]] + 1
    return cls


def _assemble_with_separators(F: LabeledForest, cls: np.ndarray, m: int,
                              sep_code_open: int, sep_code_close: int):
    """Reorder F's characters by (class, position) with a separator pair
    between consecutive classes; returns (codes, new_id_of_old_node,
    separator_new_ids)."""
    n = F.n
    pos_cls = np.empty(2 * n, dtype=np.int64)
    pos_cls[F.o] = cls
    pos_cls[F.c] = cls
    perm = np.argsort(pos_cls, kind="stable")
    sorted_codes = F.codes[perm]
    sorted_cls = pos_cls[perm]
    out_len = 2 * n + 2 * m
    out = np.empty(out_len, dtype=np.int64)
    # each sorted position is shifted right by two chars per preceding separator
    out_pos = np.arange(2 * n, dtype=np.int64) + 2 * sorted_cls
    out[out_pos] = sorted_codes
    counts = np.bincount(sorted_cls, minlength=m + 1)
    seg_end = np.cumsum(counts)
    sep_at = seg_end[:-1] + 2 * np.arange(m, dtype=np.int64)
    out[sep_at] = sep_code_open
    out[sep_at + 1] = sep_code_close
    # new pre-order id of old node u = rank of its open among output opens
    is_open_out = (out & 1) == 0
    open_rank = np.cumsum(is_open_out) - 1
    inv_perm_pos = np.empty(2 * n, dtype=np.int64)
    inv_perm_pos[perm] = out_pos
    new_id = open_rank[inv_perm_pos[F.o]]
    sep_ids = open_rank[sep_at]
    return out, new_id, sep_ids


def reduce_height(F: LabeledForest, G: LabeledForest, M,
                  interner: LabelInterner):
    """Flatten matched nodes into leaves of decomposed pieces.

    Returns (F', G', M') with |F'| = |F| + |M|, |M'| = 2|M|, matched nodes
    all leaves, and the constrained distance unchanged.
    """
    M = validate_matching(F, G, M)
    m = len(M)
    if m == 0:
        return F, G, M
    order = np.argsort(F.o[M[:, 0]], kind="stable")
    M = M[order]
    sep = interner.fresh("sep")
    so, sc = sep << 1, (sep << 1) | 1
    cls_f = _marked_class(F, M[:, 0])
    cls_g = _marked_class(G, M[:, 1])
    codes_f, newf, seps_f = _assemble_with_separators(F, cls_f, m, so, sc)
    codes_g, newg, seps_g = _assemble_with_separators(G, cls_g, m, so, sc)
    F2 = LabeledForest.from_codes(codes_f)
    G2 = LabeledForest.from_codes(codes_g)
    M2 = np.concatenate([
        np.stack([newf[M[:, 0]], newg[M[:, 1]]], axis=1),
        np.stack([seps_f, seps_g], axis=1),
    ])
    assert F2.n == F.n + m and G2.n == G.n + m
    # matched nodes must now all be leaves
    assert (F2.c[M2[:, 0]] == F2.o[M2[:, 0]] + 1).all()
    assert (G2.c[M2[:, 1]] == G2.o[M2[:, 1]] + 1).all()
    return F2, G2, M2


def prune_redundant(F: LabeledForest, G: LabeledForest, M):
    """Drop matched leaf pairs whose immediate left siblings are also matched.

    The surviving matching satisfies |M'| <= (2/5)(|F'| + |G'| + 1).
    """
    M = as_matching(M)
    if len(M) and not ((F.c[M[:, 0]] == F.o[M[:, 0]] + 1).all()
                       and (G.c[M[:, 1]] == G.o[M[:, 1]] + 1).all()):
        raise ValueError("prune_redundant needs a leaves-only matching")
    if len(M) == 0:
        return F, G, M

    def left_sibling(H: LabeledForest, nodes: np.ndarray) -> np.ndarray:
        o = H.o[nodes]
        prev = o - 1
        node_at = H.position_index().node_at
        has = (prev >= 0) & ((np.where(prev >= 0, H.codes[prev], 0) & 1) == CLOSE)
        return np.where(has, node_at[np.maximum(prev, 0)], -1)

    f2g = np.full(F.n, -1, dtype=np.int64)
    f2g[M[:, 0]] = M[:, 1]
    ls_f = left_sibling(F, M[:, 0])
    ls_g = left_sibling(G, M[:, 1])
    redundant = (ls_f >= 0) & (ls_g >= 0) & (f2g[np.maximum(ls_f, 0)] == ls_g)
    if not redundant.any():
        F2, G2, M2 = F, G, M
    else:
        drop_f = M[redundant, 0]
        drop_g = M[redundant, 1]
        keep_f = np.setdiff1d(np.arange(F.n), drop_f)
        keep_g = np.setdiff1d(np.arange(G.n), drop_g)
        F2 = F.induced(keep_f)
        G2 = G.induced(keep_g)
        remap_f = np.full(F.n, -1, dtype=np.int64)
        remap_f[keep_f] = np.arange(len(keep_f))
        remap_g = np.full(G.n, -1, dtype=np.int64)
        remap_g[keep_g] = np.arange(len(keep_g))
        kept = M[~redundant]
        M2 = np.stack([remap_f[kept[:, 0]], remap_g[kept[:, 1]]], axis=1)
    assert 5 * len(M2) <= 2 * (F2.n + G2.n + 1)
    return F2, G2, M2


def gadget(F: LabeledForest, G: LabeledForest, M, k: int,
           interner: LabelInterner):
    """Attach k+1 uniquely labeled children to each matched leaf pair."""
    M = as_matching(M)
    m = len(M)
    if m == 0:
        return F, G
    if not ((F.c[M[:, 0]] == F.o[M[:, 0]] + 1).all()
            and (G.c[M[:, 1]] == G.o[M[:, 1]] + 1).all()):
        raise ValueError("gadget needs a leaves-only matching")
    slots = k + 1
    base = interner.fresh_block(m * slots, "gad")
    syms = base + np.arange(m * slots, dtype=np.int64).reshape(m, slots)
    block = np.empty((m, 2 * slots), dtype=np.int64)
    block[:, 0::2] = syms << 1
    block[:, 1::2] = (syms << 1) | 1

    def attach(H: LabeledForest, nodes: np.ndarray) -> LabeledForest:
        order = np.argsort(H.c[nodes], kind="stable")
        closes = H.c[nodes][order]
        blk = block[order]
        out = np.empty(2 * H.n + 2 * slots * m, dtype=np.int64)
        shift = np.searchsorted(closes, np.arange(2 * H.n), side="right")
        # the block of pair t occupies the 2*slots chars right before close t
        out[np.arange(2 * H.n) + 2 * slots * shift] = H.codes
        starts = closes + 2 * slots * np.arange(m, dtype=np.int64)
        idx = (starts[:, None] + np.arange(2 * slots)[None, :]).ravel()
        out[idx] = blk.ravel()
        return LabeledForest.from_codes(out)

    F2 = attach(F, M[:, 0])
    G2 = attach(G, M[:, 1])
    assert F2.n == F.n + slots * m and G2.n == G.n + slots * m
    assert F2.height() <= F.height() + 1 and G2.height() <= G.height() + 1
    return F2, G2


def partial_reduce(F: LabeledForest, G: LabeledForest, M, k: int,
                   interner: LabelInterner):
    """Chain reduce_height -> prune_redundant -> gadget."""
    F1, G1, M1 = reduce_height(F, G, M, interner)
    F2, G2, M2 = prune_redundant(F1, G1, M1)
    return gadget(F2, G2, M2, k, interner)
