"""Vertical periodicity reduction: repeated context layers along a path.

A context is a split (C_L, C_R) of some tree print; its e-th power occurring
at a node means e nested layers whose flanking subtrees repeat level by
level.  Detection anchors small-period high-exponent runs at each node's
opening and closing parenthesis, derives the context period from the depth
deltas, clips the exponent by run lengths, the subtree size, and the
divergence point (LCA of the two run endpoints), then pairs occurrences
across the forests with orthogonal-range-successor queries.  Reduction cuts
matching layers down to 14k repetitions on both sides at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .forest import LabeledForest
from .indexes import LcaIndex, OrsIndex
from .horizontal import filter_runs


@dataclass(frozen=True)
class QEntry:
    """Per-position anchor: period and endpoint of the dominant run.

    For an opening parenthesis the endpoint is the exclusive run end to the
    right; for a closing parenthesis it is the position just before the run
    start to the left.  The default (q=1, endpoint=own position) means no
    qualifying run is anchored there.
    """

    q: int
    endpoint: int


@dataclass(frozen=True)
class ContextOcc:
    """Maximal context power at node u: |C_L|=q_l, |C_R|=q_r, exponent e."""

    u: int
    q_l: int
    q_r: int
    e: int


@dataclass(frozen=True)
class VertOcc:
    """Synchronized context power at nodes (u_f, u_g), common exponent e."""

    u_f: int
    u_g: int
    q_l: int
    q_r: int
    e: int


def compute_q(F: LabeledForest, k: int):
    """Anchor arrays (q, endpoint) per parenthesis position.

    An opening position inside a filtered run whose suffix keeps exponent
    >= 16k anchors that run; closing positions anchor run prefixes.  Each
    position is written at most once (runs this long cannot share it).
    """
    codes = F.paren().codes
    m = len(codes)
    q_arr = np.ones(m, dtype=np.int64)
    end_arr = np.arange(m, dtype=np.int64)
    is_open = (codes & 1) == 0
    need = 16 * k
    for r in filter_runs(codes, k):
        span = np.arange(r.i, r.j)
        opens = span[is_open[r.i:r.j]]
        good = opens[(r.j - opens) >= need * r.p]
        if len(good):
            assert (end_arr[good] == good).all(), "position anchored twice"
            q_arr[good] = r.p
            end_arr[good] = r.j
        closes = span[~is_open[r.i:r.j]]
        good = closes[(closes - (r.i - 1)) >= need * r.p]
        if len(good):
            assert (end_arr[good] == good).all(), "position anchored twice"
            q_arr[good] = r.p
            end_arr[good] = r.i - 1
    return q_arr, end_arr


def compute_contexts(F: LabeledForest, k: int) -> list[ContextOcc]:
    """Maximal small context powers per node, in opening-position order."""
    if F.n == 0:
        return []
    q_arr, end_arr = compute_q(F, k)
    o, c = F.o, F.c
    pos = F.position_index()
    D, node_at = pos.D, pos.node_at
    oq = q_arr[o]
    oend = end_arr[o]
    cq = q_arr[c]
    cend = end_arr[c]
    cand = (oend != o) & (cend != c) & ((c - o) >= np.maximum(oq, cq))
    out: list[ContextOcc] = []
    lca: LcaIndex | None = None
    for u in np.flatnonzero(cand).tolist():
        ou, cu = int(o[u]), int(c[u])
        q_l, j_l = int(oq[u]), int(oend[u])
        q_r, j_r = int(cq[u]), int(cend[u])
        d_l = int(D[ou + q_l] - D[ou])
        d_r = int(D[cu - q_r] - D[cu])
        if d_l < 1 or d_r < 1:
            continue
        d = d_l // gcd(d_l, d_r) * d_r
        cl_len = q_l * (d // d_l)
        cr_len = q_r * (d // d_r)
        if cl_len > 4 * k or cr_len > 4 * k:
            continue
        # nodes at the run endpoints, clipped into sub(u); a run escaping the
        # subtree is already capped by the size ratio below
        pl = min(j_l - 1, cu)
        pr = max(j_r + 1, ou)
        if lca is None:
            lca = LcaIndex(F)
        vstar = lca.lca(int(node_at[pl]), int(node_at[pr]))
        assert vstar is not None
        e = min((j_l - ou) // cl_len,
                (cu - j_r) // cr_len,
                (cu - ou + 1) // (cl_len + cr_len),
                int(D[o[vstar]] - D[ou] + 1) // d)
        if e >= 16 * k:
            out.append(ContextOcc(u, cl_len, cr_len, e))
    return out


def _context_key(codes: np.ndarray, o: int, c: int, q_l: int, q_r: int) -> bytes:
    return codes[o:o + q_l].tobytes() + b"|" + codes[c - q_r + 1:c + 1].tobytes()


def vert_periods(F: LabeledForest, G: LabeledForest, k: int) -> list[VertOcc]:
    """Pair context powers of F with equal-context powers of G within the
    2k-by-2k window, advancing past each hit's reduced span.

    A run of nested occurrences enters the index once per node, so the min-y
    answer may be an inner layer of the same tower; the hit is lifted to the
    outermost same-context entry still inside both windows, otherwise the
    reduction could keep 16k synchronized layers alive.
    """
    cf = compute_contexts(F, k)
    cg = compute_contexts(G, k)
    if not cf or not cg:
        return []
    codes_f = F.paren().codes
    codes_g = G.paren().codes
    keys = [_context_key(codes_g, int(G.o[t.u]), int(G.c[t.u]), t.q_l, t.q_r)
            for t in cg]
    ors = OrsIndex.build(keys,
                         xs=[int(G.o[t.u]) for t in cg],
                         ys=[int(G.c[t.u]) for t in cg],
                         nodes=[t.u for t in cg],
                         payloads=[t.e for t in cg])
    cg_map = {t.u: t for t in cg}
    node_at_g = G.position_index().node_at
    out: list[VertOcc] = []
    i = -1
    for t in cf:
        ou, cu = int(F.o[t.u]), int(F.c[t.u])
        if ou <= i:
            continue
        key = _context_key(codes_f, ou, cu, t.q_l, t.q_r)
        hit = ors.query(key, ou - 2 * k, ou + 2 * k, cu - 2 * k, cu + 2 * k)
        if hit is None:
            continue
        v, e_g = hit
        while True:
            p = int(G.o[v]) - t.q_l
            if p < max(0, ou - 2 * k):
                break
            w = int(node_at_g[p])
            ent = cg_map.get(w)
            if (ent is None or int(G.o[w]) != p or ent.q_l != t.q_l
                    or ent.q_r != t.q_r
                    or abs(int(G.c[w]) - cu) > 2 * k
                    or _context_key(codes_g, p, int(G.c[w]), t.q_l,
                                    t.q_r) != key):
                break
            v, e_g = w, ent.e
        e = min(t.e, e_g)
        out.append(VertOcc(t.u, v, t.q_l, t.q_r, e))
        i = ou + (e - 8 * k) * t.q_l
    return out


def vert_sync_reductions(F: LabeledForest, G: LabeledForest, k: int):
    """Cut every synchronized context power to 14k layers on both sides.

    Each occurrence contributes two interval reductions: the outermost
    left-part copies starting at the opening positions, and the outermost
    right-part copies ending at the closing positions.
    """
    occs = vert_periods(F, G, k)
    sites: list[tuple[int, int, int, int]] = []
    for t in occs:
        sites.append((int(F.o[t.u_f]), int(G.o[t.u_g]), t.q_l, t.e))
        sites.append((int(F.c[t.u_f]) - t.q_r * t.e + 1,
                      int(G.c[t.u_g]) - t.q_r * t.e + 1, t.q_r, t.e))
    sites.sort()
    sf = F.paren().codes
    sg = G.paren().codes
    parts_f: list[np.ndarray] = []
    parts_g: list[np.ndarray] = []
    i_f = i_g = 0
    for (lf, lg, q, e) in sites:
        assert e >= 14 * k
        assert lf >= i_f and lg >= i_g, "vertical reduction sites must not overlap"
        parts_f.append(sf[i_f:lf])
        parts_g.append(sg[i_g:lg])
        i_f = lf + q * (e - 14 * k)
        i_g = lg + q * (e - 14 * k)
    parts_f.append(sf[i_f:])
    parts_g.append(sg[i_g:])
    F2 = LabeledForest.from_codes(np.concatenate(parts_f))
    G2 = LabeledForest.from_codes(np.concatenate(parts_g))
    return F2, G2
