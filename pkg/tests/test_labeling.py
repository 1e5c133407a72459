import numpy as np
import pytest

from tedk._naive import naive_compat_classes, optimal_tree_alignments, trimmed_print
from tedk.alignment import Alignment, eval_alignment, is_greedy
from tedk.generate import alphabet, apply_random_edits, random_forest
from tedk.labeling import (JointLabeling, alignment_forest_cost,
                           compat_cost_equal_check, compat_refine,
                           lookahead_cost_bound_check, lookahead_refine,
                           refines)

from conftest import forest

BASE = 0x1234567


def same_partition(lab1, lab2):
    return refines(lab1, lab2) and refines(lab2, lab1)


def test_lookahead_rejects_zero_depth(interner):
    F = forest("(a)", interner)
    with pytest.raises(ValueError):
        lookahead_refine(F, F, JointLabeling.base(F, F), 0, BASE)


def test_lookahead_depth_one_is_identity(interner, rng):
    syms = alphabet(interner, 3)
    for _ in range(10):
        F = random_forest(rng, int(rng.integers(0, 20)), 4, syms)
        G = random_forest(rng, int(rng.integers(0, 20)), 4, syms)
        lab = JointLabeling.base(F, G)
        out = lookahead_refine(F, G, lab, 1, BASE)
        assert same_partition(out, lab)


def test_lookahead_full_depth_encodes_subtrees(interner, rng):
    syms = alphabet(interner, 2)
    for _ in range(10):
        F = random_forest(rng, int(rng.integers(1, 15)), 4, syms)
        G = random_forest(rng, int(rng.integers(1, 15)), 4, syms)
        d = max(F.height(), G.height()) + 1
        out = lookahead_refine(F, G, JointLabeling.base(F, G), d, BASE)
        subs = ([F.paren().codes[F.o[u]:F.c[u] + 1].tobytes() for u in range(F.n)]
                + [G.paren().codes[G.o[v]:G.c[v] + 1].tobytes() for v in range(G.n)])
        ids = np.concatenate([out.f, out.g])
        for a in range(len(ids)):
            for b in range(len(ids)):
                assert (ids[a] == ids[b]) == (subs[a] == subs[b])


def test_lookahead_matches_naive_trimmed_prints(interner, rng):
    syms = alphabet(interner, 2)
    for d in (1, 2, 3, 4):
        F = random_forest(rng, 25, 5, syms)
        G = random_forest(rng, 25, 5, syms)
        lab = JointLabeling.base(F, G)
        out = lookahead_refine(F, G, lab, d, BASE)
        prints = ([trimmed_print(F, lab.f, u, d) for u in range(F.n)]
                  + [trimmed_print(G, lab.g, v, d) for v in range(G.n)])
        ids = np.concatenate([out.f, out.g]).tolist()
        seen = {}
        for cid, pr in zip(ids, prints):
            assert seen.setdefault(cid, pr) == pr
        assert len(set(ids)) == len(set(prints))


def test_lookahead_audit_mode(interner, rng):
    syms = alphabet(interner, 2)
    F = random_forest(rng, 30, 4, syms)
    G = random_forest(rng, 30, 4, syms)
    lookahead_refine(F, G, JointLabeling.base(F, G), 3, BASE, audit=True)


def test_compat_refine_examples(interner, rng):
    # identical copies at w=0: each node lands with its positional twin
    syms = alphabet(interner, 3)
    F = random_forest(rng, 20, 4, syms)
    out = compat_refine(F, F, JointLabeling.base(F, F), 0)
    assert (out.f == out.g).all()
    assert len(np.unique(out.f)) == len(np.unique(out.f))


def test_compat_refine_matches_naive_closure(interner, rng):
    syms = alphabet(interner, 2)
    for w in (0, 1, 2, 4, 100):
        F = random_forest(rng, int(rng.integers(1, 25)), 4, syms)
        G = random_forest(rng, int(rng.integers(1, 25)), 4, syms)
        lab = JointLabeling.base(F, G)
        out = compat_refine(F, G, lab, w)
        naive = naive_compat_classes(F, G, lab.f.tolist(), lab.g.tolist(), w)
        got = np.concatenate([out.f, out.g]).tolist()
        groups = {}
        for a, b in zip(got, naive):
            assert groups.setdefault(a, b) == b
        assert len(set(got)) == len(set(naive))


def test_refinement_direction(interner, rng):
    syms = alphabet(interner, 2)
    F = random_forest(rng, 25, 5, syms)
    G = random_forest(rng, 25, 5, syms)
    lab = JointLabeling.base(F, G)
    la = lookahead_refine(F, G, lab, 3, BASE)
    assert refines(la, lab)
    cp = compat_refine(F, G, la, 2)
    assert refines(cp, la) and refines(cp, lab)
    # a strictly coarser labeling does not refine a finer one
    if la.classes() > lab.classes():
        assert not refines(lab, la)


def test_lookahead_cost_bound(interner, rng):
    from tedk._naive import optimal_tree_alignments
    syms = alphabet(interner, 2)
    for _ in range(8):
        F = random_forest(rng, int(rng.integers(1, 6)), 3, syms)
        G = apply_random_edits(rng, F, int(rng.integers(0, 3)), syms)
        if G.n == 0 or G.n > 6:
            continue
        lab = JointLabeling.base(F, G)
        _, alns = optimal_tree_alignments(F, G)
        for A in alns[:5]:
            for d in (1, 2, 3):
                assert lookahead_cost_bound_check(F, G, lab, d, A, BASE)
            w = A.width()
            assert compat_cost_equal_check(F, G, lab, w, A)


def test_identity_alignment_costs_zero(interner, rng):
    syms = alphabet(interner, 2)
    F = random_forest(rng, 12, 4, syms)
    A = Alignment.identity(2 * F.n)
    lab = JointLabeling.base(F, F)
    assert alignment_forest_cost(A, F, F, lab) == 0
    assert lookahead_cost_bound_check(F, F, lab, 3, A, BASE)


def test_optimum_alignment_greedy_under_full_lookahead(interner, rng):
    # some optimum tree alignment is greedy on the fully refined strings
    import sys
    sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))
    from test_alignment import budget_alignments
    from tedk.alignment import is_tree_alignment
    from tedk.oracle import ted_exact
    syms = alphabet(interner, 2)
    done = 0
    while done < 10:
        F = random_forest(rng, int(rng.integers(1, 5)), 3, syms)
        G = random_forest(rng, int(rng.integers(1, 5)), 3, syms)
        best = ted_exact(F, G)
        if best > 2:
            continue
        h = max(F.height(), G.height(), 1)
        lab = lookahead_refine(F, G, JointLabeling.base(F, G), h, BASE)
        sf = F.paren(lab.f).codes
        sg = G.paren(lab.g).codes
        sf0 = F.paren().codes
        sg0 = G.paren().codes
        opts = [A for A in budget_alignments(sf0, sg0, 2 * best, max(2 * best, 1))
                if is_tree_alignment(A, F, G)
                and eval_alignment(A, sf0, sg0).cost == 2 * best]
        assert opts, "enumeration must find an optimum tree alignment"
        assert any(is_greedy(A, sf, sg) for A in opts)
        done += 1
