import numpy as np
import pytest

from tedk._naive import (optimal_tree_alignments, ted_brute,
                         ted_brute_constrained)
from tedk.alignment import eval_alignment, is_tree_alignment
from tedk.generate import alphabet, apply_random_edits, random_forest
from tedk.oracle import INF, ted_constrained, ted_exact, ted_threshold

from conftest import forest


def test_exact_examples(interner):
    F = forest("(a(b)(c))", interner)
    assert ted_exact(F, F) == 0
    assert ted_exact(forest("(a)", interner), forest("(b)", interner)) == 1
    F = forest("(a)(b(x)(y)(z))", interner)
    G = forest("(a(x)(y)(z))", interner)
    assert ted_exact(F, G) == 2
    # no single edit suffices: exhaustive check via the brute oracle
    assert ted_brute(F, G) == 2


def test_exact_matches_brute(interner, rng):
    syms = alphabet(interner, 2)
    for _ in range(40):
        F = random_forest(rng, int(rng.integers(0, 7)), 3, syms)
        G = random_forest(rng, int(rng.integers(0, 7)), 3, syms)
        assert ted_exact(F, G) == ted_brute(F, G)


def test_threshold_examples(interner):
    F = forest("(a(b))", interner)
    assert ted_threshold(F, F, 0) == 0
    assert ted_threshold(forest("(a)", interner), forest("(b)", interner), 0) == INF
    with pytest.raises(ValueError):
        ted_threshold(F, F, -1)


def test_threshold_equals_clamped_exact(interner, rng):
    syms = alphabet(interner, 4)
    for t in range(150):
        F = random_forest(rng, int(rng.integers(0, 30)), 5, syms)
        if rng.random() < 0.5:
            G = apply_random_edits(rng, F, int(rng.integers(0, 6)), syms)
        else:
            G = random_forest(rng, int(rng.integers(0, 30)), 5, syms)
        d = ted_exact(F, G)
        k = int(rng.integers(1, 6))
        assert ted_threshold(F, G, k) == (d if d <= k else INF)


def test_metric_sanity(interner, rng):
    syms = alphabet(interner, 3)
    fs = [random_forest(rng, int(rng.integers(0, 12)), 4, syms) for _ in range(12)]
    for F in fs:
        assert ted_exact(F, F) == 0
    for _ in range(30):
        F, G, H = (fs[int(t)] for t in rng.integers(0, len(fs), 3))
        dfg, dgf = ted_exact(F, G), ted_exact(G, F)
        assert dfg == dgf
        assert abs(F.n - G.n) <= dfg <= F.n + G.n
        assert ted_exact(F, H) <= dfg + ted_exact(G, H)


def test_string_view_consistency(interner, rng):
    # ted equals half the string edit cost of the best tree alignment
    syms = alphabet(interner, 2)
    for _ in range(15):
        F = random_forest(rng, int(rng.integers(0, 6)), 3, syms)
        G = random_forest(rng, int(rng.integers(0, 6)), 3, syms)
        best, alns = optimal_tree_alignments(F, G)
        assert ted_exact(F, G) == best
        for A in alns[:10]:
            assert is_tree_alignment(A, F, G)
            cost = eval_alignment(A, F.paren().codes, G.paren().codes).cost
            assert cost == 2 * best


def test_constrained_examples(interner, rng):
    F = forest("(a(b)(c))", interner)
    G = forest("(a(b)(c))", interner)
    M = np.empty((0, 2), dtype=np.int64)
    assert ted_constrained(F, G, M, interner) == ted_exact(F, G) == 0
    assert ted_constrained(F, G, [(0, 0)], interner) == 0
    # label-mismatching pair is rejected
    assert ted_constrained(F, G, [(0, 1)], interner) == INF
    # crossing pairs are rejected
    assert ted_constrained(F, G, [(1, 2), (2, 1)], interner) == INF


def test_constrained_matches_brute(interner, rng):
    syms = alphabet(interner, 2)
    done = 0
    while done < 25:
        F = random_forest(rng, int(rng.integers(1, 8)), 3, syms)
        G = apply_random_edits(rng, F, int(rng.integers(0, 3)), syms)
        if G.n == 0 or G.n > 8:
            continue
        pairs = []
        for u in rng.permutation(F.n)[: int(rng.integers(1, 4))]:
            for v in rng.permutation(G.n):
                if F.labels[u] == G.labels[v]:
                    from tedk.partial import validate_matching
                    try:
                        validate_matching(F, G, np.array(pairs + [(int(u), int(v))]))
                        pairs.append((int(u), int(v)))
                        break
                    except ValueError:
                        continue
        if not pairs:
            continue
        M = np.array(pairs, dtype=np.int64)
        assert ted_constrained(F, G, M, interner) == ted_brute_constrained(F, G, M)
        done += 1
