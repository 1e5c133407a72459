"""Built-in check suites behind `tedk selftest`.

Each check prints one pass/fail line; quick keeps counts small, full runs
the oracle-equivalence sweep at acceptance scale.  Returns overall success.
"""

from __future__ import annotations

import numpy as np

from . import _naive
from .alignment import eval_alignment, greedy_bounded_align, is_greedy
from .engine import EngineConfig, ted_bounded
from .forest import LabelInterner
from .generate import (alphabet, apply_random_edits, planted_pair,
                       random_forest)
from .horizontal import min_balance_rotations, sync_reductions
from .indexes import compute_runs
from .oracle import ted_threshold
from .partial import partial_reduce
from .vertical import vert_sync_reductions


def _check_runs(rng, count: int) -> tuple[int, int]:
    bad = 0
    for _ in range(count):
        n = int(rng.integers(0, 120))
        S = rng.integers(0, 3, n)
        got = [(r.i, r.j, r.p) for r in compute_runs(S)]
        if sorted(got) != _naive.naive_runs(S) or len(got) >= max(1, n):
            bad += 1
    return bad, count


def _check_greedy(rng, count: int) -> tuple[int, int]:
    bad = 0
    for _ in range(count):
        nx, ny = rng.integers(0, 30, 2)
        X = rng.integers(0, 3, nx)
        Y = rng.integers(0, 3, ny)
        w = int(rng.integers(0, 5))
        k = int(rng.integers(w, 8))
        A = greedy_bounded_align(X, Y, k, w)
        want = _naive.banded_edit_cost(X, Y, w)
        if want is None or want > k:
            ok = A is None
        else:
            ok = (A is not None and eval_alignment(A, X, Y).cost == want
                  and A.width() <= w and is_greedy(A, X, Y))
        bad += 0 if ok else 1
    return bad, count


def _check_sigma() -> tuple[int, int]:
    # ")][()(" with square/round labels -> 2 ; "(((((" -> impossible
    rd, sq = 0, 1
    X = np.array([(rd << 1) | 1, (sq << 1) | 1, sq << 1, rd << 1,
                  (rd << 1) | 1, rd << 1], dtype=np.int64)
    bad = 0 if min_balance_rotations(X) == 2 else 1
    Y = np.array([rd << 1] * 5, dtype=np.int64)
    bad += 0 if min_balance_rotations(Y) is None else 1
    return bad, 2


def _check_reductions(rng, count: int, interner) -> tuple[int, int]:
    bad = 0
    for t in range(count):
        k = int(rng.integers(1, 3))
        F, G, _ = planted_pair(rng, int(rng.integers(0, 40)), k, 2, interner,
                               kind=("horizontal", "vertical", "mixed")[t % 3])
        want = ted_threshold(F, G, k)
        F1, G1 = sync_reductions(F, G, k)
        F2, G2 = vert_sync_reductions(F1, G1, k)
        if ted_threshold(F1, G1, k) != want or ted_threshold(F2, G2, k) != want:
            bad += 1
    return bad, count


def _check_partial(rng, count: int, interner) -> tuple[int, int]:
    from ._naive import ted_brute_constrained
    bad = 0
    for _ in range(count):
        syms = alphabet(interner, 2)
        F = random_forest(rng, int(rng.integers(1, 8)), 3, syms)
        G = apply_random_edits(rng, F, int(rng.integers(0, 2)), syms)
        # grow a random non-crossing matching greedily
        pairs = []
        for u in rng.permutation(F.n)[:3]:
            for v in rng.permutation(G.n):
                cand = pairs + [(int(u), int(v))]
                if F.labels[u] == G.labels[v]:
                    try:
                        from .partial import validate_matching
                        validate_matching(F, G, np.array(cand))
                        pairs = cand
                        break
                    except ValueError:
                        continue
        M = np.array(pairs, dtype=np.int64).reshape(-1, 2)
        k = int(rng.integers(1, 4))
        F2, G2 = partial_reduce(F, G, M, k, interner)
        got = ted_threshold(F2, G2, k)
        want = ted_brute_constrained(F, G, M)
        want = want if want <= k else float("inf")
        if got != want:
            bad += 1
    return bad, count


def _check_engine(rng, count: int, interner) -> tuple[int, int]:
    bad = 0
    for t in range(count):
        syms = alphabet(interner, int(rng.integers(1, 5)))
        n = int(rng.integers(0, 40))
        F = random_forest(rng, n, int(rng.integers(1, 7)), syms)
        if rng.random() < 0.5:
            G = apply_random_edits(rng, F, int(rng.integers(0, 7)), syms)
        else:
            G = random_forest(rng, int(rng.integers(0, 40)),
                              int(rng.integers(1, 7)), syms)
        k = int(rng.integers(1, 6))
        if ted_bounded(F, G, EngineConfig(k=k, seed=t), interner) \
                != ted_threshold(F, G, k):
            bad += 1
    return bad, count


def run_selftest(level: str = "quick") -> bool:
    scale = 1 if level == "quick" else 10
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(20240801)))
    interner = LabelInterner()
    checks = [
        ("runs vs naive maximal-periodicity scan", _check_runs(rng, 30 * scale)),
        ("greedy alignment vs banded DP", _check_greedy(rng, 60 * scale)),
        ("balance rotation examples", _check_sigma()),
        ("periodicity reductions preserve ted<=k",
         _check_reductions(rng, 12 * scale, interner)),
        ("partial matching vs constrained brute force",
         _check_partial(rng, 10 * scale, interner)),
        ("engine vs oracle", _check_engine(rng, 40 * scale, interner)),
    ]
    ok = True
    for name, (bad, count) in checks:
        status = "ok" if bad == 0 else "FAIL"
        print(f"[{status}] {name}: {count - bad}/{count}")
        ok = ok and bad == 0
    return ok
